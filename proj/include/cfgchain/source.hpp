#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfgchain {

struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const { return end - begin; }
  bool operator==(const ByteSpan&) const = default;
};

enum class TokenKind {
  Keyword,
  Identifier,
  Punct,
  Operator,
  Literal,
  Comment,
  Whitespace,
  Error,
};

const char* token_kind_name(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::Error;
  std::string lexeme;
  ByteSpan span;
  int line = 1;
};

struct LineRecord {
  int number = 1;   // 1-based
  ByteSpan span;    // includes the trailing newline, if any
  int indent = 0;   // leading-whitespace width; tabs count 4 columns
  bool blank = true;
};

/// Tolerant lexical model of partial code. Tokenization is total: any byte
/// sequence produces a token stream whose lexemes concatenate back to the
/// input byte-exactly. Comments and string literals are single tokens, so
/// braces and keywords inside them never count as structure.
struct SourceUnit {
  std::string text;
  std::vector<LineRecord> lines;
  std::vector<Token> tokens;
};

/// The closed set of code-block kinds the pipeline recognizes.
enum class BlockKind { Class, Method, If, For, While, Switch };

inline constexpr int kBlockKindCount = 6;

const char* block_kind_name(BlockKind k);
std::optional<BlockKind> block_kind_from_name(std::string_view name);

struct BlockOpener {
  BlockKind kind = BlockKind::If;
  ByteSpan header;
  std::size_t body_start = 0;
  bool braceless = false;
  bool low_confidence = false;
};

SourceUnit tokenize(const std::string& text);

/// Block openers in source order. `class`/`if`/`for`/`while`/`switch` are
/// keyword-driven; `method` is a shape heuristic (identifier + parameter list
/// + `{` at class-member depth) because the input may be uncompilable.
std::vector<BlockOpener> find_block_openers(const SourceUnit& unit);

/// Collapses whitespace runs to one space, trims both ends and strips
/// trailing semicolons. Idempotent; case- and token-content-preserving.
std::string normalize_label(std::string_view label);

bool is_java_keyword(std::string_view word);

/// Reads a UTF-8 text file, normalizing CRLF to LF.
std::string load_source_file(const std::string& path);

}  // namespace cfgchain
