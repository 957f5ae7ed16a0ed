#include "cfgchain/source.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "cfgchain/error.hpp"

namespace cfgchain {

namespace {

const std::unordered_set<std::string_view>& keyword_table() {
  // Java-flavored but table-driven; swapping this table is the extension
  // point for other statically-typed languages.
  static const std::unordered_set<std::string_view> kw = {
      "abstract", "assert",     "boolean",  "break",      "byte",
      "case",     "catch",      "char",     "class",      "const",
      "continue", "default",    "do",       "double",     "else",
      "enum",     "extends",    "final",    "finally",    "float",
      "for",      "goto",       "if",       "implements", "import",
      "instanceof", "int",      "interface", "long",      "native",
      "new",      "package",    "private",  "protected",  "public",
      "return",   "short",      "static",   "strictfp",   "super",
      "switch",   "synchronized", "this",   "throw",      "throws",
      "transient", "try",       "var",      "void",       "volatile",
      "while",    "record",
  };
  return kw;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

// Longest-first so maximal munch falls out of the scan order.
const std::array<std::string_view, 36>& operator_table() {
  static const std::array<std::string_view, 36> ops = {
      ">>>=", "<<=", ">>=", ">>>", "==", "!=", "<=", ">=", "&&", "||",
      "++",   "--",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=",
      "<<",   ">>",  "->",  "+",   "-",  "*",  "/",  "%",  "=",  "<",
      ">",    "!",   "&",   "|",   "^",  "~",
  };
  return ops;
}

bool is_punct_char(char c) {
  switch (c) {
    case '(':
    case ')':
    case '{':
    case '}':
    case '[':
    case ']':
    case ';':
    case ',':
    case '.':
    case ':':
    case '@':
      return true;
    default:
      return false;
  }
}

std::vector<LineRecord> index_lines(const std::string& text) {
  std::vector<LineRecord> lines;
  std::size_t start = 0;
  int number = 1;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      if (i == text.size() && start == i) break;  // no trailing empty line
      LineRecord rec;
      rec.number = number++;
      rec.span = {start, i == text.size() ? i : i + 1};
      rec.indent = 0;
      rec.blank = true;
      for (std::size_t j = start; j < i; ++j) {
        char c = text[j];
        if (c == ' ') {
          rec.indent += 1;
        } else if (c == '\t') {
          rec.indent += 4;
        } else if (c == '\r') {
          continue;
        } else {
          rec.blank = false;
          break;
        }
      }
      lines.push_back(rec);
      start = i + 1;
    }
  }
  return lines;
}

}  // namespace

const char* token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Punct: return "punct";
    case TokenKind::Operator: return "operator";
    case TokenKind::Literal: return "literal";
    case TokenKind::Comment: return "comment";
    case TokenKind::Whitespace: return "whitespace";
    case TokenKind::Error: return "error";
  }
  return "error";
}

const char* block_kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::Class: return "class";
    case BlockKind::Method: return "method";
    case BlockKind::If: return "if";
    case BlockKind::For: return "for";
    case BlockKind::While: return "while";
    case BlockKind::Switch: return "switch";
  }
  return "if";
}

std::optional<BlockKind> block_kind_from_name(std::string_view name) {
  if (name == "class") return BlockKind::Class;
  if (name == "method") return BlockKind::Method;
  if (name == "if") return BlockKind::If;
  if (name == "for") return BlockKind::For;
  if (name == "while") return BlockKind::While;
  if (name == "switch") return BlockKind::Switch;
  return std::nullopt;
}

bool is_java_keyword(std::string_view word) {
  return keyword_table().count(word) > 0;
}

SourceUnit tokenize(const std::string& text) {
  SourceUnit unit;
  unit.text = text;
  unit.lines = index_lines(text);

  const std::size_t n = text.size();
  std::size_t i = 0;
  int line = 1;
  std::size_t line_idx = 0;

  auto line_of = [&](std::size_t pos) {
    while (line_idx + 1 < unit.lines.size() &&
           pos >= unit.lines[line_idx].span.end) {
      ++line_idx;
    }
    return unit.lines.empty() ? 1 : unit.lines[line_idx].number;
  };

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    Token t;
    t.kind = kind;
    t.span = {begin, end};
    t.lexeme = text.substr(begin, end - begin);
    t.line = line_of(begin);
    unit.tokens.push_back(std::move(t));
  };

  while (i < n) {
    const char c = text[i];
    const std::size_t begin = i;

    if (is_space_char(c)) {
      while (i < n && is_space_char(text[i])) ++i;
      push(TokenKind::Whitespace, begin, i);
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
      push(TokenKind::Comment, begin, i);
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      i += 2;
      while (i < n && !(text[i] == '*' && i + 1 < n && text[i + 1] == '/')) ++i;
      i = (i < n) ? i + 2 : n;  // unterminated comment runs to EOF
      push(TokenKind::Comment, begin, i);
      continue;
    }
    if (c == '"' || c == '\'') {
      const char quote = c;
      ++i;
      while (i < n && text[i] != quote && text[i] != '\n') {
        if (text[i] == '\\' && i + 1 < n) ++i;
        ++i;
      }
      if (i < n && text[i] == quote) ++i;  // unterminated closes at EOL
      push(TokenKind::Literal, begin, i);
      continue;
    }
    if (is_ident_start(c)) {
      while (i < n && is_ident_char(text[i])) ++i;
      std::string_view word(text.data() + begin, i - begin);
      TokenKind kind = TokenKind::Identifier;
      if (word == "true" || word == "false" || word == "null") {
        kind = TokenKind::Literal;
      } else if (is_java_keyword(word)) {
        kind = TokenKind::Keyword;
      }
      push(kind, begin, i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      ++i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                       text[i] == '.' || text[i] == '_')) {
        ++i;
      }
      push(TokenKind::Literal, begin, i);
      continue;
    }
    if (c == '?') {
      push(TokenKind::Operator, begin, ++i);
      continue;
    }
    {
      bool matched = false;
      std::string_view rest(text.data() + i, n - i);
      for (std::string_view op : operator_table()) {
        if (rest.substr(0, op.size()) == op) {
          i += op.size();
          push(TokenKind::Operator, begin, i);
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    if (is_punct_char(c)) {
      push(TokenKind::Punct, begin, ++i);
      continue;
    }
    // Unknown bytes become a single error token per run; never a failure.
    while (i < n && !is_space_char(text[i]) && !is_ident_start(text[i]) &&
           !is_punct_char(text[i]) && text[i] != '"' && text[i] != '\'' &&
           !std::isdigit(static_cast<unsigned char>(text[i]))) {
      bool op_ahead = false;
      std::string_view rest(text.data() + i, n - i);
      for (std::string_view op : operator_table()) {
        if (rest.substr(0, op.size()) == op) {
          op_ahead = true;
          break;
        }
      }
      if (op_ahead || text[i] == '?' || text[i] == '/') break;
      ++i;
    }
    if (i == begin) ++i;  // safety: always make progress
    push(TokenKind::Error, begin, i);
  }
  (void)line;
  return unit;
}

std::string normalize_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  bool in_space = false;
  for (char c : label) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
        c == '\v') {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  while (!out.empty() && (out.back() == ';' || out.back() == ' ')) {
    out.pop_back();
  }
  return out;
}

std::string load_source_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string raw = ss.str();
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r' && i + 1 < raw.size() && raw[i + 1] == '\n') continue;
    out.push_back(raw[i]);
  }
  return out;
}

}  // namespace cfgchain
