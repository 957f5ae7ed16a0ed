#include <doctest.h>

#include <random>

#include "cfgchain/source.hpp"
#include "support.hpp"

using namespace cfgchain;

namespace {

std::vector<TokenKind> kinds_of(const std::string& text) {
  std::vector<TokenKind> out;
  for (const auto& t : tokenize(text).tokens) {
    if (t.kind == TokenKind::Whitespace) continue;
    out.push_back(t.kind);
  }
  return out;
}

std::size_t count_kind(const SourceUnit& u, TokenKind kind) {
  std::size_t n = 0;
  for (const auto& t : u.tokens) {
    if (t.kind == kind) ++n;
  }
  return n;
}

// Brute-force opener oracle for brace-complete, error-free code: keyword scan
// outside strings/comments plus the method shape at class depth.
std::vector<std::string> oracle_openers(const std::string& text) {
  SourceUnit u = tokenize(text);
  std::vector<std::string> out;
  std::vector<const Token*> sig;
  for (const auto& t : u.tokens) {
    if (t.kind == TokenKind::Whitespace || t.kind == TokenKind::Comment) continue;
    sig.push_back(&t);
  }
  int class_brace_depth = -2;  // brace depth just inside the class body
  int depth = 0;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const std::string& w = sig[i]->lexeme;
    if (w == "{") ++depth;
    if (w == "}") --depth;
    if (sig[i]->kind == TokenKind::Keyword) {
      if (w == "class") {
        out.push_back("class");
        class_brace_depth = depth + 1;
      } else if (w == "if" || w == "for" || w == "while" || w == "switch") {
        out.push_back(w);
      }
    }
    if (w == "(" && i > 0 && sig[i - 1]->kind == TokenKind::Identifier &&
        depth == class_brace_depth) {
      // identifier '(' ... ')' '{' at class-member depth
      int paren = 1;
      std::size_t j = i + 1;
      while (j < sig.size() && paren > 0) {
        if (sig[j]->lexeme == "(") ++paren;
        if (sig[j]->lexeme == ")") --paren;
        ++j;
      }
      if (j < sig.size() && sig[j]->lexeme == "{") out.push_back("method");
    }
  }
  return out;
}

}  // namespace

TEST_CASE("tokenize: empty input has no tokens and no lines") {
  SourceUnit u = tokenize("");
  CHECK(u.tokens.empty());
  CHECK(u.lines.empty());
}

TEST_CASE("tokenize: kind sequence of a compact if statement") {
  auto kinds = kinds_of("if(i==1){return true}");
  std::vector<TokenKind> expected = {
      TokenKind::Keyword,  TokenKind::Punct,   TokenKind::Identifier,
      TokenKind::Operator, TokenKind::Literal, TokenKind::Punct,
      TokenKind::Punct,    TokenKind::Keyword, TokenKind::Literal,
      TokenKind::Punct};
  CHECK(kinds == expected);
}

TEST_CASE("tokenize: a missing semicolon never fails and drops one punct") {
  const std::string corrected = R"(public class Example {
    public static int check(int n) {
        int sum = 0;
        for (int i = 0; i < 10; i++) {
            sum = sum + i;
        }
        return sum;
    }
}
)";
  std::string mutated = corrected;
  std::size_t pos = mutated.find("; i++");
  REQUIRE(pos != std::string::npos);
  mutated.erase(pos, 1);

  SourceUnit a = tokenize(corrected);
  SourceUnit b = tokenize(mutated);
  CHECK(count_kind(b, TokenKind::Error) == 0);
  // same non-whitespace stream except the removed `;`
  auto non_ws = [](const SourceUnit& u) {
    std::size_t n = 0;
    for (const auto& t : u.tokens) {
      if (t.kind != TokenKind::Whitespace) ++n;
    }
    return n;
  };
  CHECK(non_ws(b) == non_ws(a) - 1);
  CHECK(count_kind(b, TokenKind::Punct) == count_kind(a, TokenKind::Punct) - 1);
}

TEST_CASE("tokenize: comments and strings are atomic") {
  SourceUnit u = tokenize("x = \"a { b\"; // close }\ny = '}';");
  std::size_t braces = 0;
  for (const auto& t : u.tokens) {
    if (t.kind == TokenKind::Punct && (t.lexeme == "{" || t.lexeme == "}")) {
      ++braces;
    }
  }
  CHECK(braces == 0);
}

TEST_CASE("tokenize: totality and byte roundtrip on random bytes") {
  std::mt19937 rng(20240817);
  for (int round = 0; round < 200; ++round) {
    std::string text;
    const int len = static_cast<int>(rng() % 400);
    for (int i = 0; i < len; ++i) {
      text.push_back(static_cast<char>(rng() % 256));
    }
    SourceUnit u = tokenize(text);  // must not throw
    std::string rebuilt;
    for (const auto& t : u.tokens) rebuilt += t.lexeme;
    CHECK(rebuilt == text);
    // spans are increasing and non-overlapping
    std::size_t prev = 0;
    for (const auto& t : u.tokens) {
      CHECK(t.span.begin == prev);
      prev = t.span.end;
    }
    // line spans concatenate back to the text
    std::size_t line_prev = 0;
    for (const auto& rec : u.lines) {
      CHECK(rec.span.begin == line_prev);
      line_prev = rec.span.end;
    }
    if (!u.lines.empty()) CHECK(line_prev == text.size());
  }
}

TEST_CASE("normalize_label: trimming, collapsing and semicolon stripping") {
  CHECK(normalize_label("  sum = sum + 1 ;") == "sum = sum + 1");
  CHECK(normalize_label("int i=0") == "int i=0");
  CHECK(normalize_label("a\n\tb") == "a b");
  // token-internal spacing is preserved: these stay distinct
  CHECK(normalize_label("if (i + j) < 7") != normalize_label("if (i+j)<7"));
}

TEST_CASE("normalize_label: idempotent on random strings") {
  std::mt19937 rng(7);
  for (int round = 0; round < 500; ++round) {
    std::string s;
    const int len = static_cast<int>(rng() % 40);
    static const char alphabet[] = " ;\t\nabz=+<";
    for (int i = 0; i < len; ++i) {
      s.push_back(alphabet[rng() % (sizeof(alphabet) - 1)]);
    }
    std::string once = normalize_label(s);
    CHECK(normalize_label(once) == once);
  }
}

TEST_CASE("find_block_openers: running example order") {
  std::string code = testsupport::repo_file("tests/data/running_example.java");
  auto openers = find_block_openers(tokenize(code));
  std::vector<std::string> kinds;
  for (const auto& op : openers) kinds.push_back(block_kind_name(op.kind));
  CHECK(kinds == std::vector<std::string>{"class", "method", "for", "for", "if"});
}

TEST_CASE("find_block_openers: straight-line code has none") {
  CHECK(find_block_openers(tokenize("int x = 3;")).empty());
}

TEST_CASE("find_block_openers: brace-less while is flagged") {
  auto openers = find_block_openers(tokenize("while (count < 10)\n  count++;"));
  REQUIRE(openers.size() == 1);
  CHECK(block_kind_name(openers[0].kind) == std::string("while"));
  CHECK(openers[0].braceless);
}

TEST_CASE("find_block_openers: agrees with the bracket-depth oracle on clean code") {
  const char* corpus_samples[] = {
      "corpus/nc-mini/nc01.java", "corpus/nc-mini/nc05.java",
      "corpus/nc-mini/nc11.java", "corpus/nc-mini/nc16.java",
      "corpus/nc-mini/nc18.java"};
  for (const char* path : corpus_samples) {
    std::string code = testsupport::repo_file(path);
    auto openers = find_block_openers(tokenize(code));
    std::vector<std::string> kinds;
    for (const auto& op : openers) kinds.push_back(block_kind_name(op.kind));
    CHECK(kinds == oracle_openers(code));
  }
}
