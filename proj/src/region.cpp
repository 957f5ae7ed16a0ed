#include "cfgchain/region.hpp"

#include <algorithm>
#include <cassert>

#include "cfgchain/cfg.hpp"

namespace cfgchain {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Significant token with the line facts the repair rules need.
struct Tok {
  TokenKind kind;
  std::string lexeme;
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int indent = 0;        // indentation of the owning line
  bool starts_line = false;
};

bool is_modifier(const std::string& w) {
  return w == "public" || w == "private" || w == "protected" || w == "static" ||
         w == "final" || w == "abstract" || w == "strictfp" || w == "native" ||
         w == "synchronized" || w == "transient" || w == "volatile";
}

/// +1 / -1 when `text` steps `var` up or down (v++, --v, v += c, v = v - c
/// and friends); 0 when no unambiguous step is present.
int step_direction(const std::string& text, const std::string& var) {
  SourceUnit u = tokenize(text);
  std::vector<const Token*> sig;
  for (const auto& t : u.tokens) {
    if (t.kind == TokenKind::Whitespace || t.kind == TokenKind::Comment) continue;
    sig.push_back(&t);
  }
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (sig[i]->lexeme != var) continue;
    if (i + 1 < sig.size()) {
      const std::string& op = sig[i + 1]->lexeme;
      if (op == "++" || op == "+=") return 1;
      if (op == "--" || op == "-=") return -1;
      if (op == "=" && i + 3 < sig.size() && sig[i + 2]->lexeme == var) {
        if (sig[i + 3]->lexeme == "+") return 1;
        if (sig[i + 3]->lexeme == "-") return -1;
      }
    }
    if (i > 0) {
      const std::string& op = sig[i - 1]->lexeme;
      if (op == "++") return 1;
      if (op == "--") return -1;
    }
  }
  return 0;
}

class Parser {
 public:
  explicit Parser(const SourceUnit& unit) : u_(unit) {
    int prev_line = -1;
    for (const auto& t : unit.tokens) {
      if (t.kind == TokenKind::Whitespace || t.kind == TokenKind::Comment) {
        continue;
      }
      Tok tok;
      tok.kind = t.kind;
      tok.lexeme = t.lexeme;
      tok.begin = t.span.begin;
      tok.end = t.span.end;
      tok.line = t.line;
      tok.indent = line_indent(t.line);
      tok.starts_line = (t.line != prev_line);
      prev_line = t.line;
      t_.push_back(std::move(tok));
    }
  }

  RegionTree parse() {
    RegionTree tree;
    Stop stop;
    stop.at_rbrace = false;  // stray closers at top level are noise
    while (!eof()) {
      if (cur().lexeme == "}") {
        ++i_;  // tolerate: unmatched closer
        continue;
      }
      tree.roots.push_back(parse_one(stop, /*in_class=*/false));
    }
    return tree;
  }

 private:
  struct Stop {
    bool at_rbrace = true;
    int min_indent = -1;   // stop before a line-starting token at <= indent
    bool at_case = false;
  };

  const SourceUnit& u_;
  std::vector<Tok> t_;
  std::size_t i_ = 0;

  bool eof() const { return i_ >= t_.size(); }
  const Tok& cur() const { return t_[i_]; }
  const Tok& tok(std::size_t i) const { return t_[i]; }

  int line_indent(int line) const {
    if (line < 1 || static_cast<std::size_t>(line) > u_.lines.size()) return 0;
    return u_.lines[static_cast<std::size_t>(line) - 1].indent;
  }

  std::string slice(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > u_.text.size()) return {};
    return u_.text.substr(begin, end - begin);
  }

  bool stopped(const Stop& s) const {
    if (eof()) return true;
    const Tok& t = cur();
    if (s.at_rbrace && t.lexeme == "}") return true;
    if (s.at_case && t.starts_line &&
        (t.lexeme == "case" || t.lexeme == "default")) {
      return true;
    }
    if (s.min_indent >= 0 && t.starts_line && t.indent <= s.min_indent &&
        t.lexeme != "}") {
      return true;
    }
    return false;
  }

  std::vector<Region> parse_list(const Stop& s, bool in_class) {
    std::vector<Region> items;
    while (!stopped(s)) {
      if (!s.at_rbrace && cur().lexeme == "}") {
        ++i_;
        continue;
      }
      std::size_t before = i_;
      items.push_back(parse_one(s, in_class));
      if (i_ == before) {  // should not happen; never loop forever
        ++i_;
      }
    }
    return items;
  }

  Region parse_one(const Stop& s, bool in_class) {
    const Tok& t = cur();
    if (t.kind == TokenKind::Keyword) {
      if (t.lexeme == "if" || t.lexeme == "for" || t.lexeme == "while" ||
          t.lexeme == "switch") {
        return parse_control(s);
      }
      if (t.lexeme == "class") return parse_class(i_);
      if (is_modifier(t.lexeme)) {
        std::size_t j = i_;
        while (j < t_.size() && tok(j).kind == TokenKind::Keyword &&
               is_modifier(tok(j).lexeme)) {
          ++j;
        }
        if (j < t_.size() && tok(j).lexeme == "class") return parse_class(i_);
      }
    }
    return parse_statement(s, in_class);
  }

  // Matching ')' for the '(' at `open`; npos when unbalanced.
  std::size_t match_paren(std::size_t open) const {
    int depth = 0;
    for (std::size_t j = open; j < t_.size(); ++j) {
      if (tok(j).lexeme == "(") ++depth;
      else if (tok(j).lexeme == ")" && --depth == 0) return j;
    }
    return npos;
  }

  std::size_t match_brace(std::size_t open) const {
    int depth = 0;
    for (std::size_t j = open; j < t_.size(); ++j) {
      if (tok(j).lexeme == "{") ++depth;
      else if (tok(j).lexeme == "}" && --depth == 0) return j;
    }
    return npos;
  }

  Region parse_class(std::size_t start) {
    Region r;
    r.type = RegionType::Class;
    r.header_line = tok(start).line;
    const int header_indent = tok(start).indent;
    std::size_t j = start;
    while (j < t_.size() && tok(j).lexeme != "{" && tok(j).lexeme != ";") ++j;
    r.header = {tok(start).begin, j > start ? tok(j - 1).end : tok(start).end};
    r.header_text = normalize_label(slice(r.header.begin, r.header.end));
    r.span.begin = tok(start).begin;
    i_ = j;
    if (!eof() && cur().lexeme == "{") {
      std::size_t body_end = 0;
      r.body = parse_braced(header_indent, /*in_class=*/true, r, body_end);
      r.span.end = body_end;
    } else {
      if (!eof() && cur().lexeme == ";") ++i_;
      r.low_confidence = true;
      r.span.end = r.header.end;
    }
    r.end_line = end_line_of(r.span.end);
    return r;
  }

  int end_line_of(std::size_t pos) const {
    int line = 1;
    for (const auto& rec : u_.lines) {
      if (pos > rec.span.begin) line = rec.number;
    }
    return line;
  }

  // Splits a for-header's parenthesized interior into init/cond/update,
  // tolerating a missing second semicolon by peeling a trailing ++/--
  // step off the middle part.
  void split_for_header(Region& r, std::size_t open, std::size_t close) {
    std::vector<std::size_t> semis;
    int depth = 0;
    for (std::size_t j = open + 1; j < close; ++j) {
      if (tok(j).lexeme == "(") ++depth;
      else if (tok(j).lexeme == ")") --depth;
      else if (tok(j).lexeme == ";" && depth == 0) semis.push_back(j);
    }
    const std::size_t inner_begin = tok(open).end;
    const std::size_t inner_end = tok(close).begin;
    if (semis.size() >= 2) {
      r.init = normalize_label(slice(inner_begin, tok(semis[0]).begin));
      r.cond = normalize_label(slice(tok(semis[0]).end, tok(semis[1]).begin));
      r.cond_span = {tok(semis[0]).end, tok(semis[1]).begin};
      r.update = normalize_label(slice(tok(semis[1]).end, inner_end));
    } else if (semis.size() == 1) {
      // `int i=0; i<10 i++` — re-split the middle on the step expression
      r.init = normalize_label(slice(inner_begin, tok(semis[0]).begin));
      std::size_t rest_begin = semis[0] + 1;
      std::size_t rest_end_tok = close;  // exclusive
      std::size_t step_start = npos;
      if (rest_end_tok >= rest_begin + 2) {
        const Tok& last = tok(rest_end_tok - 1);
        const Tok& prev = tok(rest_end_tok - 2);
        if ((last.lexeme == "++" || last.lexeme == "--") &&
            prev.kind == TokenKind::Identifier) {
          step_start = rest_end_tok - 2;
        } else if (last.kind == TokenKind::Identifier &&
                   (prev.lexeme == "++" || prev.lexeme == "--")) {
          step_start = rest_end_tok - 2;
        }
      }
      if (step_start != npos && step_start > rest_begin) {
        r.cond = normalize_label(
            slice(tok(semis[0]).end, tok(step_start).begin));
        r.cond_span = {tok(semis[0]).end, tok(step_start).begin};
        r.update = normalize_label(slice(tok(step_start).begin, inner_end));
      } else {
        r.cond = normalize_label(slice(tok(semis[0]).end, inner_end));
        r.cond_span = {tok(semis[0]).end, inner_end};
        r.low_confidence = true;
      }
    } else {
      r.cond = normalize_label(slice(inner_begin, inner_end));
      r.cond_span = {inner_begin, inner_end};
      r.low_confidence = true;
    }
  }

  // Re-infers a lone `?` as `<`/`>` from the step direction. The repair
  // only fires when the condition compares the stepped variable, so it can
  // never change the meaning of a ternary that carries its `:`.
  void repair_condition(Region& r, int direction) {
    if (direction == 0) return;
    if (r.cond.find('?') == std::string::npos) return;
    if (r.cond.find(':') != std::string::npos) return;
    SourceUnit cu = tokenize(r.cond);
    std::vector<const Token*> sig;
    for (const auto& t : cu.tokens) {
      if (t.kind == TokenKind::Whitespace || t.kind == TokenKind::Comment) continue;
      sig.push_back(&t);
    }
    if (sig.size() < 2 || sig[0]->kind != TokenKind::Identifier) return;
    if (sig[1]->lexeme != "?") return;
    r.cond[sig[1]->span.begin] = (direction > 0) ? '<' : '>';
    r.repaired_operator = true;
  }

  Region parse_control(const Stop& outer) {
    Region r;
    const Tok& kw = cur();
    const int header_indent = kw.indent;
    r.header_line = kw.line;
    r.span.begin = kw.begin;
    if (kw.lexeme == "if") r.type = RegionType::If;
    else if (kw.lexeme == "for") r.type = RegionType::For;
    else if (kw.lexeme == "while") r.type = RegionType::While;
    else r.type = RegionType::Switch;
    ++i_;

    std::size_t header_end = kw.end;
    if (!eof() && cur().lexeme == "(") {
      std::size_t open = i_;
      std::size_t close = match_paren(open);
      if (close == npos) {
        // unbalanced header: take the rest of the line
        std::size_t j = open;
        while (j + 1 < t_.size() && tok(j + 1).line == kw.line) ++j;
        r.cond = normalize_label(slice(tok(open).end, tok(j).end));
        r.cond_span = {tok(open).end, tok(j).end};
        r.low_confidence = true;
        header_end = tok(j).end;
        i_ = j + 1;
      } else {
        if (r.type == RegionType::For) {
          split_for_header(r, open, close);
        } else {
          r.cond = normalize_label(slice(tok(open).end, tok(close).begin));
          r.cond_span = {tok(open).end, tok(close).begin};
        }
        header_end = tok(close).end;
        i_ = close + 1;
      }
    } else {
      // header without parens: condition is the rest of the line
      std::size_t j = i_;
      while (j < t_.size() && tok(j).line == kw.line && tok(j).lexeme != "{") ++j;
      if (j > i_) {
        r.cond = normalize_label(slice(tok(i_).begin, tok(j - 1).end));
        r.cond_span = {tok(i_).begin, tok(j - 1).end};
        header_end = tok(j - 1).end;
      }
      r.low_confidence = true;
      i_ = j;
    }
    r.header = {r.span.begin, header_end};
    r.header_text = normalize_label(slice(r.header.begin, r.header.end));

    if (r.type == RegionType::For) {
      SourceUnit cu = tokenize(r.update);
      std::string var;
      for (const auto& t : cu.tokens) {
        if (t.kind == TokenKind::Identifier) {
          var = t.lexeme;
          break;
        }
      }
      if (!var.empty()) repair_condition(r, step_direction(r.update, var));
    }

    std::size_t body_end = header_end;
    if (r.type == RegionType::Switch) {
      body_end = parse_switch_body(r, header_indent);
    } else {
      body_end = parse_control_body(r, header_indent, r.header_line, outer,
                                    &r.body);
      if (r.type == RegionType::If && !eof() && cur().lexeme == "else" &&
          cur().kind == TokenKind::Keyword) {
        ++i_;
        if (!eof() && cur().lexeme == "if" && cur().kind == TokenKind::Keyword) {
          Region chained = parse_control(outer);
          chained.chained_else_if = true;
          body_end = chained.span.end;
          r.else_body.push_back(std::move(chained));
        } else {
          body_end = parse_control_body(r, header_indent, r.header_line, outer,
                                        &r.else_body);
        }
      }
    }
    r.span.end = body_end;
    r.end_line = end_line_of(r.span.end);

    if (r.type == RegionType::While) {
      SourceUnit cu = tokenize(r.cond);
      std::string var;
      for (const auto& t : cu.tokens) {
        if (t.kind == TokenKind::Identifier) {
          var = t.lexeme;
          break;
        }
      }
      if (!var.empty()) {
        int dir = 0;
        for (const auto& item : r.body) {
          if (item.type == RegionType::Statement) {
            dir = step_direction(item.text, var);
            if (dir != 0) break;
          }
        }
        repair_condition(r, dir);
      }
    }
    return r;
  }

  // Body of an if/for/while (and an else arm when `into` is else_body).
  // Returns the byte offset just past the body.
  std::size_t parse_control_body(Region& r, int header_indent, int header_line,
                                 const Stop& outer, std::vector<Region>* into) {
    if (eof()) {
      r.repaired_close = true;
      return r.header.end;
    }
    const Tok& t = cur();
    if (t.lexeme == "{") {
      std::size_t body_end = 0;
      *into = parse_braced(header_indent, /*in_class=*/false, r, body_end);
      return body_end;
    }
    if (t.lexeme == ";") {
      // accidental empty statement: adopt the block or indented lines that
      // follow, which is the behavior the author intended
      r.adopted_empty_stmt = true;
      std::size_t semi_end = t.end;
      ++i_;
      if (!eof() && cur().lexeme == "{") {
        std::size_t body_end = 0;
        *into = parse_braced(header_indent, /*in_class=*/false, r, body_end);
        return body_end;
      }
      if (!eof() && cur().line > header_line && cur().starts_line &&
          cur().indent > header_indent) {
        r.braceless = true;
        Stop s;
        s.at_rbrace = true;
        s.min_indent = header_indent;
        *into = parse_list(s, false);
        return into->empty() ? semi_end : into->back().span.end;
      }
      return semi_end;  // genuinely empty body
    }
    if (t.line == header_line) {
      // single inline statement or nested control on the header line
      r.braceless = true;
      Stop s = outer;
      into->push_back(parse_one(s, false));
      return into->back().span.end;
    }
    if (t.starts_line && t.indent > header_indent) {
      // no braces: adopt every following deeper-indented line
      r.braceless = true;
      Stop s;
      s.at_rbrace = true;
      s.min_indent = header_indent;
      *into = parse_list(s, false);
      return into->empty() ? r.header.end : into->back().span.end;
    }
    r.braceless = true;
    r.low_confidence = true;  // nothing plausible to adopt
    return r.header.end;
  }

  std::size_t parse_switch_body(Region& r, int header_indent) {
    if (eof() || cur().lexeme != "{") {
      r.low_confidence = true;
      return r.header.end;
    }
    r.body_open_brace = cur().begin;
    ++i_;
    Stop arm_stop;
    arm_stop.at_rbrace = true;
    arm_stop.min_indent = header_indent;
    arm_stop.at_case = true;
    while (!eof() && cur().lexeme != "}") {
      if (cur().starts_line && cur().indent <= header_indent &&
          cur().lexeme != "}" && cur().lexeme != "case" &&
          cur().lexeme != "default") {
        r.repaired_close = true;
        break;
      }
      if (cur().lexeme == "case" || cur().lexeme == "default") {
        SwitchArm arm;
        arm.is_default = (cur().lexeme == "default");
        ++i_;
        std::size_t label_begin = eof() ? 0 : cur().begin;
        std::size_t label_end = label_begin;
        while (!eof() && cur().lexeme != ":") {
          label_end = cur().end;
          ++i_;
        }
        if (!eof()) ++i_;  // consume ':'
        if (!arm.is_default) arm.label = normalize_label(slice(label_begin, label_end));
        arm.body = parse_list(arm_stop, false);
        if (arm.is_default) r.has_default = true;
        r.arms.push_back(std::move(arm));
      } else {
        // statements before any case label: tolerate as an unlabeled arm
        SwitchArm arm;
        arm.body = parse_list(arm_stop, false);
        r.arms.push_back(std::move(arm));
      }
    }
    if (!eof() && cur().lexeme == "}") {
      std::size_t end = cur().end;
      r.body_close_brace = cur().begin;
      ++i_;
      return end;
    }
    r.repaired_close = true;
    return r.arms.empty() || r.arms.back().body.empty()
               ? r.header.end
               : r.arms.back().body.back().span.end;
  }

  // `cur()` is `{`. Parses the body, consuming the closer when it plausibly
  // belongs to this block; a dedented statement or a closer that lines up
  // with an outer block means ours went missing.
  std::vector<Region> parse_braced(int header_indent, bool in_class, Region& r,
                                   std::size_t& body_end) {
    r.body_open_brace = cur().begin;
    ++i_;
    Stop s;
    s.at_rbrace = true;
    s.min_indent = header_indent;
    std::vector<Region> items = parse_list(s, in_class);
    if (!eof() && cur().lexeme == "}") {
      if (!cur().starts_line || cur().indent >= header_indent) {
        r.body_close_brace = cur().begin;
        body_end = cur().end;
        ++i_;
        return items;
      }
      // closer aligned with an outer header: ours is missing
    }
    r.repaired_close = true;
    body_end = items.empty() ? r.body_open_brace + 1 : items.back().span.end;
    return items;
  }

  Region parse_statement(const Stop& s, bool in_class) {
    Region r;
    r.type = RegionType::Statement;
    const std::size_t start = i_;
    r.span.begin = cur().begin;
    r.header_line = cur().line;
    const std::string& first = cur().lexeme;
    if (cur().kind == TokenKind::Keyword) {
      if (first == "return") r.is_return = true;
      else if (first == "break") r.is_break = true;
      else if (first == "continue") r.is_continue = true;
    }

    int paren_depth = 0;
    std::size_t last_end = cur().begin;
    int statement_line = cur().line;
    bool prev_continues = false;

    while (!eof()) {
      const Tok& t = cur();
      if (t.lexeme == "}" && paren_depth == 0) break;
      if (s.at_case && paren_depth == 0 && t.starts_line &&
          (t.lexeme == "case" || t.lexeme == "default") && i_ > start) {
        break;
      }
      if (t.line != statement_line && t.starts_line && paren_depth == 0 &&
          i_ > start && !prev_continues) {
        break;  // statements end at the line break once parens balance
      }
      if (t.lexeme == "{" && paren_depth == 0) {
        if (in_class && looks_like_method_header(start, i_)) {
          return finish_method(r, start);
        }
        std::size_t close = match_brace(i_);
        if (close == npos) {
          last_end = t_.back().end;
          i_ = t_.size();
          break;
        }
        last_end = tok(close).end;
        statement_line = tok(close).line;
        i_ = close + 1;
        prev_continues = false;
        continue;
      }
      if (t.lexeme == "(") ++paren_depth;
      else if (t.lexeme == ")") paren_depth = std::max(0, paren_depth - 1);
      last_end = t.end;
      statement_line = t.line;
      prev_continues = (t.kind == TokenKind::Operator || t.lexeme == "," ||
                        t.lexeme == "(" || t.lexeme == "." || t.lexeme == "=");
      ++i_;
      if (t.lexeme == ";" && paren_depth == 0) break;
    }

    r.span.end = last_end;
    r.end_line = end_line_of(r.span.end);
    r.text = slice(r.span.begin, r.span.end);
    if (is_placeholder_statement(r.text)) {
      r.type = RegionType::Placeholder;
      std::string t = normalize_label(r.text);
      r.text = t;
    }
    return r;
  }

  // identifier ( ... ) [throws Names] just before `{`
  bool looks_like_method_header(std::size_t start, std::size_t brace) const {
    std::size_t j = brace;
    while (j > start) {
      const Tok& t = tok(j - 1);
      if (t.kind == TokenKind::Identifier || t.lexeme == "," ||
          t.lexeme == "throws") {
        --j;
        continue;
      }
      break;
    }
    if (j == start || tok(j - 1).lexeme != ")") return false;
    // find the '(' opening this ')'
    int depth = 0;
    std::size_t k = j - 1;
    while (true) {
      if (tok(k).lexeme == ")") ++depth;
      else if (tok(k).lexeme == "(" && --depth == 0) break;
      if (k == start) return false;
      --k;
    }
    return k > start && tok(k - 1).kind == TokenKind::Identifier;
  }

  Region finish_method(Region& r, std::size_t start) {
    r.type = RegionType::Method;
    const int header_indent = tok(start).indent;
    r.header = {tok(start).begin, tok(i_ - 1).end};
    r.header_text = normalize_label(slice(r.header.begin, r.header.end));
    std::size_t body_end = 0;
    r.body = parse_braced(header_indent, /*in_class=*/false, r, body_end);
    r.span.end = body_end;
    r.end_line = end_line_of(r.span.end);
    r.text.clear();
    return r;
  }
};

void collect_openers(const std::vector<Region>& regions,
                     std::vector<BlockOpener>& out) {
  for (const auto& r : regions) {
    if (auto kind = region_block_kind(r)) {
      BlockOpener op;
      op.kind = *kind;
      op.header = r.header;
      op.body_start = r.body_open_brace != npos ? r.body_open_brace + 1
                                                : r.header.end;
      op.braceless = r.braceless;
      op.low_confidence = r.low_confidence;
      out.push_back(op);
    }
    collect_openers(r.body, out);
    collect_openers(r.else_body, out);
    for (const auto& arm : r.arms) collect_openers(arm.body, out);
  }
}

}  // namespace

const char* region_type_name(RegionType t) {
  switch (t) {
    case RegionType::Class: return "class";
    case RegionType::Method: return "method";
    case RegionType::If: return "if";
    case RegionType::For: return "for";
    case RegionType::While: return "while";
    case RegionType::Switch: return "switch";
    case RegionType::Statement: return "statement";
    case RegionType::Placeholder: return "placeholder";
  }
  return "statement";
}

RegionTree parse_regions(const SourceUnit& unit) {
  Parser p(unit);
  return p.parse();
}

RegionTree parse_regions(const std::string& text) {
  return parse_regions(tokenize(text));
}

std::optional<BlockKind> region_block_kind(const Region& r) {
  switch (r.type) {
    case RegionType::Class: return BlockKind::Class;
    case RegionType::Method: return BlockKind::Method;
    case RegionType::If: return BlockKind::If;
    case RegionType::For: return BlockKind::For;
    case RegionType::While: return BlockKind::While;
    case RegionType::Switch: return BlockKind::Switch;
    default: return std::nullopt;
  }
}

bool is_placeholder_statement(const std::string& statement_text) {
  std::string t = normalize_label(statement_text);
  return is_placeholder_label(t);
}

std::optional<std::size_t> operator_recovery_site(const Region& loop,
                                                  const std::string& source) {
  if (loop.type != RegionType::For && loop.type != RegionType::While) {
    return std::nullopt;
  }
  if (loop.cond_span.size() == 0) return std::nullopt;
  std::string cond_raw =
      source.substr(loop.cond_span.begin, loop.cond_span.size());
  SourceUnit cu = tokenize(cond_raw);
  std::vector<const Token*> sig;
  for (const auto& t : cu.tokens) {
    if (t.kind == TokenKind::Whitespace || t.kind == TokenKind::Comment) continue;
    sig.push_back(&t);
  }
  if (sig.size() < 2) return std::nullopt;
  if (sig[0]->kind != TokenKind::Identifier) return std::nullopt;
  const std::string op = sig[1]->lexeme;
  if (op != "<" && op != ">") return std::nullopt;
  const std::string var = sig[0]->lexeme;

  int dir = 0;
  if (loop.type == RegionType::For) {
    dir = step_direction(loop.update, var);
  } else {
    for (const auto& item : loop.body) {
      if (item.type == RegionType::Statement) {
        dir = step_direction(item.text, var);
        if (dir != 0) break;
      }
    }
  }
  const bool recoverable = (dir > 0 && op == "<") || (dir < 0 && op == ">");
  if (!recoverable) return std::nullopt;
  return loop.cond_span.begin + sig[1]->span.begin;
}

std::vector<BlockOpener> find_block_openers(const SourceUnit& unit) {
  RegionTree tree = parse_regions(unit);
  std::vector<BlockOpener> out;
  collect_openers(tree.roots, out);
  std::stable_sort(out.begin(), out.end(),
                   [](const BlockOpener& a, const BlockOpener& b) {
                     return a.header.begin < b.header.begin;
                   });
  return out;
}

}  // namespace cfgchain
