#include "cfgchain/inject.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <random>

#include "cfgchain/error.hpp"
#include "cfgchain/region.hpp"
#include "cfgchain/source.hpp"

namespace cfgchain {

namespace {

using nlohmann::json;

void walk_regions(const std::vector<Region>& regions,
                  const std::function<void(const Region&)>& fn) {
  for (const auto& r : regions) {
    fn(r);
    walk_regions(r.body, fn);
    walk_regions(r.else_body, fn);
    for (const auto& arm : r.arms) walk_regions(arm.body, fn);
  }
}

bool is_loop_or_if(const Region& r) {
  return r.type == RegionType::If || r.type == RegionType::For ||
         r.type == RegionType::While;
}

std::size_t direct_statement_count(const Region& r) {
  std::size_t n = 0;
  for (const auto& item : r.body) {
    if (item.type == RegionType::Statement &&
        normalize_label(item.text).empty()) {
      continue;
    }
    ++n;
  }
  return n;
}

std::vector<std::vector<Edit>> brace_sites(const std::string& code) {
  std::vector<std::vector<Edit>> sites;
  SourceUnit u = tokenize(code);
  for (const auto& t : u.tokens) {
    if (t.kind == TokenKind::Punct && t.lexeme == "}") {
      sites.push_back({Edit{t.span.begin, "}", ""}});
    }
  }
  return sites;
}

std::vector<std::vector<Edit>> semicolon_sites(const std::string& code,
                                               const RegionTree& tree) {
  std::vector<std::vector<Edit>> sites;
  walk_regions(tree.roots, [&](const Region& r) {
    if (r.type != RegionType::For) return;
    // the header's second depth-0 semicolon, as in `int i=0; i<10 i++`
    std::string header = code.substr(r.header.begin, r.header.size());
    SourceUnit hu = tokenize(header);
    int paren_depth = 0;
    int semi_seen = 0;
    for (const auto& t : hu.tokens) {
      if (t.lexeme == "(") ++paren_depth;
      else if (t.lexeme == ")") --paren_depth;
      else if (t.lexeme == ";" && paren_depth == 1) {
        if (++semi_seen == 2) {
          sites.push_back({Edit{r.header.begin + t.span.begin, ";", ""}});
          break;
        }
      }
    }
  });
  return sites;
}

std::vector<std::vector<Edit>> operator_sites(const std::string& code,
                                              const RegionTree& tree) {
  std::vector<std::vector<Edit>> sites;
  walk_regions(tree.roots, [&](const Region& r) {
    if (auto pos = operator_recovery_site(r, code)) {
      sites.push_back({Edit{*pos, code.substr(*pos, 1), "?"}});
    }
  });
  return sites;
}

std::vector<std::vector<Edit>> empty_statement_sites(const std::string& code,
                                                     const RegionTree& tree) {
  std::vector<std::vector<Edit>> sites;
  walk_regions(tree.roots, [&](const Region& r) {
    if (!is_loop_or_if(r) || r.adopted_empty_stmt) return;
    if (r.body_open_brace == static_cast<std::size_t>(-1)) return;
    // only headers whose brace directly follows, so the mutation stays
    // a plausible slip of the keyboard
    std::size_t p = r.header.end;
    while (p < code.size() && (code[p] == ' ' || code[p] == '\t')) ++p;
    if (p != r.body_open_brace) return;
    sites.push_back({Edit{r.header.end, "", ";"}});
  });
  return sites;
}

std::vector<std::vector<Edit>> scope_error_sites(const std::string& code,
                                                 const RegionTree& tree) {
  std::vector<std::vector<Edit>> sites;
  walk_regions(tree.roots, [&](const Region& r) {
    if (!is_loop_or_if(r)) return;
    if (r.braceless || r.adopted_empty_stmt) return;
    if (r.body_open_brace == static_cast<std::size_t>(-1) ||
        r.body_close_brace == static_cast<std::size_t>(-1)) {
      return;
    }
    if (direct_statement_count(r) < 2) return;  // multi-statement bodies only
    sites.push_back({Edit{r.body_open_brace, "{", ""},
                     Edit{r.body_close_brace, "}", ""}});
  });
  return sites;
}

std::string apply_edits(const std::string& code, const std::vector<Edit>& edits) {
  std::vector<Edit> ordered = edits;
  std::sort(ordered.begin(), ordered.end(),
            [](const Edit& a, const Edit& b) { return a.pos > b.pos; });
  std::string out = code;
  for (const auto& e : ordered) {
    if (e.pos > out.size() ||
        out.compare(e.pos, e.removed.size(), e.removed) != 0) {
      raise(ErrorCode::SpanMismatch, "edit does not match the code");
    }
    out = out.substr(0, e.pos) + e.inserted + out.substr(e.pos + e.removed.size());
  }
  return out;
}

}  // namespace

const char* injection_kind_name(InjectionKind k) {
  switch (k) {
    case InjectionKind::MissingBrace: return "missing_brace";
    case InjectionKind::MissingSemicolon: return "missing_semicolon";
    case InjectionKind::MissingOperator: return "missing_operator";
    case InjectionKind::EmptyStatement: return "empty_statement";
    case InjectionKind::ScopeError: return "scope_error";
  }
  return "missing_brace";
}

std::optional<InjectionKind> injection_kind_from_name(std::string_view name) {
  if (name == "missing_brace") return InjectionKind::MissingBrace;
  if (name == "missing_semicolon") return InjectionKind::MissingSemicolon;
  if (name == "missing_operator") return InjectionKind::MissingOperator;
  if (name == "empty_statement") return InjectionKind::EmptyStatement;
  if (name == "scope_error") return InjectionKind::ScopeError;
  return std::nullopt;
}

ErrorCategory injection_category(InjectionKind k) {
  switch (k) {
    case InjectionKind::MissingBrace:
    case InjectionKind::MissingSemicolon:
    case InjectionKind::MissingOperator:
      return ErrorCategory::Explicit;
    case InjectionKind::EmptyStatement:
    case InjectionKind::ScopeError:
      return ErrorCategory::Implicit;
  }
  return ErrorCategory::Explicit;
}

std::vector<std::vector<Edit>> eligible_sites(const std::string& code,
                                              InjectionKind kind) {
  if (kind == InjectionKind::MissingBrace) return brace_sites(code);
  RegionTree tree = parse_regions(code);
  switch (kind) {
    case InjectionKind::MissingSemicolon: return semicolon_sites(code, tree);
    case InjectionKind::MissingOperator: return operator_sites(code, tree);
    case InjectionKind::EmptyStatement: return empty_statement_sites(code, tree);
    case InjectionKind::ScopeError: return scope_error_sites(code, tree);
    default: return {};
  }
}

Mutation inject_error(const std::string& code, InjectionKind kind,
                      unsigned seed) {
  std::vector<std::vector<Edit>> sites = eligible_sites(code, kind);
  if (sites.empty()) {
    raise(ErrorCode::NoEligibleSite,
          std::string(injection_kind_name(kind)) + " has no eligible site");
  }
  std::mt19937 rng(seed);
  const std::size_t index = rng() % sites.size();

  Mutation m;
  m.record.kind = kind;
  m.record.seed = seed;
  m.record.site_index = index;
  m.record.site_count = sites.size();
  m.record.edits = sites[index];
  m.code = apply_edits(code, m.record.edits);
  return m;
}

std::string apply_inverse(const std::string& mutated,
                          const MutationRecord& record) {
  // Edits are in original coordinates; restoring in ascending order keeps
  // every following position valid.
  std::vector<Edit> ordered = record.edits;
  std::sort(ordered.begin(), ordered.end(),
            [](const Edit& a, const Edit& b) { return a.pos < b.pos; });
  std::string out = mutated;
  for (const auto& e : ordered) {
    if (e.pos > out.size() ||
        out.compare(e.pos, e.inserted.size(), e.inserted) != 0) {
      raise(ErrorCode::SpanMismatch, "inverse edit does not match the mutation");
    }
    out = out.substr(0, e.pos) + e.removed + out.substr(e.pos + e.inserted.size());
  }
  return out;
}

std::string mutation_record_json(const MutationRecord& record) {
  json edits = json::array();
  for (const auto& e : record.edits) {
    edits.push_back(
        {{"pos", e.pos}, {"removed", e.removed}, {"inserted", e.inserted}});
  }
  json j = {{"kind", injection_kind_name(record.kind)},
            {"seed", record.seed},
            {"site_index", record.site_index},
            {"site_count", record.site_count},
            {"category",
             injection_category(record.kind) == ErrorCategory::Explicit
                 ? "ESE"
                 : "ISE"},
            {"edits", edits}};
  return j.dump(2);
}

}  // namespace cfgchain
