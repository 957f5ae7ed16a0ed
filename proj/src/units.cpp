#include "cfgchain/units.hpp"

#include <json.hpp>

#include <functional>
#include <set>

#include "cfgchain/error.hpp"

namespace cfgchain {

namespace {

using nlohmann::json;

std::vector<PromptExample> to_examples(const std::vector<ExampleRecord>& records) {
  std::vector<PromptExample> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.input, r.output});
  return out;
}

/// Shared ask-parse-retry loop. The parser throws on bad output; everything
/// except backend failures is retried up to opts.retries extra attempts.
template <typename T>
UnitResult<T> call_unit(const std::string& unit_id, Backend& backend,
                        const UnitOptions& opts,
                        const std::vector<PromptExample>& examples,
                        const std::string& payload,
                        const std::string& structured_input,
                        const std::function<T(const std::string&)>& parse) {
  Prompt prompt = make_prompt(unit_id, examples, payload);
  BackendRequest req{unit_id, prompt.rendered, structured_input, opts.params};

  UnitResult<T> result;
  std::string last_parse_error;
  for (int attempt = 1; attempt <= opts.retries + 1; ++attempt) {
    std::string completion;
    try {
      completion = backend.complete(req);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CassetteMiss ||
          e.code() == ErrorCode::HttpError || e.code() == ErrorCode::Timeout) {
        raise(ErrorCode::BackendError,
              "unit `" + unit_id + "` attempt " + std::to_string(attempt) +
                  ": " + e.what());
      }
      throw;
    }
    result.exchanges.push_back({unit_id, prompt.rendered, completion, attempt});
    try {
      result.value = parse(completion);
      return result;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::EmptyHierarchy) throw;  // an answer, not noise
      last_parse_error = e.what();
    }
  }
  raise(ErrorCode::UnparseableOutput,
        "unit `" + unit_id + "` after " + std::to_string(opts.retries + 1) +
            " attempts: " + last_parse_error);
}

json hierarchy_json(const StructureHierarchy& h) {
  json entries = json::array();
  for (const auto& e : h.entries) {
    entries.push_back({{"id", e.id},
                       {"kind", block_kind_name(e.kind)},
                       {"depth", e.depth},
                       {"parent", e.parent},
                       {"line_begin", e.line_begin},
                       {"line_end", e.line_end}});
  }
  return entries;
}

}  // namespace

UnitResult<StructureHierarchy> unit_structure(const std::string& code,
                                              Backend& backend,
                                              const KnowledgeBase& kb,
                                              const UnitOptions& opts) {
  if (code.empty()) {
    raise(ErrorCode::NoBlockFound, "empty input");
  }
  json structured = {{"code", code}};
  return call_unit<StructureHierarchy>(
      "structure", backend, opts,
      to_examples(retrieve_examples(kb, "structure", "")), code,
      structured.dump(),
      [](const std::string& completion) {
        return parse_structure_text(completion);
      });
}

UnitResult<std::vector<NestedBlock>> unit_extract_block(
    const std::string& code, const StructureHierarchy& hierarchy,
    Backend& backend, const KnowledgeBase& kb, const UnitOptions& opts) {
  if (hierarchy.empty()) {
    raise(ErrorCode::EmptyHierarchy, "nothing to extract");
  }
  const std::string structure_lines = emit_structure_lines(hierarchy);
  json structured = {{"code", code}, {"hierarchy", hierarchy_json(hierarchy)}};

  const std::vector<std::string> leaves = hierarchy.leaf_ids();
  auto parse = [&](const std::string& completion) {
    auto parsed = parse_extract_text(completion);
    if (parsed.size() != leaves.size()) {
      raise(ErrorCode::UnparseableOutput,
            "expected " + std::to_string(leaves.size()) +
                " innermost blocks, got " + std::to_string(parsed.size()));
    }
    std::set<std::string> leaf_set(leaves.begin(), leaves.end());
    std::vector<NestedBlock> blocks;
    std::size_t search_from = 0;
    for (auto& [id, text] : parsed) {
      if (!leaf_set.count(id)) {
        raise(ErrorCode::UnparseableOutput,
              "`" + id + "` is not an innermost block of the hierarchy");
      }
      if (text.empty()) {
        raise(ErrorCode::UnparseableOutput, "block `" + id + "` has no text");
      }
      std::size_t pos = code.find(text, search_from);
      if (pos == std::string::npos) {
        raise(ErrorCode::SpanNotFound,
              "text of block `" + id + "` does not occur in the code");
      }
      NestedBlock b;
      b.id = id;
      std::size_t us = id.find("_block_");
      b.kind = block_kind_from_name(us == std::string::npos
                                        ? std::string()
                                        : id.substr(0, us))
                   .value_or(BlockKind::If);
      b.text = text;
      b.span = {pos, pos + text.size()};
      search_from = b.span.end;
      blocks.push_back(std::move(b));
    }
    return blocks;
  };

  auto result = call_unit<std::vector<NestedBlock>>(
      "extract", backend, opts,
      to_examples(retrieve_examples(kb, "extract", "")),
      render_extract_payload(code, structure_lines), structured.dump(),
      std::function<std::vector<NestedBlock>(const std::string&)>(parse));
  return result;
}

UnitResult<Cfg> unit_block_cfg(const NestedBlock& block, Backend& backend,
                               const KnowledgeBase& kb,
                               const UnitOptions& opts) {
  const std::string kind =
      opts.generic_retrieval ? "generic" : block_kind_name(block.kind);
  json structured = {{"text", block.text},
                     {"id", block.id},
                     {"kind", block_kind_name(block.kind)}};

  // placeholder ids that appear in the block text must come back as nodes
  std::set<std::string> expected_placeholders;
  {
    SourceUnit u = tokenize(block.text);
    for (const auto& t : u.tokens) {
      if (t.kind == TokenKind::Identifier && is_placeholder_label(t.lexeme)) {
        expected_placeholders.insert(t.lexeme);
      }
    }
  }

  auto parse = [&](const std::string& completion) {
    Cfg g = parse_cfgtext(completion);
    std::set<std::string> seen;
    for (const auto& n : g.nodes) {
      if (n.placeholder) seen.insert(n.label);
    }
    if (seen != expected_placeholders) {
      raise(ErrorCode::UnparseableOutput,
            "graph placeholders do not match the block ids in the code");
    }
    for (const auto& v : validate_cfg(g)) {
      // open branches are normal for a bare block: fusion closes them
      if (v.kind == Violation::Kind::DanglingBranch) continue;
      raise(ErrorCode::ValidationFailed, v.message);
    }
    return g;
  };

  return call_unit<Cfg>("blockcfg", backend, opts,
                        to_examples(retrieve_examples(kb, "blockcfg", kind)),
                        block.text, structured.dump(),
                        std::function<Cfg(const std::string&)>(parse));
}

UnitResult<Cfg> unit_fusion(const std::vector<std::pair<std::string, Cfg>>& cfgs,
                            Backend& backend, const KnowledgeBase& kb,
                            const UnitOptions& opts) {
  if (cfgs.size() < 2) {
    raise(ErrorCode::FusionError, "fusion needs at least two graphs");
  }
  std::vector<std::pair<std::string, std::string>> rendered;
  json jcfgs = json::array();
  for (const auto& [id, g] : cfgs) {
    std::string text = emit_cfgtext(g);
    rendered.emplace_back(id, text);
    jcfgs.push_back({{"id", id}, {"cfg", text}});
  }
  json structured = {{"cfgs", jcfgs}};

  auto parse = [](const std::string& completion) {
    Cfg g = parse_cfgtext(completion);
    for (const auto& n : g.nodes) {
      if (n.placeholder) {
        raise(ErrorCode::UnparseableOutput,
              "fused graph still holds placeholder " + n.label);
      }
    }
    return g;
  };

  return call_unit<Cfg>("fusion", backend, opts,
                        to_examples(retrieve_examples(kb, "fusion", "")),
                        render_fusion_payload(rendered), structured.dump(),
                        std::function<Cfg(const std::string&)>(parse));
}

UnitResult<Cfg> unit_single_pass(const std::string& variant_unit,
                                 const std::string& code, Backend& backend,
                                 const KnowledgeBase& kb,
                                 const UnitOptions& opts) {
  if (variant_unit != "cot" && variant_unit != "direct") {
    raise(ErrorCode::UnsupportedUnit, variant_unit);
  }
  json structured = {{"code", code}};
  auto parse = [](const std::string& completion) {
    Cfg g = parse_cfgtext(completion);
    for (const auto& n : g.nodes) {
      if (n.placeholder) {
        raise(ErrorCode::UnparseableOutput,
              "final graph still holds placeholder " + n.label);
      }
    }
    return g;
  };
  const int k = (variant_unit == "cot") ? 1 : 5;
  return call_unit<Cfg>(variant_unit, backend, opts,
                        to_examples(retrieve_examples(kb, variant_unit, "", k)),
                        code, structured.dump(),
                        std::function<Cfg(const std::string&)>(parse));
}

}  // namespace cfgchain
