#include <json.hpp>

#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "cfgchain/backend.hpp"
#include "cfgchain/cfg.hpp"
#include "cfgchain/cfg_build.hpp"
#include "cfgchain/error.hpp"
#include "cfgchain/prompts.hpp"
#include "cfgchain/region.hpp"

namespace cfgchain {

namespace {

using nlohmann::json;

json parse_input(const std::string& text, const std::string& unit) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    raise(ErrorCode::UnsupportedUnit,
          "structured input for `" + unit + "` is not valid JSON");
  }
  return j;
}

// Preorder walk pairing each counted block region with its hierarchy entry.
// `else if` chains fold into the owning if: the chained region itself is not
// counted, but blocks inside its arms attach to the owner.
void collect_blocks(const std::vector<Region>& regions,
                    const std::string& parent_id, int depth,
                    std::map<std::string, int>& counters,
                    std::vector<std::pair<const Region*, HierarchyEntry>>& out) {
  for (const auto& r : regions) {
    if (r.type == RegionType::If && r.chained_else_if) {
      collect_blocks(r.body, parent_id, depth, counters, out);
      collect_blocks(r.else_body, parent_id, depth, counters, out);
      continue;
    }
    auto kind = region_block_kind(r);
    if (!kind) continue;
    const std::string kind_name = block_kind_name(*kind);
    const int n = ++counters[kind_name];
    HierarchyEntry e;
    e.id = kind_name + "_block_" + std::to_string(n);
    e.kind = *kind;
    e.depth = depth;
    e.parent = parent_id;
    e.line_begin = r.header_line;
    e.line_end = r.end_line;
    out.emplace_back(&r, e);
    collect_blocks(r.body, e.id, depth + 1, counters, out);
    collect_blocks(r.else_body, e.id, depth + 1, counters, out);
    for (const auto& arm : r.arms) {
      collect_blocks(arm.body, e.id, depth + 1, counters, out);
    }
  }
}

// Region pointers point into `tree`; vector moves keep them valid.
struct Analysis {
  RegionTree tree;
  std::vector<std::pair<const Region*, HierarchyEntry>> blocks;
};

Analysis analyze(const std::string& code, std::map<std::string, int> counters) {
  Analysis a;
  a.tree = parse_regions(code);
  collect_blocks(a.tree.roots, "", 1, counters, a.blocks);
  return a;
}

std::map<std::string, int> counters_from(const json& j) {
  std::map<std::string, int> counters;
  if (j.contains("counters") && j["counters"].is_object()) {
    for (auto it = j["counters"].begin(); it != j["counters"].end(); ++it) {
      counters[it.key()] = it.value().get<int>();
    }
  }
  return counters;
}

std::string complete_structure(const json& in) {
  const std::string code = in.at("code").get<std::string>();
  Analysis a = analyze(code, counters_from(in));
  if (a.blocks.empty()) return "structure: none\n";
  StructureHierarchy h;
  for (auto& [region, entry] : a.blocks) h.entries.push_back(entry);
  return "structure:\n" + emit_structure_lines(h);
}

std::string complete_extract(const json& in) {
  const std::string code = in.at("code").get<std::string>();
  StructureHierarchy provided;
  for (const auto& je : in.at("hierarchy")) {
    HierarchyEntry e;
    e.id = je.at("id").get<std::string>();
    e.kind = block_kind_from_name(je.at("kind").get<std::string>())
                 .value_or(BlockKind::If);
    e.depth = je.value("depth", 1);
    e.parent = je.value("parent", std::string());
    provided.entries.push_back(e);
  }
  Analysis a = analyze(code, {});
  std::vector<std::string> leaves = provided.leaf_ids();
  std::set<std::string> leaf_set(leaves.begin(), leaves.end());

  std::vector<std::pair<std::string, std::string>> blocks;
  const std::size_t n = std::min(provided.entries.size(), a.blocks.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = provided.entries[i];
    if (!leaf_set.count(entry.id)) continue;
    const Region* r = a.blocks[i].first;
    blocks.emplace_back(entry.id,
                        code.substr(r->span.begin, r->span.size()));
  }
  if (blocks.empty()) {
    raise(ErrorCode::UnsupportedUnit, "hierarchy has no extractable leaf");
  }
  return emit_extract_text(blocks);
}

std::string complete_blockcfg(const json& in) {
  const std::string text = in.at("text").get<std::string>();
  return emit_cfgtext(build_cfg_from_source(text));
}

std::string complete_fusion(const json& in) {
  std::map<std::string, Cfg> graphs;
  std::vector<std::string> order;
  for (const auto& je : in.at("cfgs")) {
    const std::string id = je.at("id").get<std::string>();
    graphs[id] = parse_cfgtext(je.at("cfg").get<std::string>());
    order.push_back(id);
  }
  if (order.empty()) {
    raise(ErrorCode::UnsupportedUnit, "fusion input lists no graphs");
  }
  std::set<std::string> referenced;
  for (const auto& [id, g] : graphs) {
    for (const auto& node : g.nodes) {
      if (node.placeholder && graphs.count(node.label)) {
        referenced.insert(node.label);
      }
    }
  }
  std::string root = order.back();
  for (const auto& id : order) {
    if (!referenced.count(id)) {
      root = id;
      break;
    }
  }
  return emit_cfgtext(fuse_all(graphs, root));
}

std::string complete_cot(const json& in) {
  const std::string code = in.at("code").get<std::string>();
  Analysis a = analyze(code, {});
  std::ostringstream out;
  out << "Step 1: structure hierarchy\n";
  if (a.blocks.empty()) {
    out << "structure: none\n";
  } else {
    StructureHierarchy h;
    for (auto& [region, entry] : a.blocks) h.entries.push_back(entry);
    out << "structure:\n" << emit_structure_lines(h);
    std::set<std::string> parents;
    for (const auto& e : h.entries) {
      if (!e.parent.empty()) parents.insert(e.parent);
    }
    out << "Step 2: innermost code blocks\n";
    std::vector<std::pair<std::string, std::string>> leaves;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
      const auto& entry = a.blocks[i].second;
      if (parents.count(entry.id)) continue;
      const Region* r = a.blocks[i].first;
      leaves.emplace_back(entry.id, code.substr(r->span.begin, r->span.size()));
    }
    out << emit_extract_text(leaves);
    out << "Step 3: block CFGs\n";
    for (const auto& [id, text] : leaves) {
      out << "graph " << id << "\n" << emit_cfgtext(build_cfg_from_source(text));
    }
  }
  out << "Step 4: fused control flow graph\n";
  out << emit_cfgtext(build_cfg_from_source(code));
  return out.str();
}

std::string complete_direct(const json& in) {
  const std::string code = in.at("code").get<std::string>();
  return emit_cfgtext(build_cfg_from_source(code));
}

}  // namespace

std::string heuristic_complete(const std::string& unit_id,
                               const std::string& structured_input_json) {
  json in = parse_input(structured_input_json, unit_id);
  if (unit_id == "structure") return complete_structure(in);
  if (unit_id == "extract") return complete_extract(in);
  if (unit_id == "blockcfg") return complete_blockcfg(in);
  if (unit_id == "fusion") return complete_fusion(in);
  if (unit_id == "cot") return complete_cot(in);
  if (unit_id == "direct") return complete_direct(in);
  raise(ErrorCode::UnsupportedUnit, "`" + unit_id + "`");
}

std::string infer_unit_from_prompt(const std::string& prompt_text) {
  static const char* kUnits[] = {"structure", "extract", "blockcfg",
                                 "fusion",    "cot",     "direct"};
  for (const char* unit : kUnits) {
    const std::string& desc = unit_task_description(unit);
    if (prompt_text.rfind(desc, 0) == 0) return unit;
  }
  raise(ErrorCode::UnsupportedUnit, "prompt matches no known task description");
}

std::string extract_prompt_payload(const std::string& prompt_text) {
  const std::string tail = "\nOutput:\n";
  if (prompt_text.size() < tail.size() ||
      prompt_text.compare(prompt_text.size() - tail.size(), tail.size(),
                          tail) != 0) {
    raise(ErrorCode::UnsupportedUnit, "prompt does not end in an Output slot");
  }
  std::string body = prompt_text.substr(0, prompt_text.size() - tail.size());
  const std::string marker = "Input:\n";
  std::size_t pos = body.rfind(marker);
  if (pos == std::string::npos) {
    raise(ErrorCode::UnsupportedUnit, "prompt has no Input section");
  }
  return body.substr(pos + marker.size());
}

std::string complete_from_prompt(const std::string& prompt_text) {
  const std::string unit = infer_unit_from_prompt(prompt_text);
  const std::string payload = extract_prompt_payload(prompt_text);
  json in;
  if (unit == "structure" || unit == "cot" || unit == "direct") {
    in["code"] = payload;
  } else if (unit == "blockcfg") {
    in["text"] = payload;
  } else if (unit == "extract") {
    auto [code, structure_lines] = split_extract_payload(payload);
    StructureHierarchy h = parse_structure_text(structure_lines);
    in["code"] = code;
    json entries = json::array();
    for (const auto& e : h.entries) {
      entries.push_back({{"id", e.id},
                         {"kind", block_kind_name(e.kind)},
                         {"depth", e.depth},
                         {"parent", e.parent}});
    }
    in["hierarchy"] = entries;
  } else if (unit == "fusion") {
    json cfgs = json::array();
    for (const auto& [id, cfg] : parse_fusion_payload(payload)) {
      cfgs.push_back({{"id", id}, {"cfg", cfg}});
    }
    in["cfgs"] = cfgs;
  }
  return heuristic_complete(unit, in.dump());
}

}  // namespace cfgchain
