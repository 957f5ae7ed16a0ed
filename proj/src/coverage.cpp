#include "cfgchain/coverage.hpp"

#include <map>
#include <set>

#include "cfgchain/error.hpp"
#include "cfgchain/source.hpp"

namespace cfgchain {

CoverageReport coverage(const Cfg& generated, const Cfg& gold) {
  if (gold.nodes.empty()) {
    raise(ErrorCode::EmptyGold, "gold graph has no nodes");
  }
  CoverageReport report;

  // Greedy label matching in source order. Labels partition both node sets,
  // so greedy attains the maximum matching size per label class.
  std::map<std::string, std::string> gold_to_gen;
  std::vector<bool> gen_used(generated.nodes.size(), false);
  for (const auto& gnode : gold.nodes) {
    const std::string glabel = normalize_label(gnode.label);
    bool matched = false;
    for (std::size_t i = 0; i < generated.nodes.size(); ++i) {
      if (gen_used[i]) continue;
      if (normalize_label(generated.nodes[i].label) != glabel) continue;
      gen_used[i] = true;
      gold_to_gen[gnode.id] = generated.nodes[i].id;
      report.matched_nodes.push_back({gnode.id, generated.nodes[i].id, glabel});
      matched = true;
      break;
    }
    if (!matched) report.wrong_nodes.push_back(gnode.id);
  }
  for (std::size_t i = 0; i < generated.nodes.size(); ++i) {
    if (!gen_used[i]) report.spurious_nodes.push_back(generated.nodes[i].id);
  }

  std::set<std::tuple<std::string, std::string, std::string>> gen_edges;
  for (const auto& e : generated.edges) {
    gen_edges.insert({e.from, e.to, normalize_label(e.label)});
  }
  std::set<std::tuple<std::string, std::string, std::string>> used_gen_edges;
  for (const auto& e : gold.edges) {
    auto fu = gold_to_gen.find(e.from);
    auto tu = gold_to_gen.find(e.to);
    bool ok = false;
    if (fu != gold_to_gen.end() && tu != gold_to_gen.end()) {
      auto key = std::make_tuple(fu->second, tu->second, normalize_label(e.label));
      if (gen_edges.count(key)) {
        ok = true;
        used_gen_edges.insert(key);
      }
    }
    if (ok) {
      report.matched_edges.push_back(e);
    } else {
      report.wrong_edges.push_back(e);
    }
  }
  for (const auto& e : generated.edges) {
    auto key = std::make_tuple(e.from, e.to, normalize_label(e.label));
    if (!used_gen_edges.count(key)) report.spurious_edges.push_back(e);
  }

  const double total_nodes = static_cast<double>(gold.nodes.size());
  report.node_coverage =
      (total_nodes - static_cast<double>(report.wrong_nodes.size())) / total_nodes;
  if (gold.edges.empty()) {
    // a gold graph with no edges is fully covered on the edge axis
    report.edge_coverage = 1.0;
  } else {
    const double total_edges = static_cast<double>(gold.edges.size());
    report.edge_coverage =
        (total_edges - static_cast<double>(report.wrong_edges.size())) /
        total_edges;
  }
  return report;
}

}  // namespace cfgchain
