#pragma once

#include <string>
#include <vector>

#include "cfgchain/cfg.hpp"

namespace cfgchain {

struct NodeMatch {
  std::string gold_id;
  std::string generated_id;
  std::string label;  // normalized
};

/// Per-element match ledger against a gold CFG. Coverage follows the
/// (total - wrong) / total convention over the gold graph's elements; extra
/// generated elements never reduce it and are reported separately as a
/// precision-style diagnostic.
struct CoverageReport {
  double node_coverage = 0.0;
  double edge_coverage = 0.0;
  std::vector<NodeMatch> matched_nodes;
  std::vector<std::string> wrong_nodes;   // gold node ids left unmatched
  std::vector<CfgEdge> matched_edges;     // gold edges
  std::vector<CfgEdge> wrong_edges;       // gold edges left unmatched
  std::vector<std::string> spurious_nodes;  // generated-only
  std::vector<CfgEdge> spurious_edges;      // generated-only
};

/// Node matching is maximum bipartite matching on normalized-label equality,
/// greedy by source order on ties; a gold edge matches when both endpoints
/// matched and a generated edge connects their images with an equal
/// normalized label. Raises EmptyGold for an empty gold graph.
CoverageReport coverage(const Cfg& generated, const Cfg& gold);

}  // namespace cfgchain
