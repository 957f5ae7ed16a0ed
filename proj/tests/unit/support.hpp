#pragma once

#include <random>
#include <string>
#include <vector>

#include "cfgchain/cfg.hpp"
#include "cfgchain/source.hpp"

namespace testsupport {

inline std::string repo_root() { return CFGCHAIN_REPO_ROOT; }

inline std::string repo_file(const std::string& relative) {
  return cfgchain::load_source_file(repo_root() + "/" + relative);
}

// Random but reproducible graphs for the property tests. Node labels are
// drawn from a small word list so label collisions occur now and then.
class GraphGen {
 public:
  explicit GraphGen(unsigned seed) : rng_(seed) {}

  std::mt19937& rng() { return rng_; }

  int pick(int lo, int hi) {  // inclusive; avoids distribution portability
    return lo + static_cast<int>(rng_() % static_cast<unsigned>(hi - lo + 1));
  }

  std::string word() {
    static const char* words[] = {"load",  "store", "check", "emit",
                                  "reset", "grow",  "trim",  "scan"};
    return std::string(words[rng_() % 8]) + std::to_string(pick(0, 5));
  }

  cfgchain::Cfg graph(int max_nodes = 10, bool acyclic = false) {
    cfgchain::Cfg g;
    const int n = pick(1, max_nodes);
    for (int i = 0; i < n; ++i) {
      g.nodes.push_back({"n" + std::to_string(i + 1), word(), false});
    }
    g.entry_id = g.nodes.front().id;
    const int edges = pick(0, std::min(2 * n, 14));
    for (int k = 0; k < edges; ++k) {
      int a = pick(0, n - 1);
      int b = pick(0, n - 1);
      if (acyclic) {
        if (a == b) continue;
        if (a > b) std::swap(a, b);
      }
      static const char* labels[] = {"", "", "", "true", "false"};
      cfgchain::CfgEdge e{g.nodes[a].id, g.nodes[b].id, labels[rng_() % 5]};
      bool dup = false;
      for (const auto& other : g.edges) {
        if (other == e) dup = true;
      }
      if (!dup) g.edges.push_back(e);
    }
    return g;
  }

  // outer with exactly one placeholder (unlabeled out-edges), plus an inner
  // graph, suitable for fuse() property tests
  std::pair<cfgchain::Cfg, cfgchain::Cfg> fuse_pair(bool acyclic = false) {
    cfgchain::Cfg outer = graph(6, acyclic);
    cfgchain::Cfg inner = graph(5, acyclic);
    const std::string pid = "if_block_1";
    outer.nodes.push_back({"p", pid, true});
    // wire the placeholder into the graph with unlabeled edges
    const int ins = pick(0, 2);
    for (int i = 0; i < ins; ++i) {
      const auto& from = outer.nodes[static_cast<std::size_t>(
          pick(0, static_cast<int>(outer.nodes.size()) - 2))];
      cfgchain::CfgEdge e{from.id, "p", ""};
      bool dup = false;
      for (const auto& other : outer.edges) {
        if (other == e) dup = true;
      }
      if (!dup) outer.edges.push_back(e);
    }
    const int outs = pick(0, 2);
    for (int i = 0; i < outs; ++i) {
      const auto& to = outer.nodes[static_cast<std::size_t>(
          pick(0, static_cast<int>(outer.nodes.size()) - 2))];
      cfgchain::CfgEdge e{"p", to.id, ""};
      bool dup = false;
      for (const auto& other : outer.edges) {
        if (other == e) dup = true;
      }
      if (!dup) outer.edges.push_back(e);
    }
    return {outer, inner};
  }
};

}  // namespace testsupport
