#include <doctest.h>

#include <algorithm>
#include <set>

#include "cfgchain/cfg.hpp"
#include "cfgchain/error.hpp"
#include "support.hpp"

using namespace cfgchain;

namespace {

Cfg chain_with_placeholder() {
  // A -> p -> B
  Cfg g;
  g.nodes.push_back({"a", "A", false});
  g.nodes.push_back({"p", "if_block_1", true});
  g.nodes.push_back({"b", "B", false});
  g.entry_id = "a";
  g.edges.push_back({"a", "p", ""});
  g.edges.push_back({"p", "b", ""});
  return g;
}

// All simple entry->exit node-label paths, for the small-instance oracle.
void paths_from(const Cfg& g, const std::string& node,
                std::vector<std::string>& stack, std::set<std::string>& seen_nodes,
                std::vector<std::vector<std::string>>& out) {
  const CfgNode* n = g.find_node(node);
  stack.push_back(n->label);
  bool has_out = false;
  for (const auto& e : g.edges) {
    if (e.from != node) continue;
    has_out = true;
    if (seen_nodes.count(e.to)) continue;
    seen_nodes.insert(e.to);
    paths_from(g, e.to, stack, seen_nodes, out);
    seen_nodes.erase(e.to);
  }
  if (!has_out) out.push_back(stack);
  stack.pop_back();
}

std::vector<std::vector<std::string>> label_paths(const Cfg& g) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> stack;
  std::set<std::string> seen{g.entry_id};
  paths_from(g, g.entry_id, stack, seen, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("fuse: single-node inner degenerates to a relabel") {
  Cfg outer = chain_with_placeholder();
  Cfg inner;
  inner.nodes.push_back({"n", "x = 1", false});
  inner.entry_id = "n";

  Cfg fused = fuse(outer, "if_block_1", inner);
  CHECK(fused.nodes.size() == 3);
  CHECK(fused.edges.size() == 2);
  Cfg expected = outer;
  expected.nodes[1] = {"n", "x = 1", false};
  expected.edges[0] = {"a", "n", ""};
  expected.edges[1] = {"n", "b", ""};
  CHECK(structurally_equal(fused, expected));
}

TEST_CASE("fuse: two-node inner gives 4 nodes and 3 edges") {
  Cfg outer = chain_with_placeholder();
  Cfg inner;
  inner.nodes.push_back({"entry", "E", false});
  inner.nodes.push_back({"x", "X", false});
  inner.entry_id = "entry";
  inner.edges.push_back({"entry", "x", ""});

  Cfg fused = fuse(outer, "if_block_1", inner);
  CHECK(fused.nodes.size() == 4);
  CHECK(fused.edges.size() == 3);
  auto paths = label_paths(fused);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0] == std::vector<std::string>{"A", "E", "X", "B"});
}

TEST_CASE("fuse: open branch ports take the outgoing flow with their label") {
  // inner: cond -true-> body (back edge omitted); false port is open
  Cfg outer = chain_with_placeholder();
  Cfg inner;
  inner.nodes.push_back({"c", "while (x < 3)", false});
  inner.nodes.push_back({"s", "x = x + 1", false});
  inner.entry_id = "c";
  inner.edges.push_back({"c", "s", "true"});
  inner.edges.push_back({"s", "c", ""});

  Cfg fused = fuse(outer, "if_block_1", inner);
  // the placeholder's out-edge is replicated from the open false port
  bool found = false;
  for (const auto& e : fused.edges) {
    const CfgNode* from = fused.find_node(e.from);
    if (from && from->label == "while (x < 3)" && e.label == "false") {
      const CfgNode* to = fused.find_node(e.to);
      CHECK(to->label == "B");
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("fuse: errors") {
  Cfg outer = chain_with_placeholder();
  Cfg inner;
  inner.nodes.push_back({"n", "x", false});
  inner.entry_id = "n";

  try {
    fuse(outer, "for_block_9", inner);
    FAIL("expected NoSuchPlaceholder");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSuchPlaceholder);
  }

  Cfg two = outer;
  two.nodes.push_back({"p2", "if_block_1", true});
  try {
    fuse(two, "if_block_1", inner);
    FAIL("expected MultiplePlaceholderMatches");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MultiplePlaceholderMatches);
  }

  Cfg bad_inner = inner;
  bad_inner.entry_id = "missing";
  try {
    fuse(outer, "if_block_1", bad_inner);
    FAIL("expected InnerMissingEntry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InnerMissingEntry);
  }
}

TEST_CASE("fuse: id collisions get the smallest fresh _f suffix") {
  Cfg outer = chain_with_placeholder();
  outer.nodes.push_back({"n1", "taken", false});
  Cfg inner;
  inner.nodes.push_back({"n1", "inner first", false});
  inner.nodes.push_back({"n1_f1", "inner second", false});
  inner.entry_id = "n1";
  inner.edges.push_back({"n1", "n1_f1", ""});

  Cfg fused = fuse(outer, "if_block_1", inner);
  CHECK(fused.find_node("n1_f2") != nullptr);  // n1 renamed past taken n1_f1
  std::set<std::string> ids;
  for (const auto& n : fused.nodes) CHECK(ids.insert(n.id).second);
}

TEST_CASE("fuse: count law on randomized pairs") {
  testsupport::GraphGen gen(2024);
  for (int round = 0; round < 500; ++round) {
    auto [outer, inner] = gen.fuse_pair();
    const int outdeg_p = outer.out_degree("p");
    const std::size_t exits =
        exit_nodes(inner).size() + open_ports(inner).size();
    Cfg fused = fuse(outer, "if_block_1", inner);
    CHECK(fused.nodes.size() == outer.nodes.size() - 1 + inner.nodes.size());
    CHECK(fused.edges.size() == outer.edges.size() - outdeg_p +
                                    inner.edges.size() + outdeg_p * exits);
  }
}

namespace {

// Simple entry->target label paths (any prefix reaching target), for the
// port-exit side of the expansion oracle.
void prefixes_to(const Cfg& g, const std::string& node, const std::string& target,
                 std::vector<std::string>& stack, std::set<std::string>& seen,
                 std::vector<std::vector<std::string>>& out) {
  stack.push_back(g.find_node(node)->label);
  if (node == target) out.push_back(stack);
  for (const auto& e : g.edges) {
    if (e.from != node || seen.count(e.to)) continue;
    seen.insert(e.to);
    prefixes_to(g, e.to, target, stack, seen, out);
    seen.erase(e.to);
  }
  stack.pop_back();
}

std::vector<std::vector<std::string>> paths_to_node(const Cfg& g,
                                                    const std::string& target) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> stack;
  std::set<std::string> seen{g.entry_id};
  prefixes_to(g, g.entry_id, target, stack, seen, out);
  return out;
}

}  // namespace

TEST_CASE("fuse: path semantics match brute-force expansion on small DAGs") {
  testsupport::GraphGen gen(515);
  for (int round = 0; round < 300; ++round) {
    auto [outer, inner] = gen.fuse_pair(/*acyclic=*/true);
    if (outer.nodes.size() > 8 || inner.nodes.size() > 8) continue;
    Cfg fused = fuse(outer, "if_block_1", inner);

    // Traversing the placeholder mid-path expands to inner's maximal paths
    // (leaving from a plain exit) or to any prefix reaching an open port
    // (leaving through the port edge). A terminal placeholder expands to
    // maximal paths only.
    auto inner_max_paths = label_paths(inner);
    std::vector<std::vector<std::string>> inner_port_prefixes;
    for (const auto& port : open_ports(inner)) {
      for (auto& p : paths_to_node(inner, port.node_id)) {
        inner_port_prefixes.push_back(std::move(p));
      }
    }

    auto outer_paths = label_paths(outer);
    std::vector<std::vector<std::string>> expected;
    for (const auto& path : outer_paths) {
      std::vector<std::vector<std::string>> partial{{}};
      for (std::size_t li = 0; li < path.size(); ++li) {
        const std::string& label = path[li];
        const bool terminal = (li + 1 == path.size());
        std::vector<std::vector<std::string>> next;
        for (const auto& prefix : partial) {
          if (label == "if_block_1") {
            for (const auto& ipath : inner_max_paths) {
              auto ext = prefix;
              ext.insert(ext.end(), ipath.begin(), ipath.end());
              next.push_back(std::move(ext));
            }
            if (!terminal) {
              for (const auto& ipath : inner_port_prefixes) {
                auto ext = prefix;
                ext.insert(ext.end(), ipath.begin(), ipath.end());
                next.push_back(std::move(ext));
              }
            }
          } else {
            auto ext = prefix;
            ext.push_back(label);
            next.push_back(std::move(ext));
          }
        }
        partial = std::move(next);
      }
      for (auto& p : partial) expected.push_back(std::move(p));
    }
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());

    auto actual = label_paths(fused);
    actual.erase(std::unique(actual.begin(), actual.end()), actual.end());
    CHECK(actual == expected);
  }
}

TEST_CASE("fuse: independent placeholders commute") {
  testsupport::GraphGen gen(99);
  for (int round = 0; round < 100; ++round) {
    Cfg outer = gen.graph(5);
    outer.nodes.push_back({"p1", "if_block_1", true});
    outer.nodes.push_back({"p2", "for_block_1", true});
    outer.edges.push_back({outer.nodes[0].id, "p1", ""});
    outer.edges.push_back({"p1", "p2", ""});
    Cfg inner1 = gen.graph(4);
    Cfg inner2 = gen.graph(4);

    Cfg ab = fuse(fuse(outer, "if_block_1", inner1), "for_block_1", inner2);
    Cfg ba = fuse(fuse(outer, "for_block_1", inner2), "if_block_1", inner1);
    CHECK(structurally_equal(ab, ba));
  }
}

TEST_CASE("fuse_all: resolves nested placeholders innermost-outward") {
  std::map<std::string, Cfg> graphs;
  {
    Cfg outer;
    outer.nodes.push_back({"m", "method", false});
    outer.nodes.push_back({"p", "for_block_1", true});
    outer.nodes.push_back({"r", "return", false});
    outer.entry_id = "m";
    outer.edges.push_back({"m", "p", ""});
    outer.edges.push_back({"p", "r", ""});
    graphs["method_block_1"] = outer;
  }
  {
    Cfg mid;
    mid.nodes.push_back({"c", "i < n", false});
    mid.nodes.push_back({"p", "if_block_1", true});
    mid.entry_id = "c";
    mid.edges.push_back({"c", "p", "true"});
    mid.edges.push_back({"p", "c", ""});
    graphs["for_block_1"] = mid;
  }
  {
    Cfg leaf;
    leaf.nodes.push_back({"s", "x = 1", false});
    leaf.entry_id = "s";
    graphs["if_block_1"] = leaf;
  }
  Cfg fused = fuse_all(graphs, "method_block_1");
  for (const auto& n : fused.nodes) CHECK(!n.placeholder);
  CHECK(fused.nodes.size() == 4);

  std::map<std::string, Cfg> missing = graphs;
  missing.erase("if_block_1");
  try {
    fuse_all(missing, "method_block_1");
    FAIL("expected FusionError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FusionError);
  }
}
