#pragma once

#include <map>
#include <string>
#include <vector>

namespace cfgchain {

/// One CFG node: a statement or condition, or a placeholder standing for a
/// nested block's graph. A node is a placeholder exactly when its label is a
/// block id of the form `<kind>_block_<k>`.
struct CfgNode {
  std::string id;     // [a-z][a-z0-9_]*
  std::string label;  // statement/condition text, or a block id
  bool placeholder = false;

  bool operator==(const CfgNode&) const = default;
};

/// Directed edge. Labels are drawn from {"", "true", "false", "case <v>",
/// "default"}; the empty label is plain sequencing.
struct CfgEdge {
  std::string from;
  std::string to;
  std::string label;

  bool operator==(const CfgEdge&) const = default;
};

struct Cfg {
  std::vector<CfgNode> nodes;
  std::vector<CfgEdge> edges;
  std::string entry_id;

  bool operator==(const Cfg&) const = default;

  const CfgNode* find_node(const std::string& id) const;
  int out_degree(const std::string& id) const;
};

/// A branch that a graph leaves open: the node has a "true" edge but no
/// "false" sibling (or vice versa), or case edges without a default. During
/// fusion these ports receive the control flow that leaves the placeholder.
struct OpenPort {
  std::string node_id;
  std::string label;  // the missing branch label

  bool operator==(const OpenPort&) const = default;
};

struct Violation {
  enum class Kind { Unreachable, DanglingBranch, DuplicateEdge };
  Kind kind;
  std::string node_or_edge;
  std::string message;
};

/// True for labels of the form `<kind>_block_<k>` with one of the six block
/// kinds and a positive integer k.
bool is_placeholder_label(const std::string& label);

/// Parses the canonical CFGText format:
///
///   cfg v1
///   node <id> "<label>"
///   edge <from> <to> ["<label>"]
///
/// plus an optional `entry <id>` directive when the entry is not the first
/// declared node. `\"` and `\\` escape inside labels. The parser is lenient
/// to surrounding prose: parsing starts at the last `cfg v1` line and lines
/// matching no directive are skipped, but directive lines themselves are
/// strict. Throws Error with a line number on malformed directives,
/// MissingHeader, UnknownNodeRef (edges may not forward-reference) and
/// DuplicateNodeId.
Cfg parse_cfgtext(const std::string& text);

/// Deterministic inverse of parse_cfgtext: nodes in list order, then edges in
/// list order. parse_cfgtext(emit_cfgtext(g)) == g for every valid g.
std::string emit_cfgtext(const Cfg& g);

/// Graphviz rendering. Condition nodes (any labeled out-edge) get a diamond
/// shape, placeholders a dashed box. Byte-deterministic for equal inputs.
std::string emit_dot(const Cfg& g);

/// Nodes with out-degree 0, in node-list order.
std::vector<std::string> exit_nodes(const Cfg& g);

/// Open branch ports in node-list order (see OpenPort).
std::vector<OpenPort> open_ports(const Cfg& g);

/// Substitutes `inner` for the unique placeholder node labeled
/// `placeholder_id` in `outer`:
///   - edges into the placeholder are redirected to inner's entry, labels kept;
///   - each edge out of the placeholder is replicated from every exit of
///     inner: plain exits keep the outgoing label, open ports close with
///     their port label (the outgoing label wins if both are nonempty);
///   - inner ids colliding with outer ids get the smallest fresh `_f<n>`
///     suffix.
/// Count law: |V| = |V_outer| - 1 + |V_inner| and
/// |E| = |E_outer| - outdeg(p) + |E_inner| + outdeg(p) * n_exits(inner),
/// where n_exits counts plain exits plus open ports.
Cfg fuse(const Cfg& outer, const std::string& placeholder_id, const Cfg& inner);

/// Resolves every placeholder of the graph named `root_id` by recursively
/// fusing in the graphs its placeholders name, innermost-outward. The
/// placeholder references must form a tree rooted at `root_id`; a missing
/// graph or a reference cycle raises FusionError.
Cfg fuse_all(const std::map<std::string, Cfg>& graphs,
             const std::string& root_id);

/// Well-formedness report: unreachable nodes, dangling true/false branches,
/// duplicate edges. Violations are data, not failures.
std::vector<Violation> validate_cfg(const Cfg& g);

/// Label-level structural equality: equal node-label multisets, equal
/// (from-label, edge-label, to-label) multisets and equal entry labels.
/// Insensitive to node ids, so fusion results can be compared across
/// backends that number nodes differently.
bool structurally_equal(const Cfg& a, const Cfg& b);

}  // namespace cfgchain
