#include "cfgchain/cfg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cfgchain/error.hpp"
#include "cfgchain/source.hpp"

namespace cfgchain {

namespace {

bool valid_node_id(const std::string& id) {
  if (id.empty()) return false;
  if (id[0] < 'a' || id[0] > 'z') return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::string escape_label(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\\' || c == '"') out.push_back('\\');
    if (c == '\n') {
      out.push_back(' ');  // labels are single-line by construction
      continue;
    }
    out.push_back(c);
  }
  return out;
}

struct LineCursor {
  const std::string& line;
  std::size_t pos = 0;

  void skip_spaces() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }

  std::string word() {
    skip_spaces();
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    return line.substr(start, pos - start);
  }

  bool at_end() {
    skip_spaces();
    return pos >= line.size();
  }

  // Reads a double-quoted label with \" and \\ escapes.
  std::string quoted(int lineno) {
    skip_spaces();
    if (pos >= line.size() || line[pos] != '"') {
      raise(ErrorCode::ParseError,
            "expected quoted label at line " + std::to_string(lineno));
    }
    ++pos;
    std::string out;
    while (pos < line.size() && line[pos] != '"') {
      if (line[pos] == '\\' && pos + 1 < line.size()) ++pos;
      out.push_back(line[pos]);
      ++pos;
    }
    if (pos >= line.size()) {
      raise(ErrorCode::ParseError,
            "unterminated label at line " + std::to_string(lineno));
    }
    ++pos;
    return out;
  }
};

}  // namespace

const CfgNode* Cfg::find_node(const std::string& id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

int Cfg::out_degree(const std::string& id) const {
  int d = 0;
  for (const auto& e : edges) {
    if (e.from == id) ++d;
  }
  return d;
}

bool is_placeholder_label(const std::string& label) {
  std::size_t us = label.find("_block_");
  if (us == std::string::npos) return false;
  if (!block_kind_from_name(label.substr(0, us))) return false;
  std::string num = label.substr(us + 7);
  if (num.empty() || num[0] == '0') return false;
  return std::all_of(num.begin(), num.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

Cfg parse_cfgtext(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) lines.push_back(cur);
  }

  auto trimmed = [](const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return std::string();
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
  };

  // Completion backends may wrap the graph in chatter; start at the last
  // header line so trailing re-statements win.
  std::size_t start = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trimmed(lines[i]) == "cfg v1") start = i;
  }
  if (start == lines.size()) {
    raise(ErrorCode::MissingHeader, "no `cfg v1` line found");
  }

  Cfg g;
  std::unordered_set<std::string> ids;
  std::string entry_directive;

  for (std::size_t i = start + 1; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    std::string line = trimmed(lines[i]);
    if (line.empty()) continue;
    LineCursor cur{line};
    std::string head = cur.word();
    if (head == "node") {
      std::string id = cur.word();
      if (!valid_node_id(id)) {
        raise(ErrorCode::ParseError,
              "invalid node id `" + id + "` at line " + std::to_string(lineno));
      }
      if (ids.count(id)) {
        raise(ErrorCode::DuplicateNodeId,
              "`" + id + "` redeclared at line " + std::to_string(lineno));
      }
      std::string label = cur.quoted(lineno);
      ids.insert(id);
      g.nodes.push_back({id, label, is_placeholder_label(label)});
    } else if (head == "edge") {
      std::string from = cur.word();
      std::string to = cur.word();
      if (!ids.count(from)) {
        raise(ErrorCode::UnknownNodeRef,
              "`" + from + "` at line " + std::to_string(lineno));
      }
      if (!ids.count(to)) {
        raise(ErrorCode::UnknownNodeRef,
              "`" + to + "` at line " + std::to_string(lineno));
      }
      std::string label;
      if (!cur.at_end()) label = cur.quoted(lineno);
      g.edges.push_back({from, to, label});
    } else if (head == "entry") {
      entry_directive = cur.word();
    }
    // anything else is prose; skip
  }

  if (g.nodes.empty()) {
    raise(ErrorCode::ParseError, "graph declares no nodes");
  }
  if (!entry_directive.empty()) {
    if (!ids.count(entry_directive)) {
      raise(ErrorCode::UnknownNodeRef, "entry `" + entry_directive + "`");
    }
    g.entry_id = entry_directive;
  } else {
    g.entry_id = g.nodes.front().id;
  }
  return g;
}

std::string emit_cfgtext(const Cfg& g) {
  std::ostringstream out;
  out << "cfg v1\n";
  if (!g.nodes.empty() && g.entry_id != g.nodes.front().id) {
    out << "entry " << g.entry_id << "\n";
  }
  for (const auto& n : g.nodes) {
    out << "node " << n.id << " \"" << escape_label(n.label) << "\"\n";
  }
  for (const auto& e : g.edges) {
    out << "edge " << e.from << " " << e.to;
    if (!e.label.empty()) out << " \"" << escape_label(e.label) << "\"";
    out << "\n";
  }
  return out.str();
}

std::string emit_dot(const Cfg& g) {
  std::unordered_set<std::string> condition_nodes;
  for (const auto& e : g.edges) {
    if (!e.label.empty()) condition_nodes.insert(e.from);
  }
  std::ostringstream out;
  out << "digraph cfg {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& n : g.nodes) {
    out << "  \"" << n.id << "\" [label=\"" << escape_label(n.label) << "\"";
    if (n.placeholder) {
      out << ", style=dashed";
    } else if (condition_nodes.count(n.id)) {
      out << ", shape=diamond";
    }
    out << "];\n";
  }
  for (const auto& e : g.edges) {
    out << "  \"" << e.from << "\" -> \"" << e.to << "\"";
    if (!e.label.empty()) out << " [label=\"" << escape_label(e.label) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::vector<std::string> exit_nodes(const Cfg& g) {
  std::unordered_set<std::string> has_out;
  for (const auto& e : g.edges) has_out.insert(e.from);
  std::vector<std::string> out;
  for (const auto& n : g.nodes) {
    if (!has_out.count(n.id)) out.push_back(n.id);
  }
  return out;
}

std::vector<OpenPort> open_ports(const Cfg& g) {
  std::vector<OpenPort> ports;
  for (const auto& n : g.nodes) {
    bool has_true = false, has_false = false, has_case = false;
    bool has_default = false, has_plain = false;
    for (const auto& e : g.edges) {
      if (e.from != n.id) continue;
      if (e.label == "true") has_true = true;
      else if (e.label == "false") has_false = true;
      else if (e.label == "default") has_default = true;
      else if (e.label.rfind("case ", 0) == 0) has_case = true;
      else if (e.label.empty()) has_plain = true;
    }
    if (has_plain) continue;
    if (has_true && !has_false) {
      ports.push_back({n.id, "false"});
    } else if (has_false && !has_true) {
      ports.push_back({n.id, "true"});
    } else if (has_case && !has_default && !has_true && !has_false) {
      ports.push_back({n.id, "default"});
    }
  }
  return ports;
}

Cfg fuse(const Cfg& outer, const std::string& placeholder_id, const Cfg& inner) {
  // Locate the unique placeholder.
  int found = 0;
  std::string pid;
  for (const auto& n : outer.nodes) {
    if (n.placeholder && n.label == placeholder_id) {
      ++found;
      pid = n.id;
    }
  }
  if (found == 0) {
    raise(ErrorCode::NoSuchPlaceholder, placeholder_id);
  }
  if (found > 1) {
    raise(ErrorCode::MultiplePlaceholderMatches, placeholder_id);
  }
  if (!inner.find_node(inner.entry_id)) {
    raise(ErrorCode::InnerMissingEntry, "inner graph for " + placeholder_id);
  }

  std::unordered_set<std::string> used;
  for (const auto& n : outer.nodes) {
    if (n.id != pid) used.insert(n.id);
  }
  std::unordered_map<std::string, std::string> rename;
  for (const auto& n : inner.nodes) {
    std::string id = n.id;
    if (used.count(id)) {
      for (int k = 1;; ++k) {
        std::string candidate = n.id + "_f" + std::to_string(k);
        if (!used.count(candidate)) {
          id = candidate;
          break;
        }
      }
    }
    used.insert(id);
    rename[n.id] = id;
  }

  const std::string inner_entry = rename.at(inner.entry_id);
  const std::vector<std::string> inner_exits = exit_nodes(inner);
  const std::vector<OpenPort> inner_ports = open_ports(inner);

  Cfg out;
  // Inner nodes take the placeholder's position so reading order is stable.
  for (const auto& n : outer.nodes) {
    if (n.id == pid) {
      for (const auto& m : inner.nodes) {
        out.nodes.push_back({rename.at(m.id), m.label, m.placeholder});
      }
    } else {
      out.nodes.push_back(n);
    }
  }

  std::vector<CfgEdge> placeholder_out;
  for (const auto& e : outer.edges) {
    if (e.from == pid) {
      placeholder_out.push_back(e);
      continue;
    }
    if (e.to == pid) {
      out.edges.push_back({e.from, inner_entry, e.label});
    } else {
      out.edges.push_back(e);
    }
  }
  for (const auto& e : inner.edges) {
    out.edges.push_back({rename.at(e.from), rename.at(e.to), e.label});
  }
  for (const auto& e : placeholder_out) {
    const std::string target = (e.to == pid) ? inner_entry : e.to;
    for (const auto& x : inner_exits) {
      out.edges.push_back({rename.at(x), target, e.label});
    }
    for (const auto& port : inner_ports) {
      const std::string label = e.label.empty() ? port.label : e.label;
      out.edges.push_back({rename.at(port.node_id), target, label});
    }
  }

  out.entry_id = (outer.entry_id == pid) ? inner_entry : outer.entry_id;
  return out;
}

namespace {

Cfg fuse_all_impl(const std::map<std::string, Cfg>& graphs,
                  const std::string& root_id,
                  std::set<std::string>& in_progress) {
  auto it = graphs.find(root_id);
  if (it == graphs.end()) {
    raise(ErrorCode::FusionError, "no graph for block `" + root_id + "`");
  }
  if (!in_progress.insert(root_id).second) {
    raise(ErrorCode::FusionError,
          "placeholder references cycle through `" + root_id + "`");
  }
  Cfg g = it->second;
  while (true) {
    std::string label;
    for (const auto& n : g.nodes) {
      if (n.placeholder) {
        label = n.label;
        break;
      }
    }
    if (label.empty()) break;
    Cfg inner = fuse_all_impl(graphs, label, in_progress);
    g = fuse(g, label, inner);
  }
  in_progress.erase(root_id);
  return g;
}

}  // namespace

Cfg fuse_all(const std::map<std::string, Cfg>& graphs,
             const std::string& root_id) {
  std::set<std::string> in_progress;
  return fuse_all_impl(graphs, root_id, in_progress);
}

std::vector<Violation> validate_cfg(const Cfg& g) {
  std::vector<Violation> out;
  if (g.nodes.empty()) return out;

  // reachability from entry
  std::unordered_map<std::string, std::vector<std::string>> succ;
  for (const auto& e : g.edges) succ[e.from].push_back(e.to);
  std::unordered_set<std::string> seen;
  std::vector<std::string> stack{g.entry_id};
  while (!stack.empty()) {
    std::string id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    for (const auto& t : succ[id]) stack.push_back(t);
  }
  for (const auto& n : g.nodes) {
    if (!seen.count(n.id)) {
      out.push_back({Violation::Kind::Unreachable, n.id,
                     "node `" + n.id + "` unreachable from entry"});
    }
  }

  // dangling true/false branches
  for (const auto& port : open_ports(g)) {
    if (port.label == "true" || port.label == "false") {
      out.push_back({Violation::Kind::DanglingBranch, port.node_id,
                     "node `" + port.node_id + "` branches without a `" +
                         port.label + "` sibling"});
    }
  }

  // duplicate edges
  std::set<std::tuple<std::string, std::string, std::string>> triples;
  for (const auto& e : g.edges) {
    if (!triples.insert({e.from, e.to, e.label}).second) {
      out.push_back({Violation::Kind::DuplicateEdge,
                     e.from + "->" + e.to,
                     "duplicate edge " + e.from + " -> " + e.to +
                         (e.label.empty() ? "" : " [" + e.label + "]")});
    }
  }
  return out;
}

bool structurally_equal(const Cfg& a, const Cfg& b) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) {
    return false;
  }
  auto label_of = [](const Cfg& g, const std::string& id) {
    const CfgNode* n = g.find_node(id);
    return n ? n->label : std::string();
  };
  if (label_of(a, a.entry_id) != label_of(b, b.entry_id)) return false;

  std::multiset<std::string> la, lb;
  for (const auto& n : a.nodes) la.insert(n.label);
  for (const auto& n : b.nodes) lb.insert(n.label);
  if (la != lb) return false;

  std::multiset<std::string> ea, eb;
  for (const auto& e : a.edges) {
    ea.insert(label_of(a, e.from) + "\x1f" + e.label + "\x1f" + label_of(a, e.to));
  }
  for (const auto& e : b.edges) {
    eb.insert(label_of(b, e.from) + "\x1f" + e.label + "\x1f" + label_of(b, e.to));
  }
  return ea == eb;
}

}  // namespace cfgchain
