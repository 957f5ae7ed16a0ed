#include "cfgchain/cfg_build.hpp"

#include <algorithm>

#include "cfgchain/source.hpp"

namespace cfgchain {

namespace {

struct Port {
  std::string node;
  std::string label;
};

class Assembler {
 public:
  Cfg run(const RegionTree& tree) {
    build_seq(tree.roots, {});
    if (g_.nodes.empty()) {
      add_node("empty");
    }
    g_.entry_id = g_.nodes.front().id;
    return std::move(g_);
  }

 private:
  Cfg g_;
  int counter_ = 0;

  struct Frame {
    std::vector<Port>* break_sink = nullptr;     // loop or switch
    std::vector<Port>* continue_sink = nullptr;  // loops only
  };
  std::vector<Frame> frames_;

  std::string add_node(const std::string& label, bool placeholder = false,
                       const std::string& forced_id = {}) {
    std::string id = forced_id.empty() ? "n" + std::to_string(++counter_)
                                       : forced_id;
    g_.nodes.push_back({id, label, placeholder});
    return id;
  }

  void add_edge(const std::string& from, const std::string& to,
                const std::string& label) {
    for (const auto& e : g_.edges) {
      if (e.from == from && e.to == to && e.label == label) return;
    }
    g_.edges.push_back({from, to, label});
  }

  void connect(const std::vector<Port>& ports, const std::string& target) {
    for (const auto& p : ports) add_edge(p.node, target, p.label);
  }

  std::vector<Port> build_seq(const std::vector<Region>& items,
                              std::vector<Port> in) {
    for (const auto& item : items) in = build_item(item, std::move(in));
    return in;
  }

  std::vector<Port> build_item(const Region& r, std::vector<Port> in) {
    switch (r.type) {
      case RegionType::Statement: return build_statement(r, std::move(in));
      case RegionType::Placeholder: {
        std::string label = normalize_label(r.text);
        std::string id = g_.find_node(label) ? add_node(label, true)
                                             : add_node(label, true, label);
        connect(in, id);
        return {{id, ""}};
      }
      case RegionType::If: return build_if(r, std::move(in));
      case RegionType::For: return build_for(r, std::move(in));
      case RegionType::While: return build_while(r, std::move(in));
      case RegionType::Switch: return build_switch(r, std::move(in));
      case RegionType::Class:
      case RegionType::Method: {
        std::string id = add_node(r.header_text);
        connect(in, id);
        return build_seq(r.body, {{id, ""}});
      }
    }
    return in;
  }

  std::vector<Port> build_statement(const Region& r, std::vector<Port> in) {
    if (r.is_break) {
      for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
        if (it->break_sink) {
          for (auto& p : in) it->break_sink->push_back(p);
          return {};
        }
      }
      return {};  // break with nothing to leave: path simply ends
    }
    if (r.is_continue) {
      for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
        if (it->continue_sink) {
          for (auto& p : in) it->continue_sink->push_back(p);
          return {};
        }
      }
      return {};
    }
    std::string id = add_node(normalize_label(r.text));
    connect(in, id);
    if (r.is_return) return {};
    return {{id, ""}};
  }

  std::vector<Port> build_if(const Region& r, std::vector<Port> in) {
    std::string cond = add_node("if (" + r.cond + ")");
    connect(in, cond);
    std::vector<Port> exits = build_seq(r.body, {{cond, "true"}});
    if (!r.else_body.empty()) {
      std::vector<Port> else_exits = build_seq(r.else_body, {{cond, "false"}});
      exits.insert(exits.end(), else_exits.begin(), else_exits.end());
    } else {
      exits.push_back({cond, "false"});
    }
    return exits;
  }

  std::vector<Port> build_for(const Region& r, std::vector<Port> in) {
    if (!r.init.empty()) {
      std::string init = add_node(r.init);
      connect(in, init);
      in = {{init, ""}};
    }
    std::string cond = add_node(r.cond.empty() ? "true" : r.cond);
    connect(in, cond);

    std::vector<Port> breaks, continues;
    frames_.push_back({&breaks, &continues});
    std::vector<Port> body_exits = build_seq(r.body, {{cond, "true"}});
    frames_.pop_back();

    if (!r.update.empty()) {
      std::string update = add_node(r.update);
      connect(body_exits, update);
      connect(continues, update);
      add_edge(update, cond, "");
    } else {
      connect(body_exits, cond);
      connect(continues, cond);
    }
    std::vector<Port> exits{{cond, "false"}};
    exits.insert(exits.end(), breaks.begin(), breaks.end());
    return exits;
  }

  std::vector<Port> build_while(const Region& r, std::vector<Port> in) {
    std::string cond = add_node("while (" + r.cond + ")");
    connect(in, cond);
    std::vector<Port> breaks, continues;
    frames_.push_back({&breaks, &continues});
    std::vector<Port> body_exits = build_seq(r.body, {{cond, "true"}});
    frames_.pop_back();
    connect(body_exits, cond);
    connect(continues, cond);
    std::vector<Port> exits{{cond, "false"}};
    exits.insert(exits.end(), breaks.begin(), breaks.end());
    return exits;
  }

  std::vector<Port> build_switch(const Region& r, std::vector<Port> in) {
    std::string sw = add_node("switch (" + r.cond + ")");
    connect(in, sw);
    std::vector<Port> after;
    frames_.push_back({&after, nullptr});
    std::vector<Port> fallthrough;
    for (const auto& arm : r.arms) {
      std::vector<Port> entry = std::move(fallthrough);
      entry.push_back({sw, arm.is_default ? "default" : "case " + arm.label});
      fallthrough = build_seq(arm.body, std::move(entry));
    }
    frames_.pop_back();
    std::vector<Port> exits = std::move(after);
    exits.insert(exits.end(), fallthrough.begin(), fallthrough.end());
    if (!r.has_default) exits.push_back({sw, "default"});
    return exits;
  }
};

}  // namespace

Cfg build_cfg(const RegionTree& tree) {
  Assembler a;
  return a.run(tree);
}

Cfg build_cfg_from_source(const std::string& text) {
  return build_cfg(parse_regions(text));
}

}  // namespace cfgchain
