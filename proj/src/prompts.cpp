#include "cfgchain/prompts.hpp"

#include <map>
#include <set>
#include <sstream>

#include "cfgchain/cfg.hpp"
#include "cfgchain/error.hpp"

namespace cfgchain {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

const std::map<std::string, std::string>& task_table() {
  static const std::map<std::string, std::string> table = {
      {"structure",
       "Analyze and format the following java code into its nested block "
       "structure. There are six common types of code blocks: class_block, "
       "method_block, if_block, switch_block, for_block, while_block. Output "
       "a `structure:` line followed by one line per block in the form "
       "`block <id> kind=<kind> depth=<n> parent=<id|none> lines=<a>-<b>`, "
       "parents before their children, in source order. The code may be "
       "incomplete or contain errors such as missing curly braces, missing "
       "semicolons or stray operators; infer the intended structure from "
       "keywords and indentation instead of failing. If the code contains no "
       "block at all, output `structure: none`."},
      {"extract",
       "Extract the nested code block according to code structure. The input "
       "gives the code and its structure hierarchy. Output every innermost "
       "block (a block that contains no other block) exactly as it appears "
       "in the code, each wrapped between a `begin <id>` line and an "
       "`end <id>` line. When several innermost blocks sit side by side, "
       "output all of them in source order."},
      {"blockcfg",
       "Convert the following code to a control flow graph (CFG). Output a "
       "`cfg v1` line followed by one `node <id> \"<label>\"` line per "
       "statement or condition and `edge <from> <to> [\"<label>\"]` lines. "
       "Use labels true and false on conditional branch edges and `case "
       "<value>` and default on switch edges, and give loops a back edge to "
       "their condition. A block identifier such as if_block_1 stands for a "
       "nested block: keep it as a single node labeled with that identifier. "
       "The code may contain errors; convert the behavior the author "
       "intended."},
      {"fusion",
       "Please create a complete control flow graph of the code by fusing "
       "the given control flow graphs. Each input graph is introduced by a "
       "`graph <id>` line. Replace every node whose label is a block "
       "identifier with the graph of that identifier: edges into the node "
       "attach to that graph's entry, and edges out of the node leave from "
       "that graph's exits and open branches. Output one fused graph in cfg "
       "v1 format with no block-identifier nodes left."},
      {"cot",
       "Generate the given code's control flow graph (CFG) by reasoning "
       "through four steps in a single pass. Step 1: analyze the code's "
       "nested block structure (class_block, method_block, if_block, "
       "switch_block, for_block, while_block). Step 2: extract the nested "
       "code blocks from the innermost level outward, masking each extracted "
       "block with its block identifier. Step 3: convert each block to its "
       "own CFG. Step 4: fuse the block CFGs into one complete graph. Show "
       "your work for each step, then output the final fused graph in cfg v1 "
       "format: a `cfg v1` line, `node <id> \"<label>\"` lines and `edge "
       "<from> <to> [\"<label>\"]` lines. The final graph must contain no "
       "block-identifier nodes."},
      {"direct",
       "Generate the given code's control flow graph (CFG). Output a `cfg "
       "v1` line followed by `node <id> \"<label>\"` lines and `edge <from> "
       "<to> [\"<label>\"]` lines, using true/false labels on branch "
       "edges."},
  };
  return table;
}

}  // namespace

const std::string& unit_task_description(const std::string& unit_id) {
  const auto& table = task_table();
  auto it = table.find(unit_id);
  if (it == table.end()) {
    raise(ErrorCode::UnsupportedUnit, "no task description for `" + unit_id + "`");
  }
  return it->second;
}

bool is_unit_id(const std::string& id) {
  return task_table().count(id) > 0;
}

std::string render_prompt(const std::string& task_description,
                          const std::vector<PromptExample>& examples,
                          const std::string& payload) {
  std::ostringstream out;
  out << task_description << "\n\n";
  for (const auto& ex : examples) {
    out << "Input:\n" << ex.input << "\nOutput:\n" << ex.output << "\n\n";
  }
  out << "Input:\n" << payload << "\nOutput:\n";
  return out.str();
}

Prompt make_prompt(const std::string& unit_id,
                   std::vector<PromptExample> examples, std::string payload) {
  const bool unit_prompt = (unit_id == "structure" || unit_id == "extract" ||
                            unit_id == "blockcfg" || unit_id == "fusion");
  if (unit_prompt && examples.size() != 5) {
    raise(ErrorCode::ConfigError,
          "unit `" + unit_id + "` requires exactly 5 examples, got " +
              std::to_string(examples.size()));
  }
  if (examples.empty()) {
    raise(ErrorCode::ConfigError, "prompt for `" + unit_id + "` has no examples");
  }
  Prompt p;
  p.unit_id = unit_id;
  p.task_description = unit_task_description(unit_id);
  p.examples = std::move(examples);
  p.input_payload = std::move(payload);
  p.rendered = render_prompt(p.task_description, p.examples, p.input_payload);
  return p;
}

std::vector<std::string> StructureHierarchy::leaf_ids() const {
  std::set<std::string> parents;
  for (const auto& e : entries) {
    if (!e.parent.empty()) parents.insert(e.parent);
  }
  std::vector<std::string> leaves;
  for (const auto& e : entries) {
    if (!parents.count(e.id)) leaves.push_back(e.id);
  }
  return leaves;
}

std::string emit_structure_lines(const StructureHierarchy& h) {
  std::ostringstream out;
  for (const auto& e : h.entries) {
    out << "block " << e.id << " kind=" << block_kind_name(e.kind)
        << " depth=" << e.depth
        << " parent=" << (e.parent.empty() ? "none" : e.parent);
    if (e.line_begin > 0) {
      out << " lines=" << e.line_begin << "-" << e.line_end;
    }
    out << "\n";
  }
  return out.str();
}

StructureHierarchy parse_structure_text(const std::string& text) {
  StructureHierarchy h;
  bool none_marker = false;
  for (const std::string& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line == "structure: none" || line == "none") {
      none_marker = true;
      continue;
    }
    if (line.rfind("block ", 0) != 0) continue;

    std::istringstream in(line);
    std::string word, id;
    in >> word >> id;
    HierarchyEntry e;
    e.id = id;
    bool have_kind = false, have_depth = false, have_parent = false;
    while (in >> word) {
      std::size_t eq = word.find('=');
      if (eq == std::string::npos) {
        raise(ErrorCode::UnparseableOutput, "bad structure field `" + word + "`");
      }
      std::string key = word.substr(0, eq);
      std::string value = word.substr(eq + 1);
      if (key == "kind") {
        auto k = block_kind_from_name(value);
        if (!k) raise(ErrorCode::UnparseableOutput, "unknown kind `" + value + "`");
        e.kind = *k;
        have_kind = true;
      } else if (key == "depth") {
        try {
          e.depth = std::stoi(value);
        } catch (...) {
          raise(ErrorCode::UnparseableOutput, "bad depth `" + value + "`");
        }
        have_depth = true;
      } else if (key == "parent") {
        e.parent = (value == "none") ? "" : value;
        have_parent = true;
      } else if (key == "lines") {
        std::size_t dash = value.find('-');
        if (dash != std::string::npos) {
          try {
            e.line_begin = std::stoi(value.substr(0, dash));
            e.line_end = std::stoi(value.substr(dash + 1));
          } catch (...) {
            e.line_begin = e.line_end = 0;
          }
        }
      }
    }
    if (!have_kind || !have_depth || !have_parent || e.id.empty()) {
      raise(ErrorCode::UnparseableOutput, "incomplete structure line `" + line + "`");
    }
    h.entries.push_back(std::move(e));
  }
  if (h.entries.empty()) {
    if (none_marker) {
      raise(ErrorCode::EmptyHierarchy, "code contains no block");
    }
    raise(ErrorCode::UnparseableOutput, "no structure lines found");
  }

  // invariants: unique ids, parents precede children, child depth = parent+1
  std::map<std::string, int> depth_of;
  for (const auto& e : h.entries) {
    if (depth_of.count(e.id)) {
      raise(ErrorCode::UnparseableOutput, "duplicate block id `" + e.id + "`");
    }
    if (e.parent.empty()) {
      if (e.depth != 1) {
        raise(ErrorCode::UnparseableOutput,
              "top-level block `" + e.id + "` must have depth 1");
      }
    } else {
      auto it = depth_of.find(e.parent);
      if (it == depth_of.end()) {
        raise(ErrorCode::UnparseableOutput,
              "parent `" + e.parent + "` does not precede `" + e.id + "`");
      }
      if (e.depth != it->second + 1) {
        raise(ErrorCode::UnparseableOutput,
              "depth of `" + e.id + "` is not parent depth + 1");
      }
    }
    depth_of[e.id] = e.depth;
  }
  return h;
}

std::string emit_extract_text(
    const std::vector<std::pair<std::string, std::string>>& blocks) {
  std::ostringstream out;
  for (const auto& [id, text] : blocks) {
    out << "begin " << id << "\n" << text << "\nend " << id << "\n";
  }
  return out.str();
}

std::vector<std::pair<std::string, std::string>> parse_extract_text(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = trim(text.substr(pos, eol == std::string::npos
                                                 ? std::string::npos
                                                 : eol - pos));
    std::size_t next = eol == std::string::npos ? text.size() : eol + 1;
    if (line.rfind("begin ", 0) == 0) {
      std::string id = trim(line.substr(6));
      std::string end_marker = "end " + id;
      // scan line by line for the end marker; the body is taken verbatim
      std::size_t body_begin = next;
      std::size_t scan = next;
      std::size_t body_end = std::string::npos;
      while (scan <= text.size()) {
        std::size_t scan_eol = text.find('\n', scan);
        std::size_t line_end = scan_eol == std::string::npos ? text.size() : scan_eol;
        if (trim(text.substr(scan, line_end - scan)) == end_marker) {
          body_end = (scan == 0) ? 0 : scan - 1;  // drop the newline before `end`
          next = (scan_eol == std::string::npos) ? text.size() : scan_eol + 1;
          break;
        }
        if (scan_eol == std::string::npos) break;
        scan = scan_eol + 1;
      }
      if (body_end == std::string::npos) {
        raise(ErrorCode::UnparseableOutput, "missing `end " + id + "` marker");
      }
      std::string body = body_begin <= body_end
                             ? text.substr(body_begin, body_end - body_begin)
                             : std::string();
      out.emplace_back(id, body);
    }
    pos = next;
  }
  if (out.empty()) {
    raise(ErrorCode::UnparseableOutput, "no `begin <id>` sections found");
  }
  return out;
}

std::string render_extract_payload(const std::string& code,
                                   const std::string& structure_lines) {
  return "code:\n" + code + "\nstructure:\n" + structure_lines;
}

std::pair<std::string, std::string> split_extract_payload(
    const std::string& payload) {
  const std::string marker = "\nstructure:\n";
  std::size_t pos = payload.rfind(marker);
  if (pos == std::string::npos || payload.rfind("code:\n", 0) != 0) {
    raise(ErrorCode::UnparseableOutput, "malformed extract payload");
  }
  std::string code = payload.substr(6, pos - 6);
  std::string structure = payload.substr(pos + marker.size());
  return {code, structure};
}

std::string render_fusion_payload(
    const std::vector<std::pair<std::string, std::string>>& id_and_cfgtext) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [id, cfgtext] : id_and_cfgtext) {
    if (!first) out << "\n";
    first = false;
    out << "graph " << id << "\n" << cfgtext;
  }
  return out.str();
}

std::vector<std::pair<std::string, std::string>> parse_fusion_payload(
    const std::string& payload) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string current_id;
  std::string current;
  for (const std::string& raw : split_lines(payload + "\n")) {
    std::string line = trim(raw);
    if (line.rfind("graph ", 0) == 0) {
      if (!current_id.empty()) out.emplace_back(current_id, current);
      current_id = trim(line.substr(6));
      current.clear();
    } else if (!current_id.empty()) {
      current += raw;
      current += "\n";
    }
  }
  if (!current_id.empty()) out.emplace_back(current_id, current);
  if (out.empty()) {
    raise(ErrorCode::UnparseableOutput, "no `graph <id>` sections found");
  }
  return out;
}

}  // namespace cfgchain
