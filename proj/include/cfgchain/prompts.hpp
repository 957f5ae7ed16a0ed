#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cfgchain/source.hpp"

namespace cfgchain {

struct PromptExample {
  std::string input;
  std::string output;
};

/// A rendered few-shot prompt: task description, worked examples, then the
/// payload awaiting completion. The four block-pipeline units carry exactly
/// five examples; `cot` carries one worked pass and `direct` five.
struct Prompt {
  std::string unit_id;
  std::string task_description;
  std::vector<PromptExample> examples;
  std::string input_payload;
  std::string rendered;
};

/// Task descriptions are frozen text; prompts/*.golden pin the full
/// renderings byte-for-byte.
const std::string& unit_task_description(const std::string& unit_id);

std::string render_prompt(const std::string& task_description,
                          const std::vector<PromptExample>& examples,
                          const std::string& payload);

/// Validates the per-unit example-count rule and renders.
Prompt make_prompt(const std::string& unit_id,
                   std::vector<PromptExample> examples, std::string payload);

bool is_unit_id(const std::string& id);

// ---------------------------------------------------------------------------
// Structure hierarchy (unit 1 output)

struct HierarchyEntry {
  std::string id;      // <kind>_block_<k>
  BlockKind kind = BlockKind::If;
  int depth = 1;
  std::string parent;  // empty for top level
  int line_begin = 0;  // optional; 0 when absent
  int line_end = 0;
};

struct StructureHierarchy {
  std::vector<HierarchyEntry> entries;

  bool empty() const { return entries.empty(); }
  std::vector<std::string> leaf_ids() const;
};

/// One `block <id> kind=<kind> depth=<n> parent=<id|none> [lines=<a>-<b>]`
/// line per entry, parents before children.
std::string emit_structure_lines(const StructureHierarchy& h);

/// Lenient line scan: prose is skipped, block lines are strict. A
/// `structure: none` marker (or no block lines next to one) raises
/// EmptyHierarchy; malformed block lines or invariant violations raise
/// UnparseableOutput.
StructureHierarchy parse_structure_text(const std::string& text);

// ---------------------------------------------------------------------------
// Extracted blocks (unit 2 output)

struct NestedBlock {
  std::string id;
  BlockKind kind = BlockKind::If;
  std::string text;
  ByteSpan span;  // where `text` sits in the code it came from
};

std::string emit_extract_text(
    const std::vector<std::pair<std::string, std::string>>& blocks);

/// Verbatim block bodies between `begin <id>` / `end <id>` marker lines.
std::vector<std::pair<std::string, std::string>> parse_extract_text(
    const std::string& text);

// ---------------------------------------------------------------------------
// Payload composition (shared by prompt building and the wire decoder)

std::string render_extract_payload(const std::string& code,
                                   const std::string& structure_lines);
std::pair<std::string, std::string> split_extract_payload(
    const std::string& payload);

std::string render_fusion_payload(
    const std::vector<std::pair<std::string, std::string>>& id_and_cfgtext);
std::vector<std::pair<std::string, std::string>> parse_fusion_payload(
    const std::string& payload);

}  // namespace cfgchain
