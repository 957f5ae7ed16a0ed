#pragma once

#include <string>
#include <vector>

#include "cfgchain/backend.hpp"
#include "cfgchain/cfg.hpp"
#include "cfgchain/kb.hpp"
#include "cfgchain/prompts.hpp"

namespace cfgchain {

/// One prompt/completion round trip, as recorded in the chain transcript.
struct Exchange {
  std::string unit_id;
  std::string prompt;
  std::string completion;
  int attempt = 1;
};

struct UnitOptions {
  int retries = 2;                // re-ask on unparseable output
  bool generic_retrieval = false; // ablation: ignore the block kind
  BackendParams params;
};

template <typename T>
struct UnitResult {
  T value;
  std::vector<Exchange> exchanges;
};

/// Unit 1: structure hierarchy extraction. Tolerant of uncompilable input;
/// raises EmptyHierarchy when the code has no block at all (distinct from
/// UnparseableOutput) and BackendError when the backend itself fails.
UnitResult<StructureHierarchy> unit_structure(const std::string& code,
                                              Backend& backend,
                                              const KnowledgeBase& kb,
                                              const UnitOptions& opts);

/// Unit 2: nested code block extraction. Returns the innermost blocks of the
/// hierarchy in source order, each with the byte span where its text occurs.
UnitResult<std::vector<NestedBlock>> unit_extract_block(
    const std::string& code, const StructureHierarchy& hierarchy,
    Backend& backend, const KnowledgeBase& kb, const UnitOptions& opts);

/// Unit 3: per-block CFG generation. Placeholder ids inside the block text
/// become placeholder nodes. One backend call per block; examples come from
/// the block's kind bucket (or `generic` under the no-retrieval ablation).
UnitResult<Cfg> unit_block_cfg(const NestedBlock& block, Backend& backend,
                               const KnowledgeBase& kb,
                               const UnitOptions& opts);

/// Unit 4: graph fusion across all block CFGs, innermost first. The caller
/// cross-checks the result against the deterministic fuse oracle.
UnitResult<Cfg> unit_fusion(
    const std::vector<std::pair<std::string, Cfg>>& cfgs, Backend& backend,
    const KnowledgeBase& kb, const UnitOptions& opts);

/// Single-call variants: `cot` (all four steps in one narrated pass) and
/// `direct` (plain "generate the CFG"). The completion's last cfg section is
/// taken as the answer.
UnitResult<Cfg> unit_single_pass(const std::string& variant_unit,
                                 const std::string& code, Backend& backend,
                                 const KnowledgeBase& kb,
                                 const UnitOptions& opts);

}  // namespace cfgchain
