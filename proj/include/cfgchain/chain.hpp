#pragma once

#include <map>
#include <string>
#include <vector>

#include "cfgchain/backend.hpp"
#include "cfgchain/cfg.hpp"
#include "cfgchain/kb.hpp"
#include "cfgchain/units.hpp"

namespace cfgchain {

/// Code with one or more block bodies replaced by their block-id strings.
/// Each id occurs exactly once in `text`; substitution spans index the
/// pre-mask text and never overlap.
struct Substitution {
  std::string id;
  std::string original;
  ByteSpan span;  // in the pre-mask text
};

struct MaskedCode {
  std::string text;
  std::vector<Substitution> substitutions;
};

/// Replaces `block`'s span with its id. SpanMismatch when the block text no
/// longer matches the code at that span.
MaskedCode mask_block(const std::string& code, const NestedBlock& block);

/// Masks several non-overlapping blocks of the same code in one pass.
MaskedCode mask_blocks(const std::string& code,
                       const std::vector<NestedBlock>& blocks);

/// Byte-exact inverse of masking: every block-id occurrence is replaced by
/// its original text. PlaceholderMissing when an id is absent.
std::string splice(const MaskedCode& masked);

enum class Variant { Chain, ChainNoApr, Cot, Direct };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);  // ConfigError if unknown

struct Limits {
  int max_iterations = 100;
  int retries = 2;
  int jobs = 0;  // 0: pick from hardware concurrency
};

struct PeelStep {
  StructureHierarchy hierarchy;
  std::vector<NestedBlock> blocks;
  MaskedCode masked;
};

struct PeelState {
  std::map<std::string, int> counters;  // block numbering across the run
};

/// One peel iteration: structure extraction, canonical renumbering, block
/// extraction, masking. The masked code is strictly shorter in tokens than
/// the input. Raises NoBlockFound when the structure unit reports no block;
/// the caller then treats the whole code as one atomic block.
PeelStep peel_step(const std::string& code, Backend& backend,
                   const KnowledgeBase& kb, PeelState& state,
                   const UnitOptions& opts,
                   std::vector<Exchange>* transcript = nullptr);

struct ChainResult {
  Cfg final_cfg;
  std::vector<PeelStep> peel_trace;
  std::map<std::string, Cfg> block_cfgs;
  Variant variant = Variant::Chain;
  std::vector<Exchange> transcript;
  std::vector<std::string> warnings;
};

/// Runs the whole pipeline for one source unit:
///   chain       peel until the outermost block, generate per-block CFGs
///               (independent blocks concurrently), fuse innermost-outward
///               and cross-check the fusion unit against the deterministic
///               oracle (the oracle wins on mismatch, with a warning);
///   chain-noapr identical, but example retrieval ignores the block kind;
///   cot         one narrated four-step completion;
///   direct      one plain completion.
/// The peel loop is bounded by limits.max_iterations; exceeding it raises
/// IterationLimitExceeded rather than hanging.
ChainResult run_pipeline(const SourceUnit& unit, Backend& backend,
                         const KnowledgeBase& kb, Variant variant,
                         const Limits& limits);

}  // namespace cfgchain
