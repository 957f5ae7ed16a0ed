#include "cfgchain/chain.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "cfgchain/error.hpp"

namespace cfgchain {

namespace {

std::string trim_copy(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::size_t token_count(const std::string& text) {
  return tokenize(text).tokens.size();
}

/// Reassigns canonical block ids in source order per kind, continuing the
/// per-run counters, and rewrites parent references to match. Keeps unit
/// outputs usable regardless of how the backend numbered them.
StructureHierarchy renumber(const StructureHierarchy& h, PeelState& state) {
  StructureHierarchy out;
  std::map<std::string, std::string> remap;
  for (const auto& e : h.entries) {
    HierarchyEntry ne = e;
    const std::string kind = block_kind_name(e.kind);
    ne.id = kind + "_block_" + std::to_string(++state.counters[kind]);
    remap[e.id] = ne.id;
    if (!e.parent.empty()) {
      auto it = remap.find(e.parent);
      if (it == remap.end()) {
        raise(ErrorCode::UnparseableOutput,
              "hierarchy parent `" + e.parent + "` precedes no entry");
      }
      ne.parent = it->second;
    }
    out.entries.push_back(std::move(ne));
  }
  return out;
}

void append(std::vector<Exchange>& into, const std::vector<Exchange>& from) {
  into.insert(into.end(), from.begin(), from.end());
}

unsigned effective_jobs(int jobs, std::size_t work_items) {
  unsigned n = jobs > 0 ? static_cast<unsigned>(jobs)
                        : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  return std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(work_items)));
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Chain: return "chain";
    case Variant::ChainNoApr: return "chain-noapr";
    case Variant::Cot: return "cot";
    case Variant::Direct: return "direct";
  }
  return "chain";
}

Variant variant_from_name(const std::string& name) {
  if (name == "chain") return Variant::Chain;
  if (name == "chain-noapr" || name == "chain_noapr") return Variant::ChainNoApr;
  if (name == "cot") return Variant::Cot;
  if (name == "direct") return Variant::Direct;
  raise(ErrorCode::ConfigError, "unknown variant `" + name + "`");
}

MaskedCode mask_blocks(const std::string& code,
                       const std::vector<NestedBlock>& blocks) {
  std::vector<NestedBlock> ordered = blocks;
  std::sort(ordered.begin(), ordered.end(),
            [](const NestedBlock& a, const NestedBlock& b) {
              return a.span.begin < b.span.begin;
            });
  std::size_t prev_end = 0;
  std::string out;
  MaskedCode masked;
  for (const auto& b : ordered) {
    if (b.span.begin < prev_end || b.span.end > code.size()) {
      raise(ErrorCode::SpanMismatch, "block `" + b.id + "` span overlaps or overflows");
    }
    if (code.compare(b.span.begin, b.span.size(), b.text) != 0) {
      raise(ErrorCode::SpanMismatch,
            "block `" + b.id + "` text no longer matches the code at its span");
    }
    out.append(code, prev_end, b.span.begin - prev_end);
    out.append(b.id);
    prev_end = b.span.end;
    masked.substitutions.push_back({b.id, b.text, b.span});
  }
  out.append(code, prev_end, code.size() - prev_end);
  masked.text = std::move(out);
  for (const auto& sub : masked.substitutions) {
    if (count_occurrences(masked.text, sub.id) != 1) {
      raise(ErrorCode::SpanMismatch,
            "block id `" + sub.id + "` does not occur exactly once after masking");
    }
  }
  return masked;
}

MaskedCode mask_block(const std::string& code, const NestedBlock& block) {
  return mask_blocks(code, {block});
}

std::string splice(const MaskedCode& masked) {
  std::string out = masked.text;
  for (auto it = masked.substitutions.rbegin(); it != masked.substitutions.rend();
       ++it) {
    std::size_t pos = out.find(it->id);
    if (pos == std::string::npos) {
      raise(ErrorCode::PlaceholderMissing, it->id);
    }
    out.replace(pos, it->id.size(), it->original);
  }
  return out;
}

PeelStep peel_step(const std::string& code, Backend& backend,
                   const KnowledgeBase& kb, PeelState& state,
                   const UnitOptions& opts, std::vector<Exchange>* transcript) {
  UnitResult<StructureHierarchy> structure;
  try {
    structure = unit_structure(code, backend, kb, opts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyHierarchy) {
      raise(ErrorCode::NoBlockFound, "structure unit reports no block");
    }
    throw;
  }
  if (transcript) append(*transcript, structure.exchanges);

  PeelState renumber_state = state;
  StructureHierarchy canonical = renumber(structure.value, renumber_state);

  auto extraction = unit_extract_block(code, canonical, backend, kb, opts);
  if (transcript) append(*transcript, extraction.exchanges);

  PeelStep step;
  step.hierarchy = canonical;
  step.blocks = extraction.value;
  step.masked = mask_blocks(code, step.blocks);
  if (token_count(step.masked.text) >= token_count(code)) {
    raise(ErrorCode::UnparseableOutput,
          "masking did not shrink the code; extracted blocks look wrong");
  }
  state = renumber_state;
  return step;
}

ChainResult run_pipeline(const SourceUnit& unit, Backend& backend,
                         const KnowledgeBase& kb, Variant variant,
                         const Limits& limits) {
  ChainResult result;
  result.variant = variant;

  UnitOptions opts;
  opts.retries = limits.retries;
  opts.generic_retrieval = (variant == Variant::ChainNoApr);
  opts.params.model = backend.mode() == "heuristic" ? "heuristic" : opts.params.model;

  if (variant == Variant::Cot || variant == Variant::Direct) {
    auto single = unit_single_pass(variant == Variant::Cot ? "cot" : "direct",
                                   unit.text, backend, kb, opts);
    append(result.transcript, single.exchanges);
    result.final_cfg = std::move(single.value);
    return result;
  }

  // Peel loop: extract and mask the currently-innermost blocks until the
  // whole code has been folded into a single block id.
  PeelState state;
  std::string working = unit.text;
  std::string outermost_id;
  for (int iteration = 1;; ++iteration) {
    if (iteration > limits.max_iterations) {
      raise(ErrorCode::IterationLimitExceeded,
            "peel loop exceeded " + std::to_string(limits.max_iterations) +
                " iterations");
    }
    PeelStep step;
    try {
      step = peel_step(working, backend, kb, state, opts, &result.transcript);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoBlockFound) throw;
      // No structure left: the remaining code is one atomic block.
      const std::string text = working;
      if (trim_copy(text).empty()) {
        raise(ErrorCode::NoBlockFound, "input has no code to analyze");
      }
      NestedBlock atomic;
      atomic.kind = BlockKind::Method;
      atomic.id = "method_block_" +
                  std::to_string(++state.counters[block_kind_name(atomic.kind)]);
      atomic.text = text;
      atomic.span = {0, text.size()};
      PeelStep fallback;
      fallback.blocks = {atomic};
      fallback.masked = mask_blocks(working, fallback.blocks);
      result.peel_trace.push_back(std::move(fallback));
      outermost_id = atomic.id;
      break;
    }
    working = step.masked.text;
    result.peel_trace.push_back(std::move(step));
    const std::string remaining = trim_copy(working);
    if (is_placeholder_label(remaining)) {
      outermost_id = remaining;
      break;
    }
  }

  // Per-block CFG generation; blocks are independent of each other, so the
  // calls may run concurrently.
  std::vector<const NestedBlock*> blocks;
  for (const auto& step : result.peel_trace) {
    for (const auto& b : step.blocks) blocks.push_back(&b);
  }
  std::vector<UnitResult<Cfg>> generated(blocks.size());
  const unsigned jobs = effective_jobs(limits.jobs, blocks.size());
  for (std::size_t base = 0; base < blocks.size(); base += jobs) {
    const std::size_t chunk = std::min<std::size_t>(jobs, blocks.size() - base);
    std::vector<std::future<UnitResult<Cfg>>> futures;
    for (std::size_t k = 0; k < chunk; ++k) {
      const NestedBlock* block = blocks[base + k];
      futures.push_back(std::async(std::launch::async, [&, block] {
        return unit_block_cfg(*block, backend, kb, opts);
      }));
    }
    for (std::size_t k = 0; k < chunk; ++k) {
      generated[base + k] = futures[k].get();
    }
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    append(result.transcript, generated[i].exchanges);
    result.block_cfgs[blocks[i]->id] = std::move(generated[i].value);
  }

  // Fusion, innermost-outward, with the deterministic oracle as arbiter.
  if (blocks.size() == 1) {
    result.final_cfg = result.block_cfgs.begin()->second;
  } else {
    std::vector<std::pair<std::string, Cfg>> ordered;
    for (const NestedBlock* b : blocks) {
      ordered.emplace_back(b->id, result.block_cfgs.at(b->id));
    }
    Cfg oracle = fuse_all(result.block_cfgs, outermost_id);
    auto fused = unit_fusion(ordered, backend, kb, opts);
    append(result.transcript, fused.exchanges);
    if (structurally_equal(fused.value, oracle)) {
      result.final_cfg = std::move(fused.value);
    } else {
      result.warnings.push_back(
          "fusion unit output disagrees with the deterministic oracle; "
          "using the oracle result");
      result.final_cfg = std::move(oracle);
    }
  }

  for (const auto& n : result.final_cfg.nodes) {
    if (n.placeholder) {
      raise(ErrorCode::FusionError,
            "final graph still holds placeholder " + n.label);
    }
  }
  for (const auto& v : validate_cfg(result.final_cfg)) {
    result.warnings.push_back(v.message);
  }
  return result;
}

}  // namespace cfgchain
