#pragma once

#include <map>
#include <string>
#include <vector>

#include "cfgchain/prompts.hpp"

namespace cfgchain {

/// One stored few-shot example. For the block-CFG unit, `kind` names the
/// block kind bucket (one of the six, or `generic` for the retrieval-free
/// ablation); other units leave it empty.
struct ExampleRecord {
  std::string unit;
  std::string kind;
  std::string input;
  std::string output;
  std::vector<std::string> tags;  // error kinds / structures covered
  std::string file;
};

/// The example store: five input/output examples per unit, five per block
/// kind for the block-CFG unit, loaded from `<dir>/<unit>[/<kind>]/<nn>.json`
/// in filename order. Immutable after load; freely shared across threads.
class KnowledgeBase {
 public:
  const std::vector<ExampleRecord>& unit_examples(const std::string& unit) const;
  const std::vector<ExampleRecord>& blockcfg_examples(const std::string& kind) const;
  std::size_t blockcfg_kind_count() const { return by_kind_.size(); }
  std::size_t total_records() const;

  std::map<std::string, std::vector<ExampleRecord>> by_unit_;
  std::map<std::string, std::vector<ExampleRecord>> by_kind_;
};

/// Loads and validates the store. Every record's output must parse under its
/// unit's output grammar (block-CFG outputs additionally validate clean);
/// each of the six kinds needs exactly five records, as do the structure,
/// extract, fusion and direct units (cot ships one worked pass).
KnowledgeBase load_kb(const std::string& dir);

/// Deterministic retrieval: the five records of `kind` for the block-CFG
/// unit, a unit's fixed records otherwise, in file order, capped at k.
std::vector<ExampleRecord> retrieve_examples(const KnowledgeBase& kb,
                                             const std::string& unit_id,
                                             const std::string& kind,
                                             int k = 5);

}  // namespace cfgchain
