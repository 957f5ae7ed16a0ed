#pragma once

#include <map>
#include <string>
#include <vector>

#include "cfgchain/backend.hpp"
#include "cfgchain/chain.hpp"
#include "cfgchain/kb.hpp"

namespace cfgchain {

struct SampleResult {
  std::string id;
  double node_cov = 0.0;
  double edge_cov = 0.0;
  bool failed = false;
  std::string error;  // set when failed
  std::string group;  // injection-kind breakdown for mutated corpora
};

struct EvalReport {
  std::string dataset;
  std::string variant;
  std::string backend;
  std::vector<SampleResult> samples;  // sorted by sample id
  double mean_node = 0.0;
  double mean_edge = 0.0;
  int failed_count = 0;
  std::map<std::string, std::pair<double, double>> group_means;
};

/// Evaluates every `<id>.java` of `corpus_dir` against `gold_dir/<id>.cfg`.
/// The gold graph always comes from the pre-injection code, so coverage
/// measures recovery of the intended behavior. Pipeline failures score 0 and
/// are counted separately. Sample ids of the form `<base>__<group>` feed the
/// per-group breakdown.
EvalReport run_eval(const std::string& corpus_dir, const std::string& gold_dir,
                    Variant variant, Backend& backend, const KnowledgeBase& kb,
                    const Limits& limits);

std::string eval_report_json(const EvalReport& report);
std::string eval_report_table(const EvalReport& report);

}  // namespace cfgchain
