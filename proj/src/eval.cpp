#include "cfgchain/eval.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <future>
#include <iomanip>
#include <sstream>

#include "cfgchain/coverage.hpp"
#include "cfgchain/error.hpp"

namespace cfgchain {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string group_of(const std::string& id) {
  std::size_t pos = id.find("__");
  return pos == std::string::npos ? std::string() : id.substr(pos + 2);
}

}  // namespace

EvalReport run_eval(const std::string& corpus_dir, const std::string& gold_dir,
                    Variant variant, Backend& backend, const KnowledgeBase& kb,
                    const Limits& limits) {
  if (!fs::is_directory(corpus_dir)) {
    raise(ErrorCode::IoError, "corpus directory " + corpus_dir + " not found");
  }
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".java") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());

  EvalReport report;
  report.dataset = fs::path(corpus_dir).filename().string();
  report.variant = variant_name(variant);
  report.backend = backend.mode();

  // Resolve gold paths up front so a missing gold fails fast.
  std::vector<std::string> gold_paths;
  for (const auto& id : ids) {
    // mutated samples (`<base>__<group>`) are scored against the gold of
    // their pre-injection base
    std::string base = id.substr(0, id.find("__"));
    fs::path gold = fs::path(gold_dir) / (base + ".cfg");
    if (!fs::exists(gold)) {
      raise(ErrorCode::GoldMissing, "sample `" + id + "` has no gold CFG at " +
                                        gold.string());
    }
    gold_paths.push_back(gold.string());
  }

  auto evaluate_one = [&](std::size_t i) {
    SampleResult r;
    r.id = ids[i];
    r.group = group_of(ids[i]);
    try {
      std::string code = load_source_file(
          (fs::path(corpus_dir) / (ids[i] + ".java")).string());
      Cfg gold = parse_cfgtext(load_source_file(gold_paths[i]));
      ChainResult chain = run_pipeline(tokenize(code), backend, kb, variant, limits);
      CoverageReport cov = coverage(chain.final_cfg, gold);
      r.node_cov = cov.node_coverage;
      r.edge_cov = cov.edge_coverage;
    } catch (const Error& e) {
      r.failed = true;
      r.error = e.what();
      r.node_cov = 0.0;
      r.edge_cov = 0.0;
    }
    return r;
  };

  const unsigned jobs =
      limits.jobs > 0
          ? static_cast<unsigned>(limits.jobs)
          : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  report.samples.resize(ids.size());
  for (std::size_t base = 0; base < ids.size(); base += jobs) {
    const std::size_t chunk = std::min<std::size_t>(jobs, ids.size() - base);
    std::vector<std::future<SampleResult>> futures;
    for (std::size_t k = 0; k < chunk; ++k) {
      futures.push_back(std::async(std::launch::async, evaluate_one, base + k));
    }
    for (std::size_t k = 0; k < chunk; ++k) {
      report.samples[base + k] = futures[k].get();
    }
  }

  double node_sum = 0.0, edge_sum = 0.0;
  std::map<std::string, std::tuple<double, double, int>> groups;
  for (const auto& s : report.samples) {
    node_sum += s.node_cov;
    edge_sum += s.edge_cov;
    if (s.failed) ++report.failed_count;
    if (!s.group.empty()) {
      auto& [gn, ge, gc] = groups[s.group];
      gn += s.node_cov;
      ge += s.edge_cov;
      ++gc;
    }
  }
  if (!report.samples.empty()) {
    report.mean_node = node_sum / static_cast<double>(report.samples.size());
    report.mean_edge = edge_sum / static_cast<double>(report.samples.size());
  }
  for (const auto& [name, acc] : groups) {
    const auto& [gn, ge, gc] = acc;
    report.group_means[name] = {gn / gc, ge / gc};
  }
  return report;
}

std::string eval_report_json(const EvalReport& report) {
  json samples = json::array();
  for (const auto& s : report.samples) {
    json js = {{"id", s.id},
               {"node_cov", s.node_cov},
               {"edge_cov", s.edge_cov},
               {"failed", s.failed}};
    if (s.failed) js["error"] = s.error;
    if (!s.group.empty()) js["group"] = s.group;
    samples.push_back(js);
  }
  json j = {{"dataset", report.dataset},
            {"variant", report.variant},
            {"backend", report.backend},
            {"samples", samples},
            {"means", {{"node", report.mean_node}, {"edge", report.mean_edge}}},
            {"failed_count", report.failed_count}};
  if (!report.group_means.empty()) {
    json groups;
    for (const auto& [name, means] : report.group_means) {
      groups[name] = {{"node", means.first}, {"edge", means.second}};
    }
    j["group_means"] = groups;
  }
  return j.dump(2);
}

std::string eval_report_table(const EvalReport& report) {
  std::ostringstream out;
  out << "dataset: " << report.dataset << "  variant: " << report.variant
      << "  backend: " << report.backend << "\n";
  out << std::left << std::setw(40) << "sample" << std::right << std::setw(10)
      << "node" << std::setw(10) << "edge" << "  status\n";
  for (const auto& s : report.samples) {
    out << std::left << std::setw(40) << s.id << std::right << std::fixed
        << std::setprecision(2) << std::setw(10) << s.node_cov << std::setw(10)
        << s.edge_cov << "  " << (s.failed ? "FAILED" : "ok") << "\n";
  }
  out << std::left << std::setw(40) << "mean" << std::right << std::fixed
      << std::setprecision(2) << std::setw(10) << report.mean_node
      << std::setw(10) << report.mean_edge << "  failed: " << report.failed_count
      << "\n";
  for (const auto& [name, means] : report.group_means) {
    out << std::left << std::setw(40) << ("  [" + name + "]") << std::right
        << std::fixed << std::setprecision(2) << std::setw(10) << means.first
        << std::setw(10) << means.second << "\n";
  }
  return out.str();
}

}  // namespace cfgchain
