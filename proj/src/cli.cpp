#include "cfgchain/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "cfgchain/backend.hpp"
#include "cfgchain/chain.hpp"
#include "cfgchain/error.hpp"
#include "cfgchain/eval.hpp"
#include "cfgchain/inject.hpp"
#include "cfgchain/kb.hpp"

namespace cfgchain {

namespace {

using nlohmann::json;

struct CommonOptions {
  std::string backend = "heuristic";
  std::string variant = "chain";
  std::string kb_dir = "kb";
  std::string cassette;
  std::string endpoint;
  std::string endpoint_path = "/v1/completions";
  std::string model = "gpt-3.5-turbo-instruct";
  std::string wire = "prompt";
  int timeout_seconds = 30;
  Limits limits;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--backend", opt.backend, "heuristic|remote|record|replay")
      ->check(CLI::IsMember({"heuristic", "remote", "record", "replay"}));
  cmd->add_option("--variant", opt.variant, "chain|chain-noapr|cot|direct")
      ->check(CLI::IsMember({"chain", "chain-noapr", "cot", "direct"}));
  cmd->add_option("--kb", opt.kb_dir, "knowledge base directory");
  cmd->add_option("--cassette", opt.cassette, "cassette file (replay/record)");
  cmd->add_option("--endpoint", opt.endpoint, "remote endpoint, http://host:port");
  cmd->add_option("--endpoint-path", opt.endpoint_path, "remote POST path");
  cmd->add_option("--model", opt.model, "remote model name");
  cmd->add_option("--wire", opt.wire, "remote body style: prompt|messages")
      ->check(CLI::IsMember({"prompt", "messages"}));
  cmd->add_option("--timeout", opt.timeout_seconds, "remote timeout, seconds");
  cmd->add_option("--max-iterations", opt.limits.max_iterations,
                  "peel loop bound");
  cmd->add_option("--retries", opt.limits.retries,
                  "re-asks per unit on unparseable output");
  cmd->add_option("--jobs", opt.limits.jobs, "parallel block-CFG calls");
}

// Replay and heuristic runs must work with no network and no credential.
std::unique_ptr<Backend> make_backend(const CommonOptions& opt) {
  if (opt.backend == "heuristic") {
    return std::make_unique<HeuristicBackend>();
  }
  if (opt.backend == "replay") {
    if (opt.cassette.empty()) {
      raise(ErrorCode::ConfigError, "--backend replay requires --cassette");
    }
    return std::make_unique<ReplayBackend>(Cassette::load_file(opt.cassette));
  }
  RemoteConfig remote;
  remote.endpoint = opt.endpoint;
  remote.path = opt.endpoint_path;
  remote.wire = opt.wire;
  remote.timeout_seconds = opt.timeout_seconds;
  const char* key = std::getenv("CFGCHAIN_API_KEY");
  remote.api_key = key ? key : "";
  if (remote.endpoint.empty()) {
    raise(ErrorCode::ConfigError,
          "--backend " + opt.backend + " requires --endpoint");
  }
  if (remote.api_key.empty()) {
    raise(ErrorCode::ConfigError,
          "--backend " + opt.backend + " requires CFGCHAIN_API_KEY to be set");
  }
  if (opt.backend == "record") {
    if (opt.cassette.empty()) {
      raise(ErrorCode::ConfigError, "--backend record requires --cassette");
    }
    return std::make_unique<RecordBackend>(remote, opt.cassette);
  }
  return std::make_unique<HttpBackend>(remote);
}

json chain_result_json(const ChainResult& result) {
  json steps = json::array();
  for (const auto& step : result.peel_trace) {
    json blocks = json::array();
    for (const auto& b : step.blocks) {
      blocks.push_back({{"id", b.id},
                        {"kind", block_kind_name(b.kind)},
                        {"text", b.text},
                        {"span", {b.span.begin, b.span.end}}});
    }
    steps.push_back({{"structure", emit_structure_lines(step.hierarchy)},
                     {"blocks", blocks},
                     {"masked", step.masked.text}});
  }
  json block_cfgs;
  for (const auto& [id, g] : result.block_cfgs) {
    block_cfgs[id] = emit_cfgtext(g);
  }
  json transcript = json::array();
  for (const auto& x : result.transcript) {
    transcript.push_back({{"unit", x.unit_id},
                          {"attempt", x.attempt},
                          {"prompt", x.prompt},
                          {"completion", x.completion}});
  }
  return {{"variant", variant_name(result.variant)},
          {"final_cfg", emit_cfgtext(result.final_cfg)},
          {"dot", emit_dot(result.final_cfg)},
          {"peel_trace", steps},
          {"block_cfgs", block_cfgs},
          {"transcript", transcript},
          {"warnings", result.warnings}};
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"error-tolerant control-flow-graph generation for partial code"};
  app.set_config("--config", "", "TOML config file; flags win over file keys");
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "build the CFG of one file");
  std::string gen_file;
  std::string gen_out = "dot";
  CommonOptions gen_opt;
  generate->add_option("file", gen_file, "source file")->required();
  generate->add_option("--out", gen_out, "dot|cfgtext|json")
      ->check(CLI::IsMember({"dot", "cfgtext", "json"}));
  add_common(generate, gen_opt);

  // inject
  auto* inject = app.add_subcommand("inject", "inject one fault into a file");
  std::string inj_file, inj_kind, inj_record_path;
  unsigned inj_seed = 1;
  inject->add_option("file", inj_file, "source file")->required();
  inject
      ->add_option("--kind", inj_kind,
                   "missing_brace|missing_semicolon|missing_operator|"
                   "empty_statement|scope_error")
      ->required();
  inject->add_option("--seed", inj_seed, "site selection seed")->required();
  inject->add_option("--record", inj_record_path,
                     "write the mutation record (JSON) here");

  // eval
  auto* eval = app.add_subcommand("eval", "score a corpus against gold CFGs");
  std::string eval_corpus, eval_gold;
  std::string eval_format = "json";
  CommonOptions eval_opt;
  eval->add_option("corpus", eval_corpus, "corpus directory")->required();
  eval->add_option("--gold", eval_gold, "gold CFG directory")->required();
  eval->add_option("--format", eval_format, "json|table")
      ->check(CLI::IsMember({"json", "table"}));
  add_common(eval, eval_opt);

  // render
  auto* render = app.add_subcommand("render", "render a CFG file to DOT");
  std::string render_file, render_out;
  render->add_option("file", render_file, "cfg text file")->required();
  render->add_option("-o,--output", render_out, "output path (default stdout)");

  // kb
  auto* kb_cmd = app.add_subcommand("kb", "knowledge base utilities");
  auto* kb_validate = kb_cmd->add_subcommand("validate", "validate a KB directory");
  std::string kb_dir;
  kb_validate->add_option("dir", kb_dir, "knowledge base directory")->required();
  kb_cmd->require_subcommand(1);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*generate) {
      std::string code = load_source_file(gen_file);
      KnowledgeBase kb = load_kb(gen_opt.kb_dir);
      auto backend = make_backend(gen_opt);
      ChainResult result =
          run_pipeline(tokenize(code), *backend, kb,
                       variant_from_name(gen_opt.variant), gen_opt.limits);
      if (gen_out == "dot") {
        out << emit_dot(result.final_cfg);
      } else if (gen_out == "cfgtext") {
        out << emit_cfgtext(result.final_cfg);
      } else {
        out << chain_result_json(result).dump(2) << "\n";
      }
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      return 0;
    }
    if (*inject) {
      auto kind = injection_kind_from_name(inj_kind);
      if (!kind) {
        err << "unknown injection kind `" << inj_kind << "`\n";
        return 2;
      }
      std::string code = load_source_file(inj_file);
      Mutation m = inject_error(code, *kind, inj_seed);
      out << m.code;
      if (!inj_record_path.empty()) {
        std::ofstream rec(inj_record_path);
        if (!rec) raise(ErrorCode::IoError, "cannot write " + inj_record_path);
        rec << mutation_record_json(m.record) << "\n";
      }
      return 0;
    }
    if (*eval) {
      KnowledgeBase kb = load_kb(eval_opt.kb_dir);
      auto backend = make_backend(eval_opt);
      EvalReport report =
          run_eval(eval_corpus, eval_gold, variant_from_name(eval_opt.variant),
                   *backend, kb, eval_opt.limits);
      out << (eval_format == "table" ? eval_report_table(report)
                                     : eval_report_json(report) + "\n");
      return 0;
    }
    if (*render) {
      Cfg g = parse_cfgtext(load_source_file(render_file));
      std::string dot = emit_dot(g);
      if (render_out.empty()) {
        out << dot;
      } else {
        std::ofstream f(render_out);
        if (!f) raise(ErrorCode::IoError, "cannot write " + render_out);
        f << dot;
      }
      return 0;
    }
    if (*kb_validate) {
      KnowledgeBase kb = load_kb(kb_dir);
      out << "ok: " << kb.total_records() << " records\n";
      return 0;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) {
      err << e.what() << "\n";
      return 2;
    }
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand given\n";
  return 2;
}

}  // namespace cfgchain
