#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cfgchain/backend.hpp"
#include "cfgchain/cfg.hpp"
#include "cfgchain/chain.hpp"
#include "cfgchain/coverage.hpp"
#include "cfgchain/error.hpp"
#include "cfgchain/inject.hpp"
#include "cfgchain/kb.hpp"
#include "cfgchain/source.hpp"

namespace py = pybind11;
using namespace cfgchain;

namespace {

ChainResult run_from_python(const std::string& code, const std::string& variant,
                            const std::string& backend_mode,
                            const std::string& kb_dir,
                            const std::string& cassette, int jobs,
                            int max_iterations) {
  KnowledgeBase kb = load_kb(kb_dir);
  std::unique_ptr<Backend> backend;
  if (backend_mode == "heuristic") {
    backend = std::make_unique<HeuristicBackend>();
  } else if (backend_mode == "replay") {
    if (cassette.empty()) {
      throw py::value_error("replay backend requires a cassette path");
    }
    backend = std::make_unique<ReplayBackend>(Cassette::load_file(cassette));
  } else {
    throw py::value_error("python bindings support heuristic and replay backends");
  }
  Limits limits;
  limits.jobs = jobs;
  limits.max_iterations = max_iterations;
  return run_pipeline(tokenize(code), *backend, kb, variant_from_name(variant),
                      limits);
}

py::dict coverage_dict(const CoverageReport& report) {
  py::dict d;
  d["node_coverage"] = report.node_coverage;
  d["edge_coverage"] = report.edge_coverage;
  py::list wrong_nodes;
  for (const auto& id : report.wrong_nodes) wrong_nodes.append(id);
  d["wrong_nodes"] = wrong_nodes;
  py::list wrong_edges;
  for (const auto& e : report.wrong_edges) {
    wrong_edges.append(py::make_tuple(e.from, e.to, e.label));
  }
  d["wrong_edges"] = wrong_edges;
  py::list spurious_nodes;
  for (const auto& id : report.spurious_nodes) spurious_nodes.append(id);
  d["spurious_nodes"] = spurious_nodes;
  return d;
}

py::dict record_dict(const MutationRecord& record) {
  py::dict d;
  d["kind"] = injection_kind_name(record.kind);
  d["seed"] = record.seed;
  d["site_index"] = record.site_index;
  d["site_count"] = record.site_count;
  py::list edits;
  for (const auto& e : record.edits) {
    py::dict ed;
    ed["pos"] = e.pos;
    ed["removed"] = e.removed;
    ed["inserted"] = e.inserted;
    edits.append(ed);
  }
  d["edits"] = edits;
  return d;
}

MutationRecord record_from_dict(const py::dict& d) {
  MutationRecord record;
  auto kind = injection_kind_from_name(d["kind"].cast<std::string>());
  if (!kind) throw py::value_error("unknown injection kind");
  record.kind = *kind;
  record.seed = d["seed"].cast<unsigned>();
  for (const auto& item : d["edits"].cast<py::list>()) {
    py::dict ed = item.cast<py::dict>();
    record.edits.push_back({ed["pos"].cast<std::size_t>(),
                            ed["removed"].cast<std::string>(),
                            ed["inserted"].cast<std::string>()});
  }
  return record;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "error-tolerant control-flow-graph generation for partial code";

  py::register_exception<Error>(m, "CfgChainError");

  py::class_<Token>(m, "Token")
      .def_property_readonly("kind",
                             [](const Token& t) { return token_kind_name(t.kind); })
      .def_readonly("lexeme", &Token::lexeme)
      .def_readonly("line", &Token::line)
      .def_property_readonly("begin", [](const Token& t) { return t.span.begin; })
      .def_property_readonly("end", [](const Token& t) { return t.span.end; })
      .def("__repr__", [](const Token& t) {
        return "Token(" + std::string(token_kind_name(t.kind)) + ", '" +
               t.lexeme + "')";
      });

  py::class_<BlockOpener>(m, "BlockOpener")
      .def_property_readonly(
          "kind", [](const BlockOpener& b) { return block_kind_name(b.kind); })
      .def_readonly("braceless", &BlockOpener::braceless)
      .def_readonly("low_confidence", &BlockOpener::low_confidence)
      .def_property_readonly(
          "header_begin", [](const BlockOpener& b) { return b.header.begin; })
      .def_property_readonly("header_end",
                             [](const BlockOpener& b) { return b.header.end; });

  py::class_<CfgNode>(m, "CfgNode")
      .def_readonly("id", &CfgNode::id)
      .def_readonly("label", &CfgNode::label)
      .def_readonly("placeholder", &CfgNode::placeholder);

  py::class_<CfgEdge>(m, "CfgEdge")
      .def_readonly("from_id", &CfgEdge::from)
      .def_readonly("to_id", &CfgEdge::to)
      .def_readonly("label", &CfgEdge::label);

  py::class_<Cfg>(m, "Cfg")
      .def_readonly("nodes", &Cfg::nodes)
      .def_readonly("entry_id", &Cfg::entry_id)
      .def_readonly("edges", &Cfg::edges)
      .def("__len__", [](const Cfg& g) { return g.nodes.size(); })
      .def("__eq__", [](const Cfg& a, const Cfg& b) { return a == b; });

  m.def("tokenize",
        [](const std::string& text) { return tokenize(text).tokens; },
        py::arg("text"), "Total tolerant tokenization.");
  m.def("normalize_label", &normalize_label, py::arg("label"));
  m.def("find_block_openers",
        [](const std::string& text) { return find_block_openers(tokenize(text)); },
        py::arg("text"));

  m.def("parse_cfgtext", &parse_cfgtext, py::arg("text"));
  m.def("emit_cfgtext", &emit_cfgtext, py::arg("cfg"));
  m.def("emit_dot", &emit_dot, py::arg("cfg"));
  m.def("fuse", &fuse, py::arg("outer"), py::arg("placeholder_id"),
        py::arg("inner"));
  m.def("validate_cfg",
        [](const Cfg& g) {
          std::vector<std::string> out;
          for (const auto& v : validate_cfg(g)) out.push_back(v.message);
          return out;
        },
        py::arg("cfg"));
  m.def("structurally_equal", &structurally_equal, py::arg("a"), py::arg("b"));

  m.def(
      "generate_cfg",
      [](const std::string& code, const std::string& variant,
         const std::string& backend, const std::string& kb_dir,
         const std::string& cassette, int jobs, int max_iterations) {
        return run_from_python(code, variant, backend, kb_dir, cassette, jobs,
                               max_iterations)
            .final_cfg;
      },
      py::arg("code"), py::arg("variant") = "chain",
      py::arg("backend") = "heuristic", py::arg("kb_dir") = "kb",
      py::arg("cassette") = "", py::arg("jobs") = 0,
      py::arg("max_iterations") = 100,
      "Run the pipeline and return the final CFG.");

  m.def(
      "generate_report",
      [](const std::string& code, const std::string& variant,
         const std::string& backend, const std::string& kb_dir,
         const std::string& cassette, int jobs, int max_iterations) {
        ChainResult r = run_from_python(code, variant, backend, kb_dir,
                                        cassette, jobs, max_iterations);
        py::dict d;
        d["cfgtext"] = emit_cfgtext(r.final_cfg);
        d["dot"] = emit_dot(r.final_cfg);
        d["variant"] = variant_name(r.variant);
        d["peel_steps"] = r.peel_trace.size();
        d["block_count"] = r.block_cfgs.size();
        d["transcript_len"] = r.transcript.size();
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("code"), py::arg("variant") = "chain",
      py::arg("backend") = "heuristic", py::arg("kb_dir") = "kb",
      py::arg("cassette") = "", py::arg("jobs") = 0,
      py::arg("max_iterations") = 100,
      "Run the pipeline and return a summary dict.");

  m.def(
      "coverage",
      [](const Cfg& generated, const Cfg& gold) {
        return coverage_dict(coverage(generated, gold));
      },
      py::arg("generated"), py::arg("gold"));

  m.def(
      "inject_error",
      [](const std::string& code, const std::string& kind, unsigned seed) {
        auto k = injection_kind_from_name(kind);
        if (!k) throw py::value_error("unknown injection kind `" + kind + "`");
        Mutation mut = inject_error(code, *k, seed);
        return py::make_tuple(mut.code, record_dict(mut.record));
      },
      py::arg("code"), py::arg("kind"), py::arg("seed"));

  m.def(
      "apply_inverse",
      [](const std::string& mutated, const py::dict& record) {
        return apply_inverse(mutated, record_from_dict(record));
      },
      py::arg("mutated"), py::arg("record"));

  m.def("heuristic_complete", &heuristic_complete, py::arg("unit_id"),
        py::arg("structured_input_json"),
        "The deterministic completion backend, exposed for experimentation.");

  m.def(
      "kb_validate",
      [](const std::string& dir) {
        KnowledgeBase kb = load_kb(dir);
        return kb.total_records();
      },
      py::arg("dir"), "Validate a knowledge base; returns the record count.");
}
