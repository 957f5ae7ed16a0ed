// Regenerates the data bundled with the repository: the knowledge base,
// golden prompt files, gold CFGs for the mini corpus, and the replay
// cassettes. Outputs are deterministic, so reruns are diff-clean.

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cfgchain/backend.hpp"
#include "cfgchain/cfg.hpp"
#include "cfgchain/cfg_build.hpp"
#include "cfgchain/chain.hpp"
#include "cfgchain/eval.hpp"
#include "cfgchain/kb.hpp"
#include "cfgchain/prompts.hpp"

namespace fs = std::filesystem;
using namespace cfgchain;
using nlohmann::json;

namespace {

struct KbSeed {
  std::string unit;
  std::string kind;  // blockcfg bucket; empty otherwise
  std::string input; // for fusion: two block texts separated by @@inner@@
  std::vector<std::string> tags;
};

// ---------------------------------------------------------------------------
// Example inputs. Outputs are computed with the deterministic unit semantics
// so they always parse under the unit grammars.

const std::vector<KbSeed>& kb_seeds() {
  static const std::vector<KbSeed> seeds = {
      // ------------------------------------------------------- structure
      {"structure", "", R"(public class Sample {
    public static int total(int n) {
        int sum = 0;
        for (int i = 0; i < n; i++) {
            if (i % 2 == 0) {
                sum = sum + i;
            }
        }
        return sum;
    }
}
)", {"for", "if", "clean"}},
      {"structure", "", R"(public class Sample {
    public static int firstOver(int cap) {
        int value = 1;
        while (value < cap) {
            value = value * 3;
        return value;
    }
}
)", {"while", "missing_brace"}},
      {"structure", "", R"(public class Sample {
    public static int walk(int n) {
        int hops = 0;
        for (int i = 0; i < n i++) {
            hops = hops + 2;
        }
        return hops;
    }
}
)", {"for", "missing_semicolon"}},
      {"structure", "", R"(public class Sample {
    public static int idle(int n) {
        int sum = 0;
        for (int i = 0; i < n; i++); {
            sum = sum + 1;
        }
        return sum;
    }
}
)", {"for", "empty_statement"}},
      {"structure", "", R"(public class Sample {
    public static int grow(int count) {
        int sum = 0;
        while (count < 10)
            count = count + 1;
            sum = sum + count;
        return sum;
    }
}
)", {"while", "scope_error"}},
      // --------------------------------------------------------- extract
      {"extract", "", R"(public class Sample {
    public static int total(int n) {
        int sum = 0;
        for (int i = 0; i < n; i++) {
            if (i % 3 == 0) {
                sum = sum + i;
            }
        }
        return sum;
    }
}
)", {"if", "innermost"}},
      {"extract", "", R"(public class Sample {
    public static int fork(int n) {
        int a = 0;
        int b = 0;
        for (int i = 0; i < n; i++) {
            if (i % 2 == 0) {
                a = a + 1;
            }
            if (i % 5 == 0) {
                b = b + 1;
            }
        }
        return a + b;
    }
}
)", {"if", "side_by_side"}},
      {"extract", "", R"(public class Sample {
    public static int wait(int load) {
        int t = 0;
        while (load > 0) {
            load = load - 1;
            t = t + 1;
        }
        return t;
    }
}
)", {"while", "innermost"}},
      {"extract", "", R"(public class Sample {
    public static int pick(int k) {
        int v = 0;
        switch (k) {
            case 1:
                v = 7;
                break;
            default:
                v = 2;
                break;
        }
        return v;
    }
}
)", {"switch", "innermost"}},
      {"extract", "", R"(public class Sample {
    public static int echo(int n) {
        return n;
    }
}
)", {"method", "whole"}},
      // ---------------------------------------------------- blockcfg: if
      {"blockcfg", "if", R"(if (a > b) {
    max = a;
} else {
    max = b;
}
return max;)", {"if", "else", "clean"}},
      {"blockcfg", "if", R"(if (total < 0) {
    total = 0;
}
flag = 1;)", {"if", "clean"}},
      {"blockcfg", "if", R"(if (i % 2 == 0) {
    if_block_9
    count = count + 1;
}
return count;)", {"if", "placeholder"}},
      {"blockcfg", "if", R"(if (size > cap)
    size = cap;
done = 1;)", {"if", "scope_error"}},
      {"blockcfg", "if", R"(if (mode == 1) {
    rate = rate + 1;
} else {
    rate = rate - 1;
}
steps = steps + 1;)", {"if", "else"}},
      // --------------------------------------------------- blockcfg: for
      {"blockcfg", "for", R"(for (int i = 0; i < n; i++) {
    sum = sum + i;
}
return sum;)", {"for", "clean"}},
      {"blockcfg", "for", R"(for (int i = 0; i < n i++) {
    hops = hops + 2;
}
return hops;)", {"for", "missing_semicolon"}},
      {"blockcfg", "for", R"(for (int r = 0; r < rows; r++) {
    if_block_4
    seen = seen + 1;
}
return seen;)", {"for", "placeholder"}},
      {"blockcfg", "for", R"(for (int i = 0; i < n; i++); {
    sum = sum + 1;
}
return sum;)", {"for", "empty_statement"}},
      {"blockcfg", "for", R"(for (int k = 9; k > 0; k--) {
    acc = acc + k;
    acc = acc - 1;
}
return acc;)", {"for", "countdown"}},
      // ------------------------------------------------- blockcfg: while
      {"blockcfg", "while", R"(while (count < 10) {
    count = count + 1;
}
return count;)", {"while", "clean"}},
      {"blockcfg", "while", R"(while (a < b) {
    if_block_7
    a = a + 1;
}
return a;)", {"while", "if", "placeholder"}},
      {"blockcfg", "while", R"(while (count < 10)
    count = count + 1;
    sum = sum + count;
return sum;)", {"while", "scope_error"}},
      {"blockcfg", "while", R"(while (level ? 0) {
    level = level - 1;
    ticks = ticks + 1;
}
return ticks;)", {"while", "missing_operator"}},
      {"blockcfg", "while", R"(while (load > 0) {
    for_block_3
    load = load - 1;
}
return load;)", {"while", "for", "placeholder"}},
      // ------------------------------------------------ blockcfg: switch
      {"blockcfg", "switch", R"(switch (kind) {
    case 1:
        value = 10;
        break;
    case 2:
        value = 20;
        break;
    default:
        value = 1;
        break;
}
return value;)", {"switch", "default"}},
      {"blockcfg", "switch", R"(switch (gate) {
    case 1:
        cost = cost + 1;
        break;
    default:
        cost = cost - 1;
        break;
}
total = total + cost;)", {"switch", "default"}},
      {"blockcfg", "switch", R"(switch (mode) {
    case 0:
        if_block_2
        break;
    default:
        state = 0;
        break;
}
return state;)", {"switch", "placeholder"}},
      {"blockcfg", "switch", R"(switch (day) {
    case 6:
        rate = 2;
        break;
    case 7:
        rate = 3;
        break;
}
pay = hours * rate;)", {"switch", "no_default"}},
      {"blockcfg", "switch", R"(switch (level) {
    case 1:
        bonus = 5;
        break;
    default:
        bonus = 0;
        break;
}
score = score + bonus;)", {"switch", "default"}},
      // ------------------------------------------------ blockcfg: method
      {"blockcfg", "method", R"(public static int echo(int n) {
    return n;
})", {"method", "clean"}},
      {"blockcfg", "method", R"(public static int total(int n) {
    int sum = 0;
    for_block_1
    return sum;
})", {"method", "placeholder"}},
      {"blockcfg", "method", R"(public static void log(int code) {
    int level = code + 1;
    System.out.println(level);
})", {"method", "clean"}},
      {"blockcfg", "method", R"(public static int gate(int v) {
    int out = v;
    if_block_5
    return out;
})", {"method", "placeholder"}},
      {"blockcfg", "method", R"(public static int mix(int a, int b) {
    int m = a + b;
    while_block_2
    return m;
})", {"method", "placeholder"}},
      // ------------------------------------------------- blockcfg: class
      {"blockcfg", "class", R"(public class Demo {
    method_block_1
})", {"class", "placeholder"}},
      {"blockcfg", "class", R"(public class Worker {
    method_block_3
})", {"class", "placeholder"}},
      {"blockcfg", "class", R"(class Tiny {
    method_block_2
})", {"class", "placeholder"}},
      {"blockcfg", "class", R"(public class Report {
    method_block_4
})", {"class", "placeholder"}},
      {"blockcfg", "class", R"(public class Counter {
    method_block_5
})", {"class", "placeholder"}},
      // ----------------------------------------------- blockcfg: generic
      {"blockcfg", "generic", R"(if (x > 0) {
    y = 1;
} else {
    y = 2;
}
return y;)", {"if", "else"}},
      {"blockcfg", "generic", R"(for (int i = 0; i < n; i++) {
    acc = acc + i;
}
return acc;)", {"for", "clean"}},
      {"blockcfg", "generic", R"(while (t > 0) {
    t = t - 1;
}
return t;)", {"while", "clean"}},
      {"blockcfg", "generic", R"(switch (c) {
    case 1:
        r = 1;
        break;
    default:
        r = 0;
        break;
}
return r;)", {"switch", "default"}},
      {"blockcfg", "generic", R"(public static int twice(int v) {
    int w = v * 2;
    return w;
})", {"method", "clean"}},
      // ---------------------------------------------------------- fusion
      {"fusion", "", R"(for (int i = 0; i < n; i++) {
    if_block_1
}
return sum;@@if_block_1@@if (i % 2 == 0) {
    sum = sum + i;
})", {"for", "if"}},
      {"fusion", "", R"(public static int total(int n) {
    int sum = 0;
    for_block_1
    return sum;
}@@for_block_1@@for (int i = 0; i < n; i++) {
    sum = sum + i;
})", {"method", "for"}},
      {"fusion", "", R"(while (a < b) {
    if_block_2
    a = a + 1;
}
return a;@@if_block_2@@if (a % 2 == 0) {
    b = b - 1;
})", {"while", "if"}},
      {"fusion", "", R"(public class Demo {
    method_block_1
}@@method_block_1@@public static int echo(int n) {
    return n;
})", {"class", "method"}},
      {"fusion", "", R"(for (int r = 0; r < rows; r++) {
    while_block_1
}
return steps;@@while_block_1@@while (steps < cap) {
    steps = steps + 1;
})", {"for", "while"}},
      // ---------------------------------------------------------- direct
      {"direct", "", R"(public class Sample {
    public static int total(int n) {
        int sum = 0;
        for (int i = 0; i < n; i++) {
            sum = sum + i;
        }
        return sum;
    }
}
)", {"for"}},
      {"direct", "", R"(public class Sample {
    public static int max(int a, int b) {
        int m = b;
        if (a > b) {
            m = a;
        }
        return m;
    }
}
)", {"if"}},
      {"direct", "", R"(public class Sample {
    public static int burn(int fuel) {
        int t = 0;
        while (fuel > 0) {
            fuel = fuel - 2;
            t = t + 1;
        }
        return t;
    }
}
)", {"while"}},
      {"direct", "", R"(public class Sample {
    public static int label(int k) {
        int v = 0;
        switch (k) {
            case 1:
                v = 10;
                break;
            default:
                v = 5;
                break;
        }
        return v;
    }
}
)", {"switch", "default"}},
      {"direct", "", R"(public class Sample {
    public static int pair(int a, int b) {
        int s = a + b;
        return s;
    }
}
)", {"straight_line"}},
      // ------------------------------------------------------------- cot
      {"cot", "", R"(public class Sample {
    public static int total(int n) {
        int sum = 0;
        for (int i = 0; i < n; i++) {
            if (i % 2 == 0) {
                sum = sum + i;
            }
        }
        return sum;
    }
}
)", {"for", "if", "worked_pass"}},
  };
  return seeds;
}

std::string compute_output(const KbSeed& seed) {
  if (seed.unit == "structure") {
    json in = {{"code", seed.input}};
    return heuristic_complete("structure", in.dump());
  }
  if (seed.unit == "extract") {
    json in = {{"code", seed.input}};
    std::string structure = heuristic_complete("structure", in.dump());
    StructureHierarchy h = parse_structure_text(structure);
    json entries = json::array();
    for (const auto& e : h.entries) {
      entries.push_back({{"id", e.id},
                         {"kind", block_kind_name(e.kind)},
                         {"depth", e.depth},
                         {"parent", e.parent}});
    }
    json ein = {{"code", seed.input}, {"hierarchy", entries}};
    return heuristic_complete("extract", ein.dump());
  }
  if (seed.unit == "blockcfg") {
    json in = {{"text", seed.input}};
    return heuristic_complete("blockcfg", in.dump());
  }
  if (seed.unit == "fusion") {
    const std::string sep = "@@";
    std::size_t a = seed.input.find(sep);
    std::size_t b = seed.input.find(sep, a + sep.size());
    std::string outer_text = seed.input.substr(0, a);
    std::string inner_id = seed.input.substr(a + sep.size(), b - a - sep.size());
    std::string inner_text = seed.input.substr(b + sep.size());
    json in = {{"cfgs",
                {{{"id", inner_id},
                  {"cfg", emit_cfgtext(build_cfg_from_source(inner_text))}},
                 {{"id", "outer"},
                  {"cfg", emit_cfgtext(build_cfg_from_source(outer_text))}}}}};
    return heuristic_complete("fusion", in.dump());
  }
  // cot / direct
  json in = {{"code", seed.input}};
  return heuristic_complete(seed.unit, in.dump());
}

std::string example_input(const KbSeed& seed) {
  if (seed.unit == "extract") {
    json in = {{"code", seed.input}};
    std::string structure = heuristic_complete("structure", in.dump());
    StructureHierarchy h = parse_structure_text(structure);
    return render_extract_payload(seed.input, emit_structure_lines(h));
  }
  if (seed.unit == "fusion") {
    const std::string sep = "@@";
    std::size_t a = seed.input.find(sep);
    std::size_t b = seed.input.find(sep, a + sep.size());
    std::string outer_text = seed.input.substr(0, a);
    std::string inner_id = seed.input.substr(a + sep.size(), b - a - sep.size());
    std::string inner_text = seed.input.substr(b + sep.size());
    return render_fusion_payload(
        {{inner_id, emit_cfgtext(build_cfg_from_source(inner_text))},
         {"outer", emit_cfgtext(build_cfg_from_source(outer_text))}});
  }
  return seed.input;
}

int write_kb(const fs::path& out_dir) {
  std::map<std::string, int> counters;
  for (const auto& seed : kb_seeds()) {
    const std::string bucket =
        seed.unit == "blockcfg" ? seed.unit + "/" + seed.kind : seed.unit;
    fs::path dir = out_dir / bucket;
    fs::create_directories(dir);
    const int nn = ++counters[bucket];
    char name[16];
    std::snprintf(name, sizeof(name), "%02d.json", nn);
    json j = {{"unit", seed.unit},
              {"kind", seed.kind},
              {"input", example_input(seed)},
              {"output", compute_output(seed)},
              {"tags", seed.tags}};
    std::ofstream f(dir / name);
    f << j.dump(2) << "\n";
  }
  // loading validates every record and the per-unit counts
  KnowledgeBase kb = load_kb(out_dir.string());
  std::cout << "kb: " << kb.total_records() << " records validated\n";
  return 0;
}

// ---------------------------------------------------------------------------

const char* kGoldenPayloadCode = R"(public class Answer {
    public static int demo(int n) {
        int sum = 0;
        for (int i = 0; i < n; i++) {
            if (i % 2 == 0) {
                sum = sum + i;
            }
        }
        return sum;
    }
}
)";

const char* kGoldenIfBlock = R"(if (i % 2 == 0) {
    sum = sum + i;
}
return sum;)";

int write_prompts(const fs::path& kb_dir, const fs::path& out_dir) {
  KnowledgeBase kb = load_kb(kb_dir.string());
  fs::create_directories(out_dir);

  auto to_examples = [](const std::vector<ExampleRecord>& records) {
    std::vector<PromptExample> out;
    for (const auto& r : records) out.push_back({r.input, r.output});
    return out;
  };
  auto write = [&](const std::string& name, const Prompt& p) {
    std::ofstream f(out_dir / (name + ".golden"), std::ios::binary);
    f << p.rendered;
    std::cout << "prompts: wrote " << name << ".golden ("
              << p.rendered.size() << " bytes)\n";
  };

  const std::string code = kGoldenPayloadCode;
  write("structure",
        make_prompt("structure", to_examples(retrieve_examples(kb, "structure", "")),
                    code));
  {
    json in = {{"code", code}};
    StructureHierarchy h =
        parse_structure_text(heuristic_complete("structure", in.dump()));
    write("extract",
          make_prompt("extract", to_examples(retrieve_examples(kb, "extract", "")),
                      render_extract_payload(code, emit_structure_lines(h))));
  }
  write("blockcfg_if",
        make_prompt("blockcfg", to_examples(retrieve_examples(kb, "blockcfg", "if")),
                    kGoldenIfBlock));
  {
    std::string inner = "if (i % 2 == 0) {\n    sum = sum + i;\n}";
    std::string outer = "for (int i = 0; i < n; i++) {\n    if_block_1\n}\nreturn sum;";
    write("fusion",
          make_prompt(
              "fusion", to_examples(retrieve_examples(kb, "fusion", "")),
              render_fusion_payload(
                  {{"if_block_1", emit_cfgtext(build_cfg_from_source(inner))},
                   {"outer", emit_cfgtext(build_cfg_from_source(outer))}})));
  }
  write("cot", make_prompt("cot", to_examples(retrieve_examples(kb, "cot", "", 1)),
                           code));
  write("direct",
        make_prompt("direct", to_examples(retrieve_examples(kb, "direct", "")),
                    code));
  return 0;
}

// ---------------------------------------------------------------------------

int write_gold(const fs::path& kb_dir, const fs::path& corpus,
               const fs::path& gold_dir) {
  KnowledgeBase kb = load_kb(kb_dir.string());
  HeuristicBackend backend;
  Limits limits;
  fs::create_directories(gold_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus)) {
    if (entry.path().extension() == ".java") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::string code = load_source_file(file.string());
    ChainResult result =
        run_pipeline(tokenize(code), backend, kb, Variant::Chain, limits);
    fs::path out = gold_dir / (file.stem().string() + ".cfg");
    std::ofstream f(out, std::ios::binary);
    f << emit_cfgtext(result.final_cfg);
    std::cout << "gold: " << out.filename().string() << " ("
              << result.final_cfg.nodes.size() << " nodes, "
              << result.final_cfg.edges.size() << " edges)\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

int write_cassettes(const fs::path& kb_dir, const fs::path& corpus,
                    const fs::path& out_dir) {
  KnowledgeBase kb = load_kb(kb_dir.string());
  fs::create_directories(out_dir);

  httplib::Server server;
  server.Post("/v1/completions",
              [](const httplib::Request& req, httplib::Response& res) {
                json body = json::parse(req.body);
                std::string prompt = body.contains("prompt")
                                         ? body["prompt"].get<std::string>()
                                         : body["messages"][0]["content"]
                                               .get<std::string>();
                json reply = {{"choices", {{{"text", complete_from_prompt(prompt)}}}}};
                res.set_content(reply.dump(), "application/json");
              });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus)) {
    if (entry.path().extension() == ".java") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  for (Variant variant : {Variant::Chain, Variant::ChainNoApr, Variant::Cot,
                          Variant::Direct}) {
    std::string name = variant_name(variant);
    for (char& c : name) {
      if (c == '-') c = '_';
    }
    fs::path cassette = out_dir / ("nc_mini_" + name + ".jsonl");
    fs::remove(cassette);
    RemoteConfig remote;
    remote.endpoint = "http://127.0.0.1:" + std::to_string(port);
    RecordBackend backend(remote, cassette.string());
    Limits limits;
    for (const auto& file : files) {
      std::string code = load_source_file(file.string());
      run_pipeline(tokenize(code), backend, kb, variant, limits);
    }
    std::cout << "cassettes: " << cassette.filename().string() << " ("
              << Cassette::load_file(cassette.string()).size() << " entries)\n";
  }
  server.stop();
  server_thread.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const std::string root = CFGCHAIN_REPO_ROOT;
  try {
    if (args.size() >= 1 && args[0] == "kb") {
      return write_kb(args.size() > 1 ? args[1] : root + "/kb");
    }
    if (args.size() >= 1 && args[0] == "prompts") {
      return write_prompts(args.size() > 1 ? args[1] : root + "/kb",
                           args.size() > 2 ? args[2] : root + "/prompts");
    }
    if (args.size() >= 1 && args[0] == "gold") {
      return write_gold(root + "/kb",
                        args.size() > 1 ? args[1] : root + "/corpus/nc-mini",
                        args.size() > 2 ? args[2] : root + "/gold/nc-mini");
    }
    if (args.size() >= 1 && args[0] == "cassettes") {
      return write_cassettes(root + "/kb",
                             args.size() > 1 ? args[1] : root + "/corpus/nc-mini",
                             args.size() > 2 ? args[2] : root + "/cassettes");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "usage: cfgchain-datatool kb|prompts|gold|cassettes [paths...]\n";
  return 2;
}
