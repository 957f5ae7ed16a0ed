#include <doctest.h>

#include "cfgchain/cfg.hpp"
#include "cfgchain/error.hpp"
#include "support.hpp"

using namespace cfgchain;

TEST_CASE("parse_cfgtext: minimal graph") {
  Cfg g = parse_cfgtext("cfg v1\nnode entry \"entry\"\n");
  CHECK(g.nodes.size() == 1);
  CHECK(g.edges.empty());
  CHECK(g.entry_id == "entry");
}

TEST_CASE("parse_cfgtext: forward references are rejected") {
  const std::string text = "cfg v1\nedge a b \"true\"\nnode a \"x\"\nnode b \"y\"\n";
  CHECK_THROWS_WITH_AS(parse_cfgtext(text), doctest::Contains("`a`"),
                       Error);
  try {
    parse_cfgtext(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownNodeRef);
  }
}

TEST_CASE("parse_cfgtext: duplicate node ids are rejected") {
  try {
    parse_cfgtext("cfg v1\nnode a \"x\"\nnode a \"y\"\n");
    FAIL("expected DuplicateNodeId");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateNodeId);
  }
}

TEST_CASE("parse_cfgtext: missing header") {
  try {
    parse_cfgtext("node a \"x\"\n");
    FAIL("expected MissingHeader");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingHeader);
  }
}

TEST_CASE("parse_cfgtext: a hand-encoded branch graph counts 4 nodes, 4 edges") {
  // condition node, two branch nodes and a join, with true/false edges
  const std::string text =
      "cfg v1\n"
      "node c1 \"if ((i + j) ? 7)\"\n"
      "node a \"System.out.println(i + j)\"\n"
      "node b \"System.out.println(j)\"\n"
      "node j1 \"j++\"\n"
      "edge c1 a \"true\"\n"
      "edge c1 b \"false\"\n"
      "edge a j1\n"
      "edge b j1\n";
  Cfg g = parse_cfgtext(text);
  CHECK(g.nodes.size() == 4);
  CHECK(g.edges.size() == 4);
  CHECK(g.entry_id == "c1");
}

TEST_CASE("parse_cfgtext: lenient to surrounding prose") {
  const std::string text =
      "Sure, here is the control flow graph.\n"
      "cfg v1\n"
      "node a \"x = 1\"\n"
      "That is all.\n";
  Cfg g = parse_cfgtext(text);
  CHECK(g.nodes.size() == 1);
}

TEST_CASE("emit_cfgtext: minimal graph is byte-exact") {
  Cfg g;
  g.nodes.push_back({"entry", "entry", false});
  g.entry_id = "entry";
  CHECK(emit_cfgtext(g) == "cfg v1\nnode entry \"entry\"\n");
}

TEST_CASE("emit_cfgtext: quotes and backslashes survive the roundtrip") {
  Cfg g;
  g.nodes.push_back({"a", "print(\"hi\\there\")", false});
  g.entry_id = "a";
  Cfg back = parse_cfgtext(emit_cfgtext(g));
  CHECK(back == g);
}

TEST_CASE("parse/emit roundtrip on random graphs") {
  testsupport::GraphGen gen(101);
  for (int round = 0; round < 500; ++round) {
    Cfg g = gen.graph();
    Cfg back = parse_cfgtext(emit_cfgtext(g));
    CHECK(back == g);
    // emit . parse . emit is a fixed point
    CHECK(emit_cfgtext(back) == emit_cfgtext(g));
  }
}

TEST_CASE("emit preserves a non-first entry node") {
  Cfg g;
  g.nodes.push_back({"a", "first", false});
  g.nodes.push_back({"b", "real entry", false});
  g.entry_id = "b";
  Cfg back = parse_cfgtext(emit_cfgtext(g));
  CHECK(back.entry_id == "b");
  CHECK(back == g);
}

TEST_CASE("emit_dot: one statement per node, deterministic") {
  Cfg g;
  g.nodes.push_back({"a", "x = 1", false});
  g.entry_id = "a";
  std::string dot = emit_dot(g);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("\"a\" [label=\"x = 1\"]") != std::string::npos);

  Cfg h = g;  // structurally equal input gives byte-equal output
  CHECK(emit_dot(h) == dot);
}

TEST_CASE("emit_dot: condition nodes get a diamond, branch labels appear") {
  Cfg g;
  g.nodes.push_back({"c", "if (x)", false});
  g.nodes.push_back({"a", "y = 1", false});
  g.nodes.push_back({"b", "y = 2", false});
  g.entry_id = "c";
  g.edges.push_back({"c", "a", "true"});
  g.edges.push_back({"c", "b", "false"});
  std::string dot = emit_dot(g);
  CHECK(dot.find("shape=diamond") != std::string::npos);
  CHECK(dot.find("[label=\"true\"]") != std::string::npos);
  CHECK(dot.find("[label=\"false\"]") != std::string::npos);
}

TEST_CASE("validate_cfg: clean single node") {
  Cfg g;
  g.nodes.push_back({"a", "x", false});
  g.entry_id = "a";
  CHECK(validate_cfg(g).empty());
}

TEST_CASE("validate_cfg: unreachable node is reported") {
  Cfg g;
  g.nodes.push_back({"a", "x", false});
  g.nodes.push_back({"b", "y", false});
  g.entry_id = "a";
  auto violations = validate_cfg(g);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == Violation::Kind::Unreachable);
  CHECK(violations[0].node_or_edge == "b");
}

TEST_CASE("validate_cfg: a lone true branch dangles") {
  Cfg g;
  g.nodes.push_back({"c", "if (x)", false});
  g.nodes.push_back({"a", "y", false});
  g.entry_id = "c";
  g.edges.push_back({"c", "a", "true"});
  auto violations = validate_cfg(g);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == Violation::Kind::DanglingBranch);
}

TEST_CASE("validate_cfg: duplicate edges are reported") {
  Cfg g;
  g.nodes.push_back({"a", "x", false});
  g.nodes.push_back({"b", "y", false});
  g.entry_id = "a";
  g.edges.push_back({"a", "b", ""});
  g.edges.push_back({"a", "b", ""});
  auto violations = validate_cfg(g);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == Violation::Kind::DuplicateEdge);
}

TEST_CASE("is_placeholder_label: exactly the six kinds with positive index") {
  CHECK(is_placeholder_label("if_block_1"));
  CHECK(is_placeholder_label("switch_block_12"));
  CHECK(!is_placeholder_label("if_block_0"));
  CHECK(!is_placeholder_label("try_block_1"));
  CHECK(!is_placeholder_label("if_block_"));
  CHECK(!is_placeholder_label("ifblock1"));
}
