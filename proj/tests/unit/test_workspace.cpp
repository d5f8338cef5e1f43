// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <json.hpp>

#include "htopos/error.hpp"
#include "htopos/workspace.hpp"

using namespace htopos;

namespace {

Workspace load(const std::string& text) { return Workspace::parse(text, "test", Config{}); }

Report run(const Workspace& ws, std::vector<std::string> args, RunOptions opt = {}) {
  return run_command(ws, args, opt);
}

const char* kInterval =
    "site C = builtin delta1\n"
    "let I = yoneda([1])\n"
    "let e0 = point(I, 0)\n"
    "let e1 = point(I, 1)\n";

}  // namespace

TEST(Workspace, BuiltinImport) {
  Workspace ws = load("site C = builtin delta1\n");
  ASSERT_EQ(ws.sites().size(), 1u);
  EXPECT_EQ(ws.active().name, "C");
  EXPECT_EQ(ws.active().topos->category().morphism_count(), 7u);
  EXPECT_NE(ws.active().object("Omega"), nullptr);
}

TEST(Workspace, IntervalWithEndpoints) {
  Workspace ws = load(kInterval);
  const SiteEntry& s = ws.active();
  EXPECT_EQ(s.objects.size(), 5u);  // four predefined plus I
  EXPECT_EQ(s.arrows.size(), 2u);
  ASSERT_NE(s.arrow("e1"), nullptr);
  EXPECT_EQ(s.arrow("e1")->cod(), *s.object("I"));
}

TEST(Workspace, NonNaturalMapCitesSquare) {
  try {
    load("site C = builtin delta1\nlet I = yoneda([1])\narrow f : I -> 2\n  at [0] = 0 1\n  at [1] = 0 1 1\nend\n");
    FAIL();
  } catch (const SemanticError& e) {
    const std::string m = e.what();
    EXPECT_NE(m.find("line 3"), std::string::npos);
    EXPECT_NE(m.find("'f'"), std::string::npos);
    EXPECT_NE(m.find("square for d0"), std::string::npos);
  }
}

TEST(Workspace, ParseErrorsArePositioned) {
  try {
    load("site C = builtin delta1\nlet I = yoneda([1]\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 19u);
  }
  EXPECT_THROW(load("let I = yoneda([1])\n"), ParseError);
  EXPECT_THROW(load("site C = builtin delta1\nlet 2 = terminal()\n"), ParseError);
  EXPECT_THROW(load("site C = builtin delta1\nfamily I\n"), ParseError);
  EXPECT_THROW(load("site C = builtin delta1\ntheory fuzzy\n"), ParseError);
  EXPECT_THROW(load(""), ParseError);
}

TEST(Workspace, DerivedActionTables) {
  // only the generators are given; the composites are derived
  Workspace ws = load(
      "site C = builtin delta1\n"
      "object P\n  stage [0] 1\n  stage [1] 1\n  act d0 = 0\n  act d1 = 0\n  act s = 0\nend\n");
  EXPECT_EQ(*ws.active().object("P"), ws.active().topos->terminal());
}

TEST(Workspace, FamilyAndTheoryDefaults) {
  Workspace ws = load(std::string(kInterval) + "family 1 I\ntheory bang\n");
  Report r = run(ws, {"validate"});
  EXPECT_EQ(r.family, (std::vector<std::string>{"1", "I"}));
  EXPECT_EQ(r.theory, "bang");
  RunOptions o;
  o.family = std::vector<std::string>{"2"};
  o.theory = "identity";
  Report r2 = run(ws, {"validate"}, o);
  EXPECT_EQ(r2.family, (std::vector<std::string>{"2"}));
  EXPECT_EQ(r2.theory, "identity");
}

TEST(Commands, ClassesOneOmega) {
  Workspace ws = Workspace::builtin("delta1", Config{});
  Report r = run(ws, {"classes", "1", "Omega"});
  EXPECT_EQ(r.exit_code, 0);
  ASSERT_FALSE(r.results.empty());
  EXPECT_NE(r.results[0].witness.find("1 class of 2 arrows"), std::string::npos);
}

TEST(Commands, ClassifyReflexiveGraphs) {
  Workspace ws = load(std::string(kInterval) + "family 0 1 2 I Omega\n");
  Report r = run(ws, {"classify"});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.results.back().witness, "sufficiently cohesive, not a quality type");
}

TEST(Commands, TheoremAOnSets) {
  Workspace ws = load("site S = builtin one\nlet 3 = discrete(3)\nfamily 0 1 2 3 Omega\n");
  Report r = run(ws, {"suite", "theorem-A"});
  EXPECT_EQ(r.exit_code, 0);
  for (const auto& l : r.results) EXPECT_EQ(l.status, "pass") << l.check;
}

TEST(Commands, ExitCodes) {
  Workspace ws = load(kInterval);
  EXPECT_EQ(run(ws, {}).exit_code, 2);
  EXPECT_EQ(run(ws, {"bogus"}).exit_code, 2);
  EXPECT_EQ(run(ws, {"homset", "I"}).exit_code, 2);
  EXPECT_EQ(run(ws, {"homset", "I", "Nope"}).exit_code, 2);
  EXPECT_EQ(run(ws, {"no-motion", "I", "Omega"}).exit_code, 2);
  EXPECT_EQ(run(ws, {"no-motion", "I", "2", "7"}).exit_code, 2);
  EXPECT_EQ(run(ws, {"suite", "nope"}).exit_code, 2);
  // bang fails to certify at the initial object
  RunOptions o;
  o.family = std::vector<std::string>{"0", "1"};
  EXPECT_EQ(run(ws, {"suite", "theories"}, o).exit_code, 1);
}

TEST(Commands, SuiteRefusedWithoutNs) {
  Workspace ws = Workspace::builtin("parallel_pair", Config{});
  Report r = run(ws, {"suite", "theorem-B"});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.error.find("NS"), std::string::npos);
}

TEST(Commands, ResourceErrorsAreReported) {
  Config c;
  c.budget = 5;
  Workspace ws = Workspace::builtin("delta1", c);
  Report r = run(ws, {"homset", "Omega", "Omega"});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.error.find("budget"), std::string::npos);
}

TEST(Report, JsonSchema) {
  Workspace ws = load(kInterval);
  Report r = run(ws, {"homset", "I", "I"});
  auto j = nlohmann::json::parse(r.json());
  EXPECT_EQ(j["schema_version"], Report::kSchemaVersion);
  EXPECT_EQ(j["command"], "homset I I");
  EXPECT_TRUE(j["config"].contains("family"));
  EXPECT_TRUE(j["config"].contains("budget"));
  EXPECT_EQ(j["seed"], Config{}.seed);
  ASSERT_TRUE(j["results"].is_array());
  for (const auto& x : j["results"]) {
    EXPECT_TRUE(x.contains("check"));
    EXPECT_TRUE(x.contains("status"));
    EXPECT_TRUE(x.contains("witness"));
  }
  EXPECT_EQ(j["exit_code"], 0);
}

TEST(Report, TextNamesFamilyAndConfig) {
  Workspace ws = load(kInterval);
  const std::string t = run(ws, {"validate"}).text();
  EXPECT_NE(t.find("family: 0, 1, 2, Omega, I"), std::string::npos);
  EXPECT_NE(t.find("seed: 20240917"), std::string::npos);
}

TEST(Report, Deterministic) {
  Workspace a = load(std::string(kInterval) + "family 0 1 2 I Omega\n");
  Workspace b = load(std::string(kInterval) + "family 0 1 2 I Omega\n");
  for (const std::string s : {"theories", "theorem-C", "appendix-B"}) EXPECT_EQ(run(a, {"suite", s}).json(), run(b, {"suite", s}).json()) << s;
}

TEST(Report, SuiteNames) {
  const auto& n = suite_names();
  EXPECT_EQ(n.back(), "all");
  EXPECT_NE(std::find(n.begin(), n.end(), "theorem-A"), n.end());
}
