// SPDX-License-Identifier: Apache-2.0

// Links only the shared library and its C header.

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "htopos_c.h"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

htopos_status load_error(const std::string& kind) {
  if (kind == "parse") return HTOPOS_ERR_PARSE;
  if (kind == "semantic") return HTOPOS_ERR_SEMANTIC;
  if (kind == "resource") return HTOPOS_ERR_RESOURCE;
  return HTOPOS_ERR_INTERNAL;
}

}  // namespace

TEST(CApi, BuiltinRoundTrip) {
  htopos_config cfg = htopos_default_config();
  htopos_workspace* ws = nullptr;
  ASSERT_EQ(htopos_workspace_builtin("delta1", &cfg, &ws), HTOPOS_OK);
  const char* argv[] = {"classes", "1", "Omega"};
  htopos_report* r = nullptr;
  ASSERT_EQ(htopos_run(ws, 3, argv, nullptr, 0, nullptr, &r), HTOPOS_OK);
  EXPECT_EQ(htopos_report_exit_code(r), 0);
  ASSERT_GE(htopos_report_result_count(r), 1u);
  EXPECT_STREQ(htopos_report_status(r, 0), "pass");
  EXPECT_EQ(htopos_report_check(r, 99), nullptr);
  auto j = nlohmann::json::parse(htopos_report_json(r));
  EXPECT_EQ(j["command"], "classes 1 Omega");
  EXPECT_NE(std::string(htopos_report_text(r)).find("summary:"), std::string::npos);
  htopos_report_free(r);
  htopos_workspace_free(ws);
}

TEST(CApi, ErrorsAreCodes) {
  htopos_workspace* ws = nullptr;
  EXPECT_EQ(htopos_workspace_builtin("nope", nullptr, &ws), HTOPOS_ERR_UNKNOWN_NAME);
  EXPECT_EQ(ws, nullptr);
  EXPECT_NE(std::string(htopos_last_error()).find("nope"), std::string::npos);
  EXPECT_EQ(htopos_workspace_parse(nullptr, "x", nullptr, &ws), HTOPOS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(htopos_workspace_parse("let x = terminal()\n", "x", nullptr, &ws), HTOPOS_ERR_PARSE);
  EXPECT_EQ(htopos_run(nullptr, 0, nullptr, nullptr, 0, nullptr, nullptr), HTOPOS_ERR_INVALID_ARGUMENT);
  htopos_workspace_free(nullptr);
  htopos_report_free(nullptr);
}

TEST(CApi, FamilyAndTheoryOverride) {
  htopos_workspace* ws = nullptr;
  ASSERT_EQ(htopos_workspace_builtin("delta1", nullptr, &ws), HTOPOS_OK);
  const char* argv[] = {"validate"};
  const char* fam[] = {"1", "2"};
  htopos_report* r = nullptr;
  ASSERT_EQ(htopos_run(ws, 1, argv, fam, 2, "identity", &r), HTOPOS_OK);
  auto j = nlohmann::json::parse(htopos_report_json(r));
  EXPECT_EQ(j["config"]["family"], nlohmann::json::array({"1", "2"}));
  EXPECT_EQ(j["config"]["theory"], "identity");
  htopos_report_free(r);
  htopos_workspace_free(ws);
}

TEST(CApi, Listings) {
  EXPECT_EQ(htopos_builtin_site_count(), 4u);
  EXPECT_STREQ(htopos_builtin_site_name(1), "delta1");
  EXPECT_EQ(htopos_builtin_site_name(9), nullptr);
  EXPECT_STREQ(htopos_suite_name(htopos_suite_count() - 1), "all");
}

TEST(Conformance, Corpus) {
  const std::string dir = HTOPOS_CONFORMANCE;
  auto manifest = nlohmann::json::parse(slurp(dir + "/manifest.json"));
  ASSERT_FALSE(manifest.empty());
  for (const auto& e : manifest) {
    const std::string file = e["file"];
    SCOPED_TRACE(file);
    const std::string text = slurp(dir + "/" + file);
    ASSERT_FALSE(text.empty());
    htopos_workspace* ws = nullptr;
    htopos_status st = htopos_workspace_parse(text.c_str(), file.c_str(), nullptr, &ws);
    std::string out;
    if (e.contains("load_error")) {
      EXPECT_EQ(st, load_error(e["load_error"]));
      out = htopos_last_error();
    } else {
      ASSERT_EQ(st, HTOPOS_OK) << htopos_last_error();
      std::vector<std::string> args = e["args"];
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      htopos_report* r = nullptr;
      ASSERT_EQ(htopos_run(ws, argv.size(), argv.data(), nullptr, 0, nullptr, &r), HTOPOS_OK);
      EXPECT_EQ(htopos_report_exit_code(r), e["exit"].get<int>());
      out = htopos_report_text(r);
      htopos_report_free(r);
    }
    for (const auto& c : e["contains"]) EXPECT_NE(out.find(c.get<std::string>()), std::string::npos) << c << "\n" << out;
    htopos_workspace_free(ws);
  }
}
