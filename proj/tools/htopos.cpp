// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "htopos_c.h"

namespace {

std::vector<std::string> split_family(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"htopos: finite presheaf topos workbench"};
  app.footer(
      "DOCUMENT is a .topos file or builtin:<site> (one, delta1, two_discrete, parallel_pair).\n"
      "COMMAND: validate | homset X Y | classes X Y | classify | topologies | contractible A |\n"
      "         no-motion T A [point] | suite <theories|theorem-A|adjunctions|theorem-B|theorem-C|\n"
      "         theorem-D|theorem-E|no-motion|appendix-B|sheaves|monoids|all>\n"
      "Exit codes: 0 all checks pass, 1 a check failed, 2 usage, input or resource error.");
  htopos_config cfg = htopos_default_config();
  std::string document, family, theory;
  std::vector<std::string> command;
  bool json = false;
  app.add_option("--family", family, "comma-separated object names checked by quantified claims");
  app.add_option("--budget", cfg.budget, "expansions allowed per search")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for sampled representative checks")->capture_default_str();
  app.add_option("--theory", theory, "identity | bang | pieces | topology:<name>");
  app.add_flag("--json", json, "emit the JSON report");
  app.add_option("document", document, "DOCUMENT")->required();
  app.add_option("command", command, "COMMAND and its arguments")->required();
  app.positionals_at_end(false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  htopos_workspace* ws = nullptr;
  htopos_status st;
  if (document.rfind("builtin:", 0) == 0) {
    st = htopos_workspace_builtin(document.substr(8).c_str(), &cfg, &ws);
  } else {
    std::ifstream in(document, std::ios::binary);
    if (!in) {
      std::fprintf(stderr, "htopos: cannot read '%s'\n", document.c_str());
      return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();
    st = htopos_workspace_parse(text.str().c_str(), document.c_str(), &cfg, &ws);
  }
  if (st != HTOPOS_OK) {
    std::fprintf(stderr, "htopos: %s: %s\n", document.c_str(), htopos_last_error());
    return 2;
  }

  std::vector<const char*> args;
  for (const auto& a : command) args.push_back(a.c_str());
  const std::vector<std::string> fam = split_family(family);
  std::vector<const char*> fam_c;
  for (const auto& f : fam) fam_c.push_back(f.c_str());

  htopos_report* rep = nullptr;
  st = htopos_run(ws, args.size(), args.data(), family.empty() ? nullptr : fam_c.data(), fam_c.size(),
                  theory.empty() ? nullptr : theory.c_str(), &rep);
  if (st != HTOPOS_OK) {
    std::fprintf(stderr, "htopos: %s\n", htopos_last_error());
    htopos_workspace_free(ws);
    return 2;
  }
  std::fputs(json ? htopos_report_json(rep) : htopos_report_text(rep), stdout);
  const int code = htopos_report_exit_code(rep);
  htopos_report_free(rep);
  htopos_workspace_free(ws);
  return code;
}
