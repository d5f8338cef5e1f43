// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "htopos/topos.hpp"

namespace htopos {

/// One `site` block of a workspace document with everything declared on it.
struct SiteEntry {
  std::string name;
  std::shared_ptr<Topos> topos;
  std::vector<std::pair<std::string, Presheaf>> objects;
  std::vector<std::pair<std::string, PresheafMap>> arrows;
  std::vector<std::string> family;  // empty: predefined and declared objects
  std::string theory = "pieces";

  const Presheaf* object(std::string_view n) const;
  const PresheafMap* arrow(std::string_view n) const;
};

/// A parsed and validated `.topos` document. Commands act on the active
/// site: the last `site`, or the one named by `use`.
class Workspace {
 public:
  /// ParseError carries "source:line:col: message"; SemanticError names the
  /// failing axiom and entity.
  static Workspace parse(std::string_view text, const std::string& source, const Config& config);
  /// A workspace holding one builtin site and its predefined objects.
  static Workspace builtin(const std::string& site, const Config& config);

  const std::vector<SiteEntry>& sites() const { return sites_; }
  const SiteEntry& active() const { return sites_.at(active_); }
  SiteEntry& active() { return sites_.at(active_); }
  const Config& config() const { return config_; }
  const std::string& source() const { return source_; }

 private:
  std::vector<SiteEntry> sites_;
  std::size_t active_ = 0;
  Config config_;
  std::string source_;

  friend class WorkspaceParser;
};

/// Options from the command line; each overrides the document.
struct RunOptions {
  std::optional<std::vector<std::string>> family;
  std::optional<std::string> theory;
};

struct ReportLine {
  std::string check;
  std::string status;  // "pass" or "fail"
  std::string witness;
};

struct Report {
  static constexpr int kSchemaVersion = 1;

  std::string command;
  std::string site;
  std::string theory;
  std::vector<std::string> family;
  Config config;
  std::vector<ReportLine> results;
  std::string error;  // usage or resource error; exit code 2
  int exit_code = 0;

  std::string text() const;
  std::string json() const;
};

/// Commands: validate, homset X Y, classes X Y, classify, topologies,
/// contractible A, no-motion T A [point], suite <name>.
Report run_command(const Workspace& ws, const std::vector<std::string>& args, const RunOptions& options);
/// Suite names accepted by `suite`.
const std::vector<std::string>& suite_names();

}  // namespace htopos
