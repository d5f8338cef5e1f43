// SPDX-License-Identifier: Apache-2.0

#include "htopos_c.h"

#include <exception>
#include <string>
#include <vector>

#include "htopos/error.hpp"
#include "htopos/workspace.hpp"

struct htopos_workspace {
  htopos::Workspace ws;
};

struct htopos_report {
  htopos::Report report;
  std::string text;
  std::string json;
};

namespace {

thread_local std::string last_error;

htopos_status fail(htopos_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
htopos_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return HTOPOS_OK;
  } catch (const htopos::ParseError& e) {
    return fail(HTOPOS_ERR_PARSE, e.what());
  } catch (const htopos::SemanticError& e) {
    return fail(HTOPOS_ERR_SEMANTIC, e.what());
  } catch (const htopos::UnknownNameError& e) {
    return fail(HTOPOS_ERR_UNKNOWN_NAME, e.what());
  } catch (const htopos::PreconditionError& e) {
    return fail(HTOPOS_ERR_PRECONDITION, e.what());
  } catch (const htopos::ResourceError& e) {
    return fail(HTOPOS_ERR_RESOURCE, e.what());
  } catch (const htopos::ShapeError& e) {
    return fail(HTOPOS_ERR_SHAPE, e.what());
  } catch (const std::exception& e) {
    return fail(HTOPOS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HTOPOS_ERR_INTERNAL, "unknown exception");
  }
}

htopos::Config to_config(const htopos_config* c) {
  htopos::Config out;
  if (!c) return out;
  if (c->budget) out.budget = c->budget;
  out.seed = c->seed;
  if (c->rep_bound) out.rep_bound = static_cast<std::size_t>(c->rep_bound);
  return out;
}

}  // namespace

extern "C" {

htopos_config htopos_default_config(void) {
  htopos::Config d;
  return htopos_config{d.budget, d.seed, d.rep_bound};
}

const char* htopos_version(void) { return "1.0.0"; }

const char* htopos_last_error(void) { return last_error.c_str(); }

htopos_status htopos_workspace_parse(const char* text, const char* source, const htopos_config* config,
                                     htopos_workspace** out) {
  if (!text || !out) return fail(HTOPOS_ERR_INVALID_ARGUMENT, "text and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new htopos_workspace{htopos::Workspace::parse(text, source ? source : "<input>", to_config(config))};
  });
}

htopos_status htopos_workspace_builtin(const char* site, const htopos_config* config, htopos_workspace** out) {
  if (!site || !out) return fail(HTOPOS_ERR_INVALID_ARGUMENT, "site and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new htopos_workspace{htopos::Workspace::builtin(site, to_config(config))}; });
}

void htopos_workspace_free(htopos_workspace* ws) { delete ws; }

htopos_status htopos_run(const htopos_workspace* ws, size_t argc, const char* const* argv,
                         const char* const* family, size_t family_count, const char* theory,
                         htopos_report** out) {
  if (!ws || !out || (argc && !argv) || (family_count && !family))
    return fail(HTOPOS_ERR_INVALID_ARGUMENT, "NULL handle or array");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::string> args(argv, argv + argc);
    htopos::RunOptions opt;
    if (family) opt.family = std::vector<std::string>(family, family + family_count);
    if (theory) opt.theory = theory;
    auto* r = new htopos_report{htopos::run_command(ws->ws, args, opt), {}, {}};
    r->text = r->report.text();
    r->json = r->report.json();
    *out = r;
  });
}

const char* htopos_report_text(const htopos_report* r) { return r ? r->text.c_str() : nullptr; }
const char* htopos_report_json(const htopos_report* r) { return r ? r->json.c_str() : nullptr; }
int htopos_report_exit_code(const htopos_report* r) { return r ? r->report.exit_code : 2; }
size_t htopos_report_result_count(const htopos_report* r) { return r ? r->report.results.size() : 0; }

const char* htopos_report_check(const htopos_report* r, size_t i) {
  return r && i < r->report.results.size() ? r->report.results[i].check.c_str() : nullptr;
}
const char* htopos_report_status(const htopos_report* r, size_t i) {
  return r && i < r->report.results.size() ? r->report.results[i].status.c_str() : nullptr;
}
const char* htopos_report_witness(const htopos_report* r, size_t i) {
  return r && i < r->report.results.size() ? r->report.results[i].witness.c_str() : nullptr;
}

void htopos_report_free(htopos_report* r) { delete r; }

size_t htopos_builtin_site_count(void) { return htopos::builtin_names().size(); }
const char* htopos_builtin_site_name(size_t i) {
  const auto& n = htopos::builtin_names();
  return i < n.size() ? n[i].c_str() : nullptr;
}
size_t htopos_suite_count(void) { return htopos::suite_names().size(); }
const char* htopos_suite_name(size_t i) {
  const auto& n = htopos::suite_names();
  return i < n.size() ? n[i].c_str() : nullptr;
}

}  // extern "C"
