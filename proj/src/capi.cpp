#include "tropcert/tropcert.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "tropcert/certificate.hpp"

using namespace tropcert;

struct tc_config {
  RunConfig cfg;
};

struct tc_result {
  RunResult run;
};

struct tc_report {
  VerifyReport report;
  std::string json;
};

static_assert(static_cast<int>(ErrorCode::ArithmeticOverflow) == TC_ERR_ARITHMETIC_OVERFLOW);
static_assert(static_cast<int>(ErrorCode::DistinctValuationsRequired) == TC_ERR_DISTINCT_VALUATIONS_REQUIRED);
static_assert(static_cast<int>(ErrorCode::Io) == TC_ERR_IO);

namespace {

thread_local std::string last_error;

template <class Fn>
tc_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return TC_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<tc_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TC_ERR_INTERNAL;
  }
}

tc_status null_argument(const char* what) {
  last_error = std::string(what) + " must not be null";
  return TC_ERR_INVALID_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* tc_version(void) { return "1.0.0"; }

const char* tc_last_error(void) { return last_error.c_str(); }

const char* tc_status_name(tc_status status) {
  if (status == TC_OK) return "Ok";
  if (status == TC_ERR_INTERNAL) return "Internal";
  return error_name(static_cast<ErrorCode>(status));
}

void tc_string_free(char* s) { std::free(s); }

tc_status tc_config_new(int n, const char* valuations, tc_config** out) {
  if (!out) return null_argument("out");
  if (!valuations) return null_argument("valuations");
  *out = nullptr;
  return guarded([&] {
    auto cfg = std::make_unique<tc_config>();
    cfg->cfg.n = n;
    cfg->cfg.valuations.v = parse_rational_list(valuations);
    *out = cfg.release();
  });
}

void tc_config_free(tc_config* cfg) { delete cfg; }

tc_status tc_config_set_equations(tc_config* cfg, const char* families) {
  if (!cfg) return null_argument("cfg");
  if (!families) return null_argument("families");
  return guarded([&] { cfg->cfg.equations = parse_families(families); });
}

tc_status tc_config_set_mode(tc_config* cfg, const char* mode) {
  if (!cfg) return null_argument("cfg");
  if (!mode) return null_argument("mode");
  return guarded([&] { cfg->cfg.mode = parse_mode(mode); });
}

tc_status tc_config_set_jobs(tc_config* cfg, size_t jobs) {
  if (!cfg) return null_argument("cfg");
  if (jobs == 0) {
    last_error = "worker count must be positive";
    return TC_ERR_INVALID_ARGUMENT;
  }
  cfg->cfg.jobs = jobs;
  return TC_OK;
}

tc_status tc_config_set_unsafe_valuations(tc_config* cfg, int allow) {
  if (!cfg) return null_argument("cfg");
  cfg->cfg.unsafe_valuations = allow != 0;
  return TC_OK;
}

tc_status tc_config_set_force_components(tc_config* cfg, int force) {
  if (!cfg) return null_argument("cfg");
  cfg->cfg.force_components = force != 0;
  return TC_OK;
}

tc_status tc_config_set_output_dir(tc_config* cfg, const char* dir) {
  if (!cfg) return null_argument("cfg");
  cfg->cfg.out_dir = dir ? dir : "";
  return TC_OK;
}

tc_status tc_certify(const tc_config* cfg, tc_result** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<tc_result>();
    r->run = run_certify(cfg->cfg);
    *out = r.release();
  });
}

void tc_result_free(tc_result* r) { delete r; }

tc_verdict tc_result_verdict(const tc_result* r) {
  return r && r->run.verdict == Verdict::certified ? TC_CERTIFIED : TC_INCONCLUSIVE;
}

int tc_result_exit_code(const tc_result* r) { return r ? r->run.exit_code() : 1; }

const char* tc_result_certificate_json(const tc_result* r) { return r ? r->run.certificate_json.c_str() : ""; }
const char* tc_result_complex_json(const tc_result* r) { return r ? r->run.complex_json.c_str() : ""; }
const char* tc_result_run_info_json(const tc_result* r) { return r ? r->run.run_info_json.c_str() : ""; }

tc_status tc_verify(const char* certificate_path, const char* complex_path, tc_report** out) {
  if (!certificate_path) return null_argument("certificate_path");
  if (!complex_path) return null_argument("complex_path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<tc_report>();
    r->report = run_verify(certificate_path, complex_path);
    r->json = r->report.to_json();
    *out = r.release();
  });
}

void tc_report_free(tc_report* r) { delete r; }
int tc_report_passed(const tc_report* r) { return r && r->report.passed() ? 1 : 0; }
const char* tc_report_json(const tc_report* r) { return r ? r->json.c_str() : ""; }

tc_status tc_equations(int n, const char* families, const char* format, char** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const FamilySelection fam = families && *families ? parse_families(families) : all_families();
    const std::string fmt = format ? format : "json";
    const auto system = build_system(n, fam);
    std::string text;
    if (fmt == "json")
      text = equations_json(system);
    else if (fmt == "text")
      text = equations_text(system, VariableOrder(n));
    else
      throw Error(ErrorCode::InvalidArgument, "unknown equations format '" + fmt + "'");
    *out = duplicate(text);
  });
}

tc_status tc_project(const char* complex_path, const char* axes, char** out) {
  if (!complex_path) return null_argument("complex_path");
  if (!axes) return null_argument("axes");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    std::vector<size_t> list;
    std::stringstream ss(axes);
    std::string item;
    while (std::getline(ss, item, ',')) {
      size_t pos = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(item, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != item.size()) throw Error(ErrorCode::InvalidArgument, "bad axis '" + item + "'");
      list.push_back(v);
    }
    *out = duplicate(projection_json(complex_from_json(read_file(complex_path)), list));
  });
}

}  // extern "C"
