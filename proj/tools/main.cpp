// Command-line front end; talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "tropcert/tropcert.h"

namespace {

// Library errors map to 10 + status so they never collide with the
// Inconclusive exit code 2.
int fail(tc_status status) {
  std::fprintf(stderr, "error (%s): %s\n", tc_status_name(status), tc_last_error());
  return 10 + static_cast<int>(status);
}

int certify(int n, const std::string& valuations, const std::string& equations, const std::string& mode,
            size_t jobs, bool unsafe, bool force, const std::string& out) {
  tc_config* cfg = nullptr;
  tc_status st = tc_config_new(n, valuations.c_str(), &cfg);
  if (st == TC_OK) st = tc_config_set_equations(cfg, equations.c_str());
  if (st == TC_OK) st = tc_config_set_mode(cfg, mode.c_str());
  if (st == TC_OK) st = tc_config_set_jobs(cfg, jobs);
  if (st == TC_OK) st = tc_config_set_unsafe_valuations(cfg, unsafe ? 1 : 0);
  if (st == TC_OK) st = tc_config_set_force_components(cfg, force ? 1 : 0);
  if (st == TC_OK) st = tc_config_set_output_dir(cfg, out.c_str());
  tc_result* res = nullptr;
  if (st == TC_OK) st = tc_certify(cfg, &res);
  tc_config_free(cfg);
  if (st != TC_OK) return fail(st);
  const int code = tc_result_exit_code(res);
  std::printf("%s\n", tc_result_verdict(res) == TC_CERTIFIED ? "Certified" : "Inconclusive");
  tc_result_free(res);
  return code;
}

int verify(const std::string& cert, const std::string& complex) {
  tc_report* rep = nullptr;
  tc_status st = tc_verify(cert.c_str(), complex.c_str(), &rep);
  if (st != TC_OK) return fail(st);
  std::printf("%s\n", tc_report_json(rep));
  const int code = tc_report_passed(rep) ? 0 : 1;
  tc_report_free(rep);
  return code;
}

int print_owned(tc_status st, char* text) {
  if (st != TC_OK) return fail(st);
  std::fputs(text, stdout);
  if (*text && text[std::char_traits<char>::length(text) - 1] != '\n') std::fputc('\n', stdout);
  tc_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify finiteness of central configurations via tropical prevarieties"};
  app.set_version_flag("--version", std::string(tc_version()));
  app.require_subcommand(1);

  int n = 5;
  std::string valuations, equations = "ac,sac,cm", mode = "checked64", out;
  size_t jobs = 1;
  bool unsafe = false, force = false;
  auto* cert_cmd = app.add_subcommand("certify", "compute the prevariety and certify its recession cones");
  cert_cmd->add_option("--n", n, "number of bodies")->required();
  cert_cmd->add_option("--valuations", valuations, "mass valuations, comma separated rationals")->required();
  cert_cmd->add_option("--equations", equations, "equation families: ac,sac,cm")->capture_default_str();
  cert_cmd->add_option("--mode", mode, "arithmetic: checked64 or big")
      ->check(CLI::IsMember({"checked64", "big"}))
      ->capture_default_str();
  cert_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  cert_cmd->add_flag("--unsafe-valuations", unsafe, "allow repeated valuations (warns)");
  cert_cmd->add_flag("--force-components", force, "certify per component even when the global cone is pointed");
  cert_cmd->add_option("--out", out, "output directory")->required();

  std::string cert_path, complex_path;
  auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate by substitution");
  verify_cmd->add_option("certificate", cert_path, "certificate.json")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("complex", complex_path, "complex.json")->required()->check(CLI::ExistingFile);

  int eq_n = 5;
  std::string dump = "text", eq_families = "ac,sac,cm";
  auto* eq_cmd = app.add_subcommand("equations", "print the polynomial system");
  eq_cmd->add_option("--n", eq_n, "number of bodies")->required();
  eq_cmd->add_option("--dump", dump, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  eq_cmd->add_option("--equations", eq_families, "equation families: ac,sac,cm")->capture_default_str();

  std::string report_path, proj = "0,1";
  auto* report_cmd = app.add_subcommand("report", "project a dumped complex onto 2 or 3 coordinates");
  report_cmd->add_option("complex", report_path, "complex.json")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--proj", proj, "0-based axes, e.g. 0,1 or 0,1,2")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*cert_cmd) return certify(n, valuations, equations, mode, jobs, unsafe, force, out);
  if (*verify_cmd) return verify(cert_path, complex_path);
  if (*eq_cmd) {
    char* text = nullptr;
    tc_status st = tc_equations(eq_n, eq_families.c_str(), dump.c_str(), &text);
    return print_owned(st, text);
  }
  char* text = nullptr;
  tc_status st = tc_project(report_path.c_str(), proj.c_str(), &text);
  return print_owned(st, text);
}
