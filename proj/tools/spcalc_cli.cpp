// Batch front-end for the singular-calculus verification library. Talks to
// the core exclusively through the C API in spcalc.h.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spcalc.h"

namespace {

int exit_code_for(spcalc_status st) {
  switch (st) {
    case SPCALC_OK:
      return 0;
    case SPCALC_ERR_CONFIG:
    case SPCALC_ERR_IO:
      return 2;
    case SPCALC_ERR_LOOKUP:
      return 3;
    case SPCALC_ERR_CONVERGENCE:
      return 4;
    default:
      return 5;
  }
}

int fail_with(spcalc_status st) {
  std::fprintf(stderr, "error: %s\n", spcalc_last_error());
  return exit_code_for(st);
}

int default_jobs() {
  if (const char* env = std::getenv("SPCALC_JOBS")) {
    int j = std::atoi(env);
    if (j > 0) return j;
  }
  return 1;
}

std::string params_json(const std::vector<std::string>& kv) {
  if (kv.empty()) return "";
  std::string out = "{";
  for (std::size_t i = 0; i < kv.size(); ++i) {
    auto pos = kv[i].find('=');
    if (pos == std::string::npos) {
      std::fprintf(stderr, "error: parameter '%s' is not key=value\n", kv[i].c_str());
      std::exit(2);
    }
    if (i) out += ",";
    out += "\"" + kv[i].substr(0, pos) + "\":" + kv[i].substr(pos + 1);
  }
  return out + "}";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spcalc: singular pseudodifferential calculus verification harness"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a verification suite from a config file");
  std::string config_path, out_dir, oracle;
  long long seed = -1;
  int jobs = 0;
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--seed", seed, "random seed (overrides config)");
  run->add_option("--jobs", jobs, "worker count (default: SPCALC_JOBS or 1)");
  run->add_option("--oracle", oracle, "on|off|auto (overrides config)");

  // list
  auto* list = app.add_subcommand("list", "list catalog symbols, profiles, estimates");
  bool as_json = false;
  list->add_flag("--json", as_json, "machine-readable listing");

  // compare
  auto* cmp = app.add_subcommand("compare", "compare two completed run directories");
  std::string dir_a, dir_b;
  cmp->add_option("dirA", dir_a)->required();
  cmp->add_option("dirB", dir_b)->required();

  // norms
  auto* norms = app.add_subcommand("norms", "evaluate norms of a stored field");
  std::string field_path;
  double ns = 0.0, ngamma = 1.0, neps = 1.0;
  std::vector<double> nbeta;
  norms->add_option("--field", field_path, "field file")->required();
  norms->add_option("--s", ns, "Sobolev index");
  norms->add_option("--gamma", ngamma, "gamma >= 1");
  norms->add_option("--eps", neps, "eps in (0,1]");
  norms->add_option("--beta", nbeta, "beta vector (defaults to e_1)");

  // apply
  auto* apply = app.add_subcommand("apply", "apply a catalog operator to a field");
  std::string a_field, a_symbol, a_profile = "zero", a_out;
  std::vector<std::string> a_params, a_profile_params;
  double a_eps = 1.0, a_gamma = 1.0;
  std::vector<double> a_beta;
  apply->add_option("--field", a_field, "input field file")->required();
  apply->add_option("--symbol", a_symbol, "catalog symbol name")->required();
  apply->add_option("--param", a_params, "symbol parameter key=value (repeatable)");
  apply->add_option("--profile", a_profile, "catalog profile name (default: zero)");
  apply->add_option("--profile-param", a_profile_params, "profile parameter key=value");
  apply->add_option("--eps", a_eps, "eps in (0,1]");
  apply->add_option("--gamma", a_gamma, "gamma >= 1");
  apply->add_option("--beta", a_beta, "beta vector (defaults to e_1)");
  apply->add_option("--out", a_out, "output field file")->required();

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    int run_exit = 0;
    int j = jobs > 0 ? jobs : default_jobs();
    spcalc_status st =
        spcalc_run_suite(config_path.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                         j, seed, oracle.empty() ? nullptr : oracle.c_str(), &run_exit);
    if (st != SPCALC_OK) return fail_with(st);
    std::printf("%s\n", run_exit == 0 ? "all selected estimates PASS"
                                      : "some estimates FAILED");
    return run_exit;
  }

  if (*list) {
    char* text = nullptr;
    spcalc_status st = as_json ? spcalc_catalog_json(&text) : spcalc_catalog_text(&text);
    if (st != SPCALC_OK) return fail_with(st);
    std::printf("%s\n", text);
    spcalc_string_free(text);
    return 0;
  }

  if (*cmp) {
    char* text = nullptr;
    int diff = 0;
    spcalc_status st = spcalc_compare_runs(dir_a.c_str(), dir_b.c_str(), &text, &diff);
    if (st != SPCALC_OK) return fail_with(st);
    std::printf("%s", text);
    spcalc_string_free(text);
    return diff;
  }

  if (*norms) {
    spcalc_field* f = nullptr;
    spcalc_status st = spcalc_field_load(field_path.c_str(), &f);
    if (st != SPCALC_OK) return fail_with(st);
    double l2 = 0, sob = 0, sing = 0;
    st = spcalc_field_l2_norm(f, &l2);
    if (st == SPCALC_OK) st = spcalc_field_sobolev_norm(f, ns, ngamma, &sob);
    if (st == SPCALC_OK)
      st = spcalc_field_singular_norm(f, ns, ngamma, neps,
                                      nbeta.empty() ? nullptr : nbeta.data(),
                                      int(nbeta.size()), &sing);
    double pv = 0;
    if (st == SPCALC_OK) st = spcalc_field_parseval_defect(f, &pv);
    spcalc_field_destroy(f);
    if (st != SPCALC_OK) return fail_with(st);
    std::printf("l2 %.17g\n", l2);
    std::printf("sobolev(s=%g,gamma=%g) %.17g\n", ns, ngamma, sob);
    std::printf("singular(s=%g,gamma=%g,eps=%g) %.17g\n", ns, ngamma, neps, sing);
    std::printf("parseval_defect %.17g\n", pv);
    return 0;
  }

  if (*apply) {
    spcalc_field* f = nullptr;
    spcalc_status st = spcalc_field_load(a_field.c_str(), &f);
    if (st != SPCALC_OK) return fail_with(st);
    spcalc_grid* g = nullptr;
    st = spcalc_field_grid(f, &g);
    if (st != SPCALC_OK) {
      spcalc_field_destroy(f);
      return fail_with(st);
    }
    spcalc_operator* op = nullptr;
    st = spcalc_operator_create(g, a_symbol.c_str(), params_json(a_params).c_str(),
                                a_profile.c_str(), params_json(a_profile_params).c_str(),
                                a_eps, a_gamma, a_beta.empty() ? nullptr : a_beta.data(),
                                int(a_beta.size()), &op);
    if (st != SPCALC_OK) {
      spcalc_field_destroy(f);
      spcalc_grid_destroy(g);
      return fail_with(st);
    }
    spcalc_field* result = nullptr;
    st = spcalc_operator_apply(op, f, &result);
    if (st == SPCALC_OK) st = spcalc_field_save(result, a_out.c_str());
    char* desc = nullptr;
    if (st == SPCALC_OK && spcalc_operator_descriptor(op, &desc) == SPCALC_OK) {
      std::printf("applied %s -> %s\n", desc, a_out.c_str());
      spcalc_string_free(desc);
    }
    spcalc_field_destroy(result);
    spcalc_field_destroy(f);
    spcalc_operator_destroy(op);
    spcalc_grid_destroy(g);
    return st == SPCALC_OK ? 0 : fail_with(st);
  }

  return 0;
}
