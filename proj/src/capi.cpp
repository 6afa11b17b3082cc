#include "spcalc.h"

#include <cstring>
#include <string>

#include "json.hpp"
#include "spcalc/harness.hpp"

using namespace spcalc;

struct spcalc_grid {
  GridSpec g;
};
struct spcalc_field {
  Field f;
};
struct spcalc_operator {
  LinOpPtr op;
};

namespace {

thread_local std::string g_last_error;

spcalc_status status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Shape:
      return SPCALC_ERR_SHAPE;
    case ErrorCode::Parameter:
      return SPCALC_ERR_PARAMETER;
    case ErrorCode::Geometry:
      return SPCALC_ERR_GEOMETRY;
    case ErrorCode::Domain:
      return SPCALC_ERR_DOMAIN;
    case ErrorCode::Smoothness:
      return SPCALC_ERR_SMOOTHNESS;
    case ErrorCode::Size:
      return SPCALC_ERR_SIZE;
    case ErrorCode::Convergence:
      return SPCALC_ERR_CONVERGENCE;
    case ErrorCode::Lookup:
      return SPCALC_ERR_LOOKUP;
    case ErrorCode::Config:
      return SPCALC_ERR_CONFIG;
    case ErrorCode::Io:
      return SPCALC_ERR_IO;
    default:
      return SPCALC_ERR_INTERNAL;
  }
}

template <typename Fn>
spcalc_status guarded(Fn&& fn) {
  try {
    fn();
    return SPCALC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPCALC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SPCALC_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Params params_from_json(const char* text) {
  Params p;
  if (!text || !*text) return p;
  nlohmann::json j = nlohmann::json::parse(text);
  require(j.is_object(), ErrorCode::Config, "parameter JSON must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    require(it.value().is_number(), ErrorCode::Config,
            "parameter '" + it.key() + "' must be numeric");
    p[it.key()] = it.value().get<double>();
  }
  return p;
}

std::vector<double> beta_vec(const double* beta, int len, int d) {
  std::vector<double> b(d, 0.0);
  b[0] = 1.0;
  if (beta && len > 0) {
    require(len == d, ErrorCode::Parameter, "beta length must equal d");
    b.assign(beta, beta + len);
  }
  return b;
}

}  // namespace

extern "C" {

const char* spcalc_version(void) { return "spcalc 1.0.0"; }

const char* spcalc_last_error(void) { return g_last_error.c_str(); }

void spcalc_string_free(char* s) { std::free(s); }

spcalc_status spcalc_grid_create_wavetrain(int d, double L, int Nx, int Kmax,
                                           spcalc_grid** out) {
  return guarded([&] { *out = new spcalc_grid{GridSpec::wavetrain(d, L, Nx, Kmax)}; });
}

spcalc_status spcalc_grid_create_pulse(int d, double L, int Nx, double Theta, int Ntheta,
                                       spcalc_grid** out) {
  return guarded(
      [&] { *out = new spcalc_grid{GridSpec::pulse(d, L, Nx, Theta, Ntheta)}; });
}

void spcalc_grid_destroy(spcalc_grid* g) { delete g; }

spcalc_status spcalc_grid_describe(const spcalc_grid* g, char** out) {
  return guarded([&] { *out = dup_string(g->g.describe()); });
}

spcalc_status spcalc_field_random(const spcalc_grid* g, int ncomp, uint64_t seed,
                                  spcalc_field** out) {
  return guarded([&] { *out = new spcalc_field{random_field(g->g, ncomp, seed)}; });
}

spcalc_status spcalc_field_load(const char* path, spcalc_field** out) {
  return guarded([&] { *out = new spcalc_field{load_field_file(path)}; });
}

spcalc_status spcalc_field_save(const spcalc_field* f, const char* path) {
  return guarded([&] { save_field_file(f->f, path); });
}

void spcalc_field_destroy(spcalc_field* f) { delete f; }

spcalc_status spcalc_field_grid(const spcalc_field* f, spcalc_grid** out) {
  return guarded([&] { *out = new spcalc_grid{f->f.grid}; });
}

spcalc_status spcalc_field_l2_norm(const spcalc_field* f, double* out) {
  return guarded([&] { *out = f->f.l2_norm(); });
}

spcalc_status spcalc_field_parseval_defect(const spcalc_field* f, double* out) {
  return guarded([&] { *out = parseval_defect(f->f); });
}

spcalc_status spcalc_field_sobolev_norm(const spcalc_field* f, double s, double gamma,
                                        double* out) {
  return guarded([&] { *out = sobolev_norm(f->f, s, gamma); });
}

spcalc_status spcalc_field_singular_norm(const spcalc_field* f, double s, double gamma,
                                         double eps, const double* beta, int beta_len,
                                         double* out) {
  return guarded([&] {
    NormParams p{s, gamma, eps, beta_vec(beta, beta_len, f->f.grid.d)};
    *out = singular_norm(f->f, p);
  });
}

spcalc_status spcalc_operator_create(const spcalc_grid* g, const char* symbol,
                                     const char* symbol_params_json, const char* profile,
                                     const char* profile_params_json, double eps,
                                     double gamma, const double* beta, int beta_len,
                                     spcalc_operator** out) {
  return guarded([&] {
    SingularSymbol sym;
    sym.sigma = make_symbol(symbol, params_from_json(symbol_params_json));
    std::string prof = profile ? profile : "zero";
    sym.V = prof == "zero" || prof.empty()
                ? zero_profile(sym.sigma.q)
                : make_profile(prof, params_from_json(profile_params_json), g->g);
    sym.beta = beta_vec(beta, beta_len, g->g.d);
    sym.epsilon = eps;
    sym.gamma = gamma;
    NormParams check{0.0, gamma, eps, sym.beta};
    check.validate(g->g.d);
    *out = new spcalc_operator{make_singular_op(sym, g->g)};
  });
}

void spcalc_operator_destroy(spcalc_operator* op) { delete op; }

spcalc_status spcalc_operator_apply(const spcalc_operator* op, const spcalc_field* in,
                                    spcalc_field** out) {
  return guarded([&] { *out = new spcalc_field{op->op->apply(in->f)}; });
}

spcalc_status spcalc_operator_norm(const spcalc_operator* op, int method, double* out) {
  return guarded([&] {
    *out = operator_norm(*op->op,
                         method == 1 ? NormMethod::DenseSVD : NormMethod::PowerIteration);
  });
}

spcalc_status spcalc_operator_descriptor(const spcalc_operator* op, char** out) {
  return guarded([&] { *out = dup_string(op->op->descriptor()); });
}

spcalc_status spcalc_catalog_text(char** out) {
  return guarded([&] { *out = dup_string(list_catalog_text()); });
}

spcalc_status spcalc_catalog_json(char** out) {
  return guarded([&] { *out = dup_string(list_catalog_json()); });
}

spcalc_status spcalc_run_suite(const char* config_path, const char* out_dir,
                               int jobs_override, long long seed_override,
                               const char* oracle_override, int* run_exit) {
  return guarded([&] {
    ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    if (out_dir && *out_dir) cfg.out_dir = out_dir;
    if (jobs_override > 0) cfg.jobs = jobs_override;
    if (seed_override >= 0) {
      cfg.seed = std::uint64_t(seed_override);
      cfg.context.seed = cfg.seed;
    }
    if (oracle_override && *oracle_override) {
      cfg.oracle = oracle_override;
      require(cfg.oracle == "on" || cfg.oracle == "off" || cfg.oracle == "auto",
              ErrorCode::Config, "oracle must be on|off|auto");
      if (cfg.oracle == "off") cfg.context.opt.method = NormMethod::PowerIteration;
    }
    RunResult res = run_suite(cfg);
    *run_exit = res.exit_code;
  });
}

spcalc_status spcalc_compare_runs(const char* dir_a, const char* dir_b,
                                  char** report_out, int* diff_exit) {
  return guarded([&] {
    CompareResult res = compare_runs(dir_a, dir_b);
    require(res.exit_code != 2, ErrorCode::Io, "missing or corrupt run directory");
    *report_out = dup_string(res.text);
    *diff_exit = res.exit_code;
  });
}

}  // extern "C"
