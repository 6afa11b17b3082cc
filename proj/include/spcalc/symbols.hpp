#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "spcalc/grid.hpp"
#include "spcalc/norms.hpp"

namespace spcalc {

using Params = std::map<std::string, double>;

// sigma(v, zeta, gamma) with the decay structure of the class S^m: every
// zeta-derivative of order |nu| is O((gamma^2+|zeta|^2)^{(m-|nu|)/2}) on
// compact v-sets.
struct BaseSymbol {
  std::string name;
  double degree = 0.0;
  int q = 1;       // dimension of the placeholder v
  int ncomp = 1;   // N (matrix dimension of the values)
  double domain_radius = 1.0;  // radius of the open set O around 0
  bool v_dependent = true;
  bool xi_dependent = true;

  std::function<CMat(std::span<const double> v, std::span<const double> zeta, double gamma)> eval;
  // optional analytic first derivatives (axis indexes v resp. zeta)
  std::function<CMat(int axis, std::span<const double> v, std::span<const double> zeta, double gamma)> dv;
  std::function<CMat(int axis, std::span<const double> v, std::span<const double> zeta, double gamma)> dxi;
};

// Amplitude-shaped symbol sigma(v, w, zeta, gamma); w is the slot composed
// with the incoming-point profile W(y, omega).
struct AmplitudeSymbol {
  std::string name;
  double degree = 0.0;
  int qv = 1, qw = 1;
  int ncomp = 1;
  double domain_radius = 1.0;
  bool w_dependent = true;
  bool xi_dependent = true;

  std::function<CMat(std::span<const double> v, std::span<const double> w,
                     std::span<const double> zeta, double gamma)>
      eval;
  // analytic d/dw_axis, required by the remainder decomposition
  std::function<CMat(int axis, std::span<const double> v, std::span<const double> w,
                     std::span<const double> zeta, double gamma)>
      dw;

  // optional rank decomposition sigma = sum_r fv_r(v) * gw_r(w) * mult_r(zeta,gamma)
  // (scalar v/w factors, matrix-valued multiplier); enables fast assembly of
  // the associated oscillatory operators on sweep grids.
  struct SepTerm {
    std::function<cplx(std::span<const double> v)> fv;  // nullptr = 1
    std::function<cplx(std::span<const double> w)> gw;  // nullptr = 1
    std::function<CMat(std::span<const double> zeta, double gamma)> mult;
  };
  std::vector<SepTerm> separable;
};

// Bounded profile substituted into the v-slot; evaluable off-grid so that
// finite differences and Taylor paths make sense.
struct Profile {
  std::string name;
  int q = 1;
  double value_set_radius = 0.5;
  int smoothness = 99;   // number of bounded derivatives certified
  bool weighted = false; // pulse case: <theta> V bounded

  std::function<void(std::span<const double> x, double theta, std::span<double> out)> eval;
  // analytic derivative of component `comp` in direction `dir`
  // (dir in [0, d): spatial axis; dir == d: theta)
  std::function<double(int comp, int dir, std::span<const double> x, double theta)> grad;

  void values_at(std::span<const double> x, double theta, std::span<double> out) const {
    if (!eval) {
      for (auto& t : out) t = 0.0;
      return;
    }
    eval(x, theta, out);
  }
  bool is_zero() const { return !eval; }
};

Profile zero_profile(int q = 1);

// a_{eps,gamma}(x,theta,xi,k) = sigma(eps V(x,theta), xi + kappa beta/eps, gamma)
struct SingularSymbol {
  BaseSymbol sigma;
  Profile V;
  std::vector<double> beta;
  double epsilon = 1.0;
  double gamma = 1.0;

  int ncomp() const { return sigma.ncomp; }
  // zeta = xi + kappa*beta/eps with kappa the phase frequency of the mode
  CMat evaluate(std::span<const double> x, double theta, std::span<const double> xi,
                double kappa) const;
  CMat evaluate_shifted(std::span<const double> x, double theta,
                        std::span<const double> zeta) const;
  void profile_values(std::span<const double> x, double theta, std::span<double> v) const;
  std::string describe() const;
};

struct SingularAmplitude {
  AmplitudeSymbol sigma;
  Profile V, W;
  std::vector<double> beta;
  double epsilon = 1.0;
  double gamma = 1.0;

  int ncomp() const { return sigma.ncomp; }
  CMat evaluate(std::span<const double> x, double theta, std::span<const double> y,
                double omega, std::span<const double> xi, double kappa) const;
  // directional derivative in the incoming point: d/dy_dir (dir==d: d/domega)
  CMat d_incoming(int dir, std::span<const double> x, double theta,
                  std::span<const double> y, double omega, std::span<const double> xi,
                  double kappa) const;
  bool separable() const { return !sigma.separable.empty(); }
  std::string describe() const;
};

// Extended class eS^m of sigma(v, xi, zeta, gamma), zeta in R^{2d}; quantized
// through the substitution zeta -> (xi, kappa beta / eps).
struct ExtendedSymbol {
  std::string name;
  double degree = 0.0;
  int q = 1;
  int ncomp = 1;
  std::function<CMat(std::span<const double> v, std::span<const double> xi,
                     std::span<const double> zeta1, std::span<const double> zeta2,
                     double gamma)>
      eval;
};

CMat evaluate_extended(const ExtendedSymbol& es, const Profile& V,
                       const std::vector<double>& beta, double eps, double gamma,
                       std::span<const double> x, double theta,
                       std::span<const double> xi, double kappa);

// Smooth frequency cut-off on the ratio |zeta1|/|zeta2|: 1 for ratio <= 1/4,
// 0 for ratio >= 1/2; value 1 at zeta1 = zeta2 = 0.
double extended_cutoff(std::span<const double> zeta1, std::span<const double> zeta2);
ExtendedSymbol make_extended_cutoff(int d);

// ---------------------------------------------------------------------------
// Seminorms

enum class SeminormMode { Pseudo, Amp, PulsePseudo, PulseAmpK, PulseAmpNoK };

struct SeminormOptions {
  int grid_samples = 8;   // per continuous direction (before refinement)
  int freq_samples = 7;   // per frequency axis
  int refine = 4;         // sub-step refinement of the probe lattice
  double fd_step = 1e-4;  // centered difference step in x/theta directions
};

// Proxy sup over the probe lattice of the derivative family required by the
// mode, with Japanese-bracket weights in the pulse modes.
double symbol_seminorm(const SingularSymbol& sym, const GridSpec& grid,
                       SeminormMode mode, const SeminormOptions& opt = {});
double amplitude_seminorm(const SingularAmplitude& amp, const GridSpec& grid,
                          SeminormMode mode, const SeminormOptions& opt = {});

// ---------------------------------------------------------------------------
// Decay check of Definition-1 type bounds

struct DecayEntry {
  std::vector<int> alpha;  // v-orders
  std::vector<int> nu;     // zeta-orders
  double sup_base = 0.0;
  double sup_refined = 0.0;
  double ratio = 0.0;
  bool pass = false;
};

struct DecayReport {
  std::string symbol;
  std::vector<DecayEntry> entries;
  bool pass = false;
};

// Samples (gamma^2+|zeta|^2)^{-(m-|nu|)/2} |d_v^alpha d_zeta^nu sigma| on a
// log frequency lattice and a lattice in the v-ball; PASS when the refined
// sup stays within ratio 1.5 of the base sup for every order.
DecayReport decay_check(const BaseSymbol& sigma, double k_radius, int max_order,
                        int d);

// ---------------------------------------------------------------------------
// Catalog

struct CatalogEntry {
  std::string name;
  std::string kind;  // "symbol" | "amplitude" | "profile"
  Params defaults;
  std::string doc;
};

std::vector<CatalogEntry> catalog_entries();
BaseSymbol make_symbol(const std::string& name, const Params& params = {});
AmplitudeSymbol make_amplitude(const std::string& name, const Params& params = {});
// Profiles need the box geometry to fix their length scales.
Profile make_profile(const std::string& name, const Params& params, const GridSpec& grid);

}  // namespace spcalc
