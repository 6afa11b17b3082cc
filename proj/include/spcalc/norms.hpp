#pragma once

#include "spcalc/field.hpp"

namespace spcalc {

// Parameters of the singular anisotropic norms: s, gamma >= 1, eps in (0,1],
// beta != 0 fixed once per experiment.
struct NormParams {
  double s = 0.0;
  double gamma = 1.0;
  double epsilon = 1.0;
  std::vector<double> beta{1.0};

  void validate(int d) const;
};

// Shifted frequency zeta = xi + kappa * beta / eps at mode slot (n, jk).
// |zeta|^2 appears in every singular weight.
double singular_shift_sq(const GridSpec& g, int n_spatial, int jk,
                         const std::vector<double>& beta, double eps);

// ||u||_{s,gamma}: weight (gamma^2 + k^2 + |xi|^2)^s on the mixed lattice.
double sobolev_norm(const Field& u, double s, double gamma);

// ||u||_{H^{s,eps},gamma}: weight (gamma^2 + |xi + kappa beta/eps|^2)^s.
double singular_norm(const Field& u, const NormParams& p);
double singular_norm(const SpectralField& U, const NormParams& p);

// Equivalent integer-order norm via gamma-weighted singular derivatives with
// exact multinomial weights; agrees with singular_norm(s=m) identically.
double singular_norm_via_derivatives(const Field& u, int m, const NormParams& p);

}  // namespace spcalc
