#include "spcalc/norms.hpp"

#include <cmath>

namespace spcalc {

void NormParams::validate(int d) const {
  require(gamma >= 1.0, ErrorCode::Parameter, "gamma must be >= 1");
  require(epsilon > 0.0 && epsilon <= 1.0, ErrorCode::Parameter, "epsilon must be in (0,1]");
  require(int(beta.size()) == d, ErrorCode::Parameter, "beta dimension mismatch");
  double b = 0.0;
  for (double bj : beta) b += bj * bj;
  require(b > 0.0, ErrorCode::Parameter, "beta must be nonzero");
}

double singular_shift_sq(const GridSpec& g, int n_spatial, int jk,
                         const std::vector<double>& beta, double eps) {
  auto xi = g.freq_xi(n_spatial);
  double kappa = g.mode_k_phase(jk);
  double s = 0.0;
  for (int a = 0; a < g.d; ++a) {
    double z = xi[a] + kappa * beta[a] / eps;
    s += z * z;
  }
  return s;
}

double sobolev_norm(const Field& u, double s, double gamma) {
  require(gamma >= 1.0, ErrorCode::Parameter, "gamma must be >= 1");
  const GridSpec& g = u.grid;
  SpectralField U = forward_transform(u);
  double acc = 0.0;
  for (int n = 0; n < g.spatial_points(); ++n) {
    auto xi = g.freq_xi(n);
    double xi2 = 0.0;
    for (int a = 0; a < g.d; ++a) xi2 += xi[a] * xi[a];
    for (int jk = 0; jk < g.theta_modes(); ++jk) {
      double k = g.mode_k_sobolev(jk);
      double w = std::pow(gamma * gamma + k * k + xi2, s);
      int f = g.mode_index(n, jk);
      for (int c = 0; c < U.ncomp; ++c) acc += w * std::norm(U.at(f, c));
    }
  }
  return std::sqrt(acc * g.weight_spec());
}

double singular_norm(const SpectralField& U, const NormParams& p) {
  const GridSpec& g = U.grid;
  p.validate(g.d);
  double acc = 0.0;
  for (int n = 0; n < g.spatial_points(); ++n) {
    for (int jk = 0; jk < g.theta_modes(); ++jk) {
      double z2 = singular_shift_sq(g, n, jk, p.beta, p.epsilon);
      double w = std::pow(p.gamma * p.gamma + z2, p.s);
      int f = g.mode_index(n, jk);
      for (int c = 0; c < U.ncomp; ++c) acc += w * std::norm(U.at(f, c));
    }
  }
  return std::sqrt(acc * g.weight_spec());
}

double singular_norm(const Field& u, const NormParams& p) {
  return singular_norm(forward_transform(u), p);
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// enumerate multi-indices alpha in N^d with |alpha| <= m
void enumerate_multi(int d, int m, std::vector<std::vector<int>>& out,
                     std::vector<int>& cur, int axis, int remaining) {
  if (axis == d) {
    out.push_back(cur);
    return;
  }
  for (int a = 0; a <= remaining; ++a) {
    cur[axis] = a;
    enumerate_multi(d, m, out, cur, axis + 1, remaining - a);
  }
}

}  // namespace

double singular_norm_via_derivatives(const Field& u, int m, const NormParams& p) {
  require(m >= 0, ErrorCode::Parameter, "derivative order m must be a nonnegative integer");
  const GridSpec& g = u.grid;
  p.validate(g.d);
  SpectralField U = forward_transform(u);

  std::vector<std::vector<int>> alphas;
  std::vector<int> cur(g.d, 0);
  enumerate_multi(g.d, m, alphas, cur, 0, m);

  // (gamma^2 + |zeta|^2)^m = sum_{|alpha|+r=m} m!/(alpha! r!) gamma^{2r} prod zeta_a^{2 alpha_a}
  double acc = 0.0;
  for (const auto& alpha : alphas) {
    int order = 0;
    double denom = 1.0;
    for (int a = 0; a < g.d; ++a) {
      order += alpha[a];
      denom *= factorial(alpha[a]);
    }
    int r = m - order;
    double weight = factorial(m) / (denom * factorial(r));
    double gpow = std::pow(p.gamma, 2.0 * r);

    double term = 0.0;
    for (int n = 0; n < g.spatial_points(); ++n) {
      auto xi = g.freq_xi(n);
      for (int jk = 0; jk < g.theta_modes(); ++jk) {
        double kappa = g.mode_k_phase(jk);
        double mult = 1.0;
        for (int a = 0; a < g.d; ++a) {
          double z = xi[a] + kappa * p.beta[a] / p.epsilon;
          for (int q = 0; q < alpha[a]; ++q) mult *= z * z;
        }
        int f = g.mode_index(n, jk);
        for (int c = 0; c < U.ncomp; ++c) term += mult * std::norm(U.at(f, c));
      }
    }
    acc += weight * gpow * term;
  }
  return std::sqrt(acc * g.weight_spec());
}

}  // namespace spcalc
