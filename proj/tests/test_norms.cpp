#include <cmath>

#include "doctest.h"
#include "spcalc/norms.hpp"

using namespace spcalc;

namespace {

const GridSpec kWav = GridSpec::wavetrain(1, kPi, 16, 4);
const GridSpec kPul = GridSpec::pulse(1, kPi, 16, 8.0, 16);

Field plane_wave(const GridSpec& g, int n0_signed, int k0_signed) {
  Field u(g, 1);
  for (int m = 0; m < g.spatial_points(); ++m) {
    auto x = g.point_x(m);
    for (int j = 0; j < g.theta_points(); ++j) {
      double kappa = g.geometry == Geometry::Wavetrain ? kTwoPi * k0_signed
                                                       : k0_signed * g.dk();
      u.at(g.point_index(m, j)) =
          std::polar(1.0, x[0] * n0_signed * g.dxi() + kappa * g.theta_coord(j));
    }
  }
  return u;
}

}  // namespace

TEST_CASE("s=0 norms all coincide with the L2 norm") {
  int seed = 5;
  for (const GridSpec& g : {kWav, kPul}) {
    Field u = random_field(g, 1, seed++);
    double l2 = u.l2_norm();
    CHECK(sobolev_norm(u, 0.0, 1.0) == doctest::Approx(l2).epsilon(1e-12));
    CHECK(sobolev_norm(u, 0.0, 37.0) == doctest::Approx(l2).epsilon(1e-12));
    for (double gamma : {1.0, 4.0, 64.0})
      for (double eps : {1.0, 1.0 / 16, 1.0 / 256}) {
        NormParams p{0.0, gamma, eps, {1.0}};
        CHECK(singular_norm(u, p) == doctest::Approx(l2).epsilon(1e-12));
      }
  }
}

TEST_CASE("plane wave norms match the single-term weights") {
  const GridSpec& g = kWav;
  int n0 = 2, k0 = 1;
  Field u = plane_wave(g, n0, k0);
  double l2 = u.l2_norm();
  double xi0 = n0 * g.dxi();

  double w = std::sqrt(9.0 + double(k0 * k0) + xi0 * xi0);  // gamma = 3
  CHECK(sobolev_norm(u, 1.0, 3.0) == doctest::Approx(w * l2).epsilon(1e-12));

  for (double eps : {1.0, 0.125}) {
    NormParams p{1.0, 3.0, eps, {1.0}};
    double shifted = xi0 + kTwoPi * k0 / eps;
    double expect = std::sqrt(9.0 + shifted * shifted) * l2;
    CHECK(singular_norm(u, p) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("pulse plane wave singular norm") {
  const GridSpec& g = kPul;
  int k0 = 3;
  Field u = plane_wave(g, 0, k0);
  double l2 = u.l2_norm();
  NormParams p{1.0, 2.0, 0.25, {1.0}};
  double shifted = k0 * g.dk() / 0.25;  // xi = 0, shift k*beta/eps
  CHECK(singular_norm(u, p) ==
        doctest::Approx(std::sqrt(4.0 + shifted * shifted) * l2).epsilon(1e-12));
}

TEST_CASE("theta-independent fields see no beta shift") {
  const GridSpec& g = kWav;
  Field u = plane_wave(g, 3, 0);
  for (double eps : {1.0, 1.0 / 64}) {
    NormParams p{2.0, 5.0, eps, {1.0}};
    double xi0 = 3 * g.dxi();
    double expect = std::pow(25.0 + xi0 * xi0, 1.0) * u.l2_norm();
    CHECK(singular_norm(u, p) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("gamma-independence at s=0 and weight positivity") {
  Field u = random_field(kWav, 1, 99);
  NormParams a{0.0, 1.0, 0.25, {1.0}};
  NormParams b{0.0, 64.0, 0.25, {1.0}};
  CHECK(std::abs(singular_norm(u, a) - singular_norm(u, b)) < 1e-12);

  Field z(kWav, 1);
  NormParams p{1.5, 2.0, 0.5, {1.0}};
  CHECK(singular_norm(z, p) == 0.0);
  CHECK(singular_norm(u, p) > 0.0);
}

TEST_CASE("gamma^s lower bound for s >= 0") {
  int seed = 40;
  for (const GridSpec& g : {kWav, kPul}) {
    for (int rep = 0; rep < 5; ++rep) {
      Field u = random_field(g, 1, seed++);
      for (double s : {0.5, 1.0, 2.0})
        for (double gamma : {1.0, 8.0, 64.0}) {
          NormParams p{s, gamma, 0.0625, {1.0}};
          CHECK(singular_norm(u, p) >= std::pow(gamma, s) * u.l2_norm() * (1 - 1e-12));
        }
    }
  }
}

TEST_CASE("monotone in s on a fixed field") {
  Field u = random_field(kPul, 1, 300);
  NormParams p{0.0, 2.0, 0.5, {1.0}};
  double prev = singular_norm(u, p);
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    p.s = s;
    double cur = singular_norm(u, p);
    CHECK(cur >= prev * (1 - 1e-12));
    prev = cur;
  }
}

TEST_CASE("derivative characterization agrees exactly with the spectral norm") {
  int seed = 60;
  for (const GridSpec& g : {kWav, kPul}) {
    for (int m : {0, 1, 2, 3}) {
      Field u = random_field(g, 1, seed++);
      NormParams p{double(m), 4.0, 0.125, {1.0}};
      double spectral = singular_norm(u, p);
      double deriv = singular_norm_via_derivatives(u, m, p);
      CHECK(deriv == doctest::Approx(spectral).epsilon(1e-10));
    }
  }
}

TEST_CASE("m=0 and zero-field edge cases of the derivative route") {
  Field u = random_field(kWav, 1, 61);
  NormParams p{0.0, 2.0, 0.5, {1.0}};
  CHECK(singular_norm_via_derivatives(u, 0, p) ==
        doctest::Approx(u.l2_norm()).epsilon(1e-12));
  Field z(kWav, 1);
  CHECK(singular_norm_via_derivatives(z, 1, p) == 0.0);
}

TEST_CASE("parameter validation") {
  Field u = random_field(kWav, 1, 62);
  CHECK_THROWS_AS(sobolev_norm(u, 1.0, 0.5), Error);
  NormParams bad_gamma{1.0, 0.5, 0.5, {1.0}};
  CHECK_THROWS_AS(singular_norm(u, bad_gamma), Error);
  NormParams bad_eps{1.0, 2.0, 1.5, {1.0}};
  CHECK_THROWS_AS(singular_norm(u, bad_eps), Error);
  NormParams bad_beta{1.0, 2.0, 0.5, {0.0}};
  CHECK_THROWS_AS(singular_norm(u, bad_beta), Error);
  CHECK_THROWS_AS(singular_norm_via_derivatives(u, -1, bad_beta), Error);
}

TEST_CASE("d=2 singular norm with a two-component beta") {
  GridSpec g = GridSpec::wavetrain(2, kPi, 8, 2);
  Field u = random_field(g, 1, 63);
  NormParams p{1.0, 2.0, 0.25, {1.0, -0.5}};
  double spectral = singular_norm(u, p);
  double deriv = singular_norm_via_derivatives(u, 1, p);
  CHECK(deriv == doctest::Approx(spectral).epsilon(1e-10));
}
