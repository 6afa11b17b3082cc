#include <cmath>

#include "doctest.h"
#include "spcalc/symbols.hpp"

using namespace spcalc;

namespace {

const GridSpec kWav = GridSpec::wavetrain(1, kPi, 16, 4);
const GridSpec kPul = GridSpec::pulse(1, kPi, 16, 8.0, 16);

SingularSymbol sing(const std::string& name, const Params& pars, const std::string& prof,
                    double eps, double gamma, const GridSpec& g) {
  SingularSymbol s;
  s.sigma = make_symbol(name, pars);
  s.V = make_profile(prof, {}, g);
  s.beta = {1.0};
  s.epsilon = eps;
  s.gamma = gamma;
  return s;
}

}  // namespace

TEST_CASE("singular evaluation composes profile and frequency shift") {
  SingularSymbol one = sing("identity", {}, "coscos", 0.5, 2.0, kWav);
  double x[1] = {0.3};
  double xi[1] = {1.0};
  CHECK(std::abs(one.evaluate(x, 0.2, xi, kTwoPi).v[0] - cplx(1.0)) < 1e-15);

  // sigma = i xi_1 at xi=0, k=1, wavetrain: value 2 pi i beta / eps
  SingularSymbol d = sing("ixi1", {}, "zero", 0.25, 1.0, kWav);
  double zero[1] = {0.0};
  cplx val = d.evaluate(zero, 0.0, zero, kTwoPi).v[0];
  CHECK(std::abs(val - cplx(0.0, kTwoPi / 0.25)) < 1e-12);

  // bracket(-1) at large k decays like eps/(2 pi k |beta|)
  SingularSymbol br = sing("bracket", {{"m", -1.0}}, "zero", 0.0625, 1.0, kWav);
  int k = 64;
  cplx w = br.evaluate(zero, 0.0, zero, kTwoPi * k).v[0];
  double expect = 1.0 / std::sqrt(1.0 + std::pow(kTwoPi * k / 0.0625, 2.0));
  CHECK(std::abs(w.real() - expect) < 1e-15);
  CHECK(expect < 0.0625 / (kTwoPi * k) * 1.0001);
}

TEST_CASE("profile values stay in K for all eps") {
  for (const char* name : {"coscos", "sinsin"}) {
    Profile V = make_profile(name, {{"r", 0.4}}, kWav);
    for (double eps : {1.0, 0.5, 0.125, 1.0 / 256}) {
      double worst = 0.0;
      for (int m = 0; m < kWav.spatial_points(); ++m) {
        auto x = kWav.point_x(m);
        for (int j = 0; j < kWav.theta_points(); ++j) {
          double v[1];
          V.values_at(std::span<const double>(x.data(), 1), kWav.theta_coord(j), v);
          worst = std::max(worst, std::abs(eps * v[0]));
        }
      }
      CHECK(worst <= V.value_set_radius + 1e-12);
    }
  }
}

TEST_CASE("domain violation raises a domain error") {
  SingularSymbol s = sing("resolvent", {}, "const", 1.0, 1.0, kWav);
  s.V = make_profile("const", {{"r", 1.5}}, kWav);  // outside domain_radius 0.9
  double x[1] = {0.0}, xi[1] = {0.0};
  CHECK_THROWS_AS(s.evaluate(x, 0.0, xi, 0.0), Error);
}

TEST_CASE("seminorm of a constant symbol is its magnitude") {
  SingularSymbol s = sing("identity", {}, "zero", 1.0, 1.0, kWav);
  SeminormOptions opt;
  opt.grid_samples = 3;
  opt.freq_samples = 3;
  opt.refine = 1;
  double nrm = symbol_seminorm(s, kWav, SeminormMode::Pseudo, opt);
  CHECK(nrm == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("seminorm homogeneity and triangle inequality") {
  SeminormOptions opt;
  opt.grid_samples = 3;
  opt.freq_samples = 3;
  opt.refine = 1;
  SingularSymbol a = sing("resolvent", {}, "coscos", 0.5, 2.0, kWav);
  SingularSymbol b = sing("multg", {}, "sinsin", 0.5, 2.0, kWav);
  double na = symbol_seminorm(a, kWav, SeminormMode::Pseudo, opt);
  double nb = symbol_seminorm(b, kWav, SeminormMode::Pseudo, opt);

  SingularSymbol two_a = a;
  two_a.sigma.eval = [inner = a.sigma.eval](std::span<const double> v,
                                            std::span<const double> z, double g) {
    return inner(v, z, g) * cplx(2.0);
  };
  CHECK(symbol_seminorm(two_a, kWav, SeminormMode::Pseudo, opt) ==
        doctest::Approx(2.0 * na).epsilon(1e-9));

  SingularSymbol apb = a;
  apb.sigma.eval = [ea = a.sigma.eval, eb = b.sigma.eval](std::span<const double> v,
                                                          std::span<const double> z,
                                                          double g) {
    return ea(v, z, g) + eb(v, z, g);
  };
  CHECK(symbol_seminorm(apb, kWav, SeminormMode::Pseudo, opt) <= na + nb + 1e-9);
}

TEST_CASE("finite differences track closed-form derivatives") {
  // sigma = e^{i zeta_1} g(x), g from the coscos profile through multg
  SingularSymbol s = sing("multg", {{"a", 1.0}, {"b", 0.0}}, "coscos", 1.0, 1.0, kWav);
  auto base = s.sigma.eval;
  s.sigma.xi_dependent = true;
  s.sigma.eval = [base](std::span<const double> v, std::span<const double> z, double g) {
    return base(v, z, g) * std::polar(1.0, z[0]);
  };
  // FD derivative values agree with the chain rule at sample points, and the
  // probe-lattice sup stays within the analytic sup (proxy, not exact)
  SeminormOptions opt;
  opt.grid_samples = 4;
  opt.freq_samples = 3;
  opt.refine = 2;
  double nrm = symbol_seminorm(s, kWav, SeminormMode::Pseudo, opt);
  Profile V = make_profile("coscos", {}, kWav);
  double analytic = 0.0;
  for (int i = 0; i < 256; ++i) {
    double x[1] = {-kPi + i * kTwoPi / 256};
    for (int j = 0; j < 256; ++j) {
      double th = j / 256.0;
      double v[1];
      V.values_at(x, th, v);
      double dvx = V.grad(0, 0, x, th);
      double dvt = V.grad(0, 1, x, th);
      // g = 1 + v, derivatives through the chain rule (eps = 1)
      analytic = std::max({analytic, std::abs(1.0 + v[0]), std::abs(dvx), std::abs(dvt),
                           std::abs(dvx * dvt)});
    }
  }
  CHECK(nrm <= analytic * (1.0 + 1e-6));
  CHECK(nrm >= 0.9 * analytic);

  // second-order FD convergence against the analytic x-derivative
  double x0[1] = {0.83};
  double th0 = 0.21;
  auto eval_at = [&](double xx) {
    double xv[1] = {xx};
    double v[1];
    V.values_at(xv, th0, v);
    return 1.0 + v[0];
  };
  double exact = V.grad(0, 0, x0, th0);
  double prev_err = -1.0;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    double fd = (eval_at(x0[0] + h) - eval_at(x0[0] - h)) / (2.0 * h);
    double err = std::abs(fd - exact);
    if (prev_err >= 0.0) CHECK(err < 0.3 * prev_err);  // ~4x per halving
    prev_err = err;
  }
  double fd4 = (eval_at(x0[0] + 1e-4) - eval_at(x0[0] - 1e-4)) / 2e-4;
  CHECK(std::abs(fd4 - exact) < 1e-6);
}

TEST_CASE("decay check passes brackets and ixi1, fails e^{|xi|}") {
  BaseSymbol br = make_symbol("bracket", {{"m", 1.0}});
  DecayReport rep = decay_check(br, 0.5, 2, 1);
  CHECK(rep.pass);

  BaseSymbol brm = make_symbol("bracket", {{"m", -1.0}});
  CHECK(decay_check(brm, 0.5, 2, 1).pass);

  BaseSymbol ixi = make_symbol("ixi1");
  DecayReport rix = decay_check(ixi, 0.5, 2, 1);
  CHECK(rix.pass);
  for (const auto& e : rix.entries) {
    int total_nu = 0;
    for (int o : e.nu) total_nu += o;
    if (total_nu == 1) CHECK(e.sup_refined <= 1.0 + 1e-6);
  }

  BaseSymbol bad = make_symbol("expxi");
  CHECK_FALSE(decay_check(bad, 0.5, 1, 1).pass);
}

TEST_CASE("builtin catalog contents and algebraic identities") {
  auto entries = catalog_entries();
  bool has_bracket = false, has_ixi1 = false, has_garding = false;
  for (const auto& e : entries) {
    if (e.name == "bracket") has_bracket = true;
    if (e.name == "ixi1") has_ixi1 = true;
    if (e.name == "garding") has_garding = true;
  }
  CHECK(has_bracket);
  CHECK(has_ixi1);
  CHECK(has_garding);

  CHECK_THROWS_AS(make_symbol("no-such-symbol"), Error);
  CHECK_THROWS_AS(make_profile("no-such-profile", {}, kWav), Error);

  // bracket(0) == 1, bracket(-1)*bracket(1) == 1, resolvent(0,0) == 1
  BaseSymbol b0 = make_symbol("bracket", {{"m", 0.0}});
  BaseSymbol bp = make_symbol("bracket", {{"m", 1.0}});
  BaseSymbol bm = make_symbol("bracket", {{"m", -1.0}});
  BaseSymbol rs = make_symbol("resolvent");
  double v[1] = {0.0};
  for (double z1 : {0.0, 1.5, -40.0})
    for (double gam : {1.0, 8.0}) {
      double z[1] = {z1};
      CHECK(std::abs(b0.eval(v, z, gam).v[0] - cplx(1.0)) < 1e-15);
      cplx prod = bp.eval(v, z, gam).v[0] * bm.eval(v, z, gam).v[0];
      CHECK(std::abs(prod - cplx(1.0)) < 1e-12);
    }
  double z0[1] = {0.0};
  CHECK(std::abs(rs.eval(v, z0, 1.0).v[0] - cplx(1.0)) < 1e-15);
}

TEST_CASE("extended cutoff ranges") {
  double z_zero[1] = {0.0};
  double z_small[1] = {0.1};
  double z_big[1] = {10.0};
  // k = 0: no singular frequency to compare against
  CHECK(extended_cutoff(z_small, z_zero) == 0.0);
  CHECK(extended_cutoff(z_big, z_zero) == 0.0);
  CHECK(extended_cutoff(z_zero, z_zero) == 1.0);
  // xi = 0, k != 0: deep inside
  CHECK(extended_cutoff(z_zero, z_big) == 1.0);
  // transition band is within [0,1]
  for (double r : {0.26, 0.3, 0.4, 0.49}) {
    double z1[1] = {r * 10.0};
    double val = extended_cutoff(z1, z_big);
    CHECK(val >= 0.0);
    CHECK(val <= 1.0);
  }
  double inside[1] = {2.4};
  CHECK(extended_cutoff(inside, z_big) == 1.0);
  double outside[1] = {5.1};
  CHECK(extended_cutoff(outside, z_big) == 0.0);
}

TEST_CASE("extended symbol evaluation and degeneration") {
  Profile V = make_profile("coscos", {}, kWav);
  // extended symbol ignoring (zeta1, zeta2) reduces to the singular evaluation
  ExtendedSymbol es;
  es.name = "resolvent-ext";
  es.q = 1;
  BaseSymbol rs = make_symbol("resolvent");
  es.eval = [rs](std::span<const double> v, std::span<const double> xi,
                 std::span<const double>, std::span<const double>, double g) {
    return rs.eval(v, xi, g);
  };
  SingularSymbol ss;
  ss.sigma = rs;
  ss.V = V;
  ss.beta = {1.0};
  ss.epsilon = 0.5;
  ss.gamma = 2.0;
  double x[1] = {0.7}, xi[1] = {2.0};
  cplx a = evaluate_extended(es, V, {1.0}, 0.5, 2.0, x, 0.3, xi, kTwoPi * 2).v[0];
  cplx b = ss.evaluate(x, 0.3, xi, kTwoPi * 2).v[0];
  CHECK(std::abs(a - b) < 1e-14);
}

TEST_CASE("pulse weighted seminorm is finite for profile-carried symbols") {
  SeminormOptions opt;
  opt.grid_samples = 4;
  opt.freq_samples = 3;
  opt.refine = 1;
  // the eps V factor decays in theta, so <theta>-weighted sups stay modest
  SingularSymbol withv;
  withv.sigma = make_symbol("multg", {{"a", 1.0}, {"b", 0.0}});
  // subtract the v=0 part: sigma(v) - sigma(0) = v, which carries the decay
  withv.sigma.eval = [](std::span<const double> v, std::span<const double>, double) {
    return CMat::scalar(v[0]);
  };
  withv.V = make_profile("gauss", {}, kPul);
  withv.beta = {1.0};
  withv.epsilon = 0.5;
  withv.gamma = 1.0;
  double finite = symbol_seminorm(withv, kPul, SeminormMode::PulsePseudo, opt);
  CHECK(finite < 10.0);

  // a profile-free multiplier has <theta>-weighted sup growing with the box
  SingularSymbol flat = withv;
  flat.sigma = make_symbol("identity");
  flat.V = zero_profile(1);
  double big = symbol_seminorm(flat, kPul, SeminormMode::PulsePseudo, opt);
  CHECK(big > 0.9 * std::sqrt(1.0 + kPul.Theta * kPul.Theta) * 0.5);
}

TEST_CASE("catalog analytic derivatives match second-order finite differences") {
  BaseSymbol br = make_symbol("bracket", {{"m", -1.0}});
  BaseSymbol rs = make_symbol("resolvent");
  double v[1] = {0.2};
  double z0[1] = {1.7};
  for (const BaseSymbol* s : {&br, &rs}) {
    REQUIRE(bool(s->dxi));
    cplx exact = s->dxi(0, v, z0, 2.0).v[0];
    double prev_err = -1.0;
    for (double h : {2e-2, 1e-2, 5e-3}) {
      double hi[1] = {z0[0] + h}, lo[1] = {z0[0] - h};
      cplx fd = (s->eval(v, hi, 2.0).v[0] - s->eval(v, lo, 2.0).v[0]) / (2.0 * h);
      double err = std::abs(fd - exact);
      if (prev_err >= 0.0) CHECK(err < 0.3 * prev_err);  // ~4x per halving
      prev_err = err;
    }
    CHECK(prev_err < 1e-5);
  }
  // v-derivative of the resolvent
  cplx exact_dv = rs.dv(0, v, z0, 2.0).v[0];
  double h = 1e-5;
  double vh[1] = {v[0] + h}, vl[1] = {v[0] - h};
  cplx fd = (rs.eval(vh, z0, 2.0).v[0] - rs.eval(vl, z0, 2.0).v[0]) / (2.0 * h);
  CHECK(std::abs(fd - exact_dv) < 1e-8);
}
