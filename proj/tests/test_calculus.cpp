#include <cmath>

#include "doctest.h"
#include "spcalc/calculus.hpp"

using namespace spcalc;

namespace {

const GridSpec kWav = GridSpec::wavetrain(1, kPi, 8, 3);          // 56 DOF
const GridSpec kPul = GridSpec::pulse(1, kPi, 8, 8.0, 16);        // 128 DOF

SymbolFamily sym_family(const std::string& name, const Params& pars,
                        const std::string& prof, const GridSpec& g) {
  SymbolFamily f;
  f.name = name;
  f.sigma = make_symbol(name, pars);
  f.V = prof == "zero" ? zero_profile(1) : make_profile(prof, {}, g);
  f.beta = {1.0};
  return f;
}

AmplitudeFamily amp_family(const std::string& name, const Params& pars,
                           const std::string& pv, const std::string& pw,
                           const GridSpec& g) {
  AmplitudeFamily f;
  f.name = name;
  f.sigma = make_amplitude(name, pars);
  f.V = pv == "zero" ? zero_profile(1) : make_profile(pv, {}, g);
  f.W = pw == "zero" ? zero_profile(1) : make_profile(pw, {}, g);
  f.beta = {1.0};
  return f;
}

SweepSpec tiny_sweep() {
  SweepSpec s;
  s.eps = {1.0, 0.25, 1.0 / 16};
  s.gamma = {1.0, 4.0, 16.0};
  return s;
}

}  // namespace

TEST_CASE("remainder amplitudes vanish identically for (y,omega)-independent input") {
  SingularAmplitude a =
      amp_family("amp0", {{"a", 0.5}, {"b", 0.0}}, "coscos", "zero", kWav).at(0.5, 2.0);
  RemainderDecomposition rem = remainder_decomposition(a, kWav);
  CHECK(rem.incoming_independent);
  for (int po : {0, 11, 37})
    for (int pi : {3, 25})
      for (int f : {0, 5, 50}) {
        CHECK(rem.r1(po, pi, f).norm2() < 1e-15);
        CHECK(rem.r2(po, pi, f).norm2() < 1e-15);
      }
  CHECK(remainder_identity_defect(a, kWav, 3, 7) < 1e-12);
}

TEST_CASE("multiplication in y: r2 vanishes, identity via r1 holds") {
  // a~ = g(y) has no omega dependence (theta slot of the profile unused)
  AmplitudeFamily f = amp_family("ampy", {}, "zero", "xonly", kWav);
  SingularAmplitude a = f.at(0.5, 1.0);
  RemainderDecomposition rem = remainder_decomposition(a, kWav);
  for (int po : {0, 20})
    for (int pi : {4, 33})
      for (int fr : {2, 30}) CHECK(rem.r2(po, pi, fr).norm2() < 1e-14);
  CHECK(remainder_identity_defect(a, kWav, 5, 11) < 1e-9);
}

TEST_CASE("omega-only amplitude: r1 vanishes, identity via r2 differences") {
  // h(omega): use the coscos profile in the W slot; it depends on theta only
  // through cos(2 pi theta) and on x through cos(pi x / L)
  AmplitudeFamily f = amp_family("ampy", {}, "zero", "coscos", kWav);
  SingularAmplitude a = f.at(0.5, 1.0);
  RemainderDecomposition rem = remainder_decomposition(a, kWav);
  // the W slot still depends on y through the profile's x factor, so only
  // check the identity here (r1 handles the y part, r2 the omega part)
  CHECK(remainder_identity_defect(a, kWav, 5, 13) < 1e-9);
}

TEST_CASE("remainder identity for generic degree-0 amplitudes, both geometries") {
  for (const char* name : {"amp0", "ampw"}) {
    SingularAmplitude aw = amp_family(name, {}, "coscos", "sinsin", kWav).at(0.25, 2.0);
    CHECK(remainder_identity_defect(aw, kWav, 5, 17) < 1e-9);

    SingularAmplitude ap = amp_family(name, {}, "gauss", "gaussw", kPul).at(0.25, 2.0);
    CHECK(remainder_identity_defect(ap, kPul, 5, 19) < 1e-8);
  }
}

TEST_CASE("remainder identity for an N=2 amplitude") {
  SingularAmplitude a = amp_family("amprot2", {}, "coscos", "sinsin", kWav).at(0.5, 1.0);
  CHECK(remainder_identity_defect(a, kWav, 3, 23) < 1e-9);
}

TEST_CASE("remainder decomposition refuses non-differentiable amplitudes") {
  SingularAmplitude a = amp_family("amp0", {}, "coscos", "sinsin", kWav).at(0.5, 1.0);
  a.sigma.dw = nullptr;
  CHECK_THROWS_AS(remainder_decomposition(a, kWav), Error);
}

TEST_CASE("adjoint defect is zero for multipliers and real multiplications") {
  MeasureOptions opt;
  opt.method = NormMethod::DenseSVD;
  SymbolFamily br = sym_family("bracket", {{"m", -1.0}}, "zero", kWav);
  DefectReport r1 = adjoint_defect("adj-mult", br, kWav, tiny_sweep(),
                                   AdjointVariant::Degree0L2, opt);
  CHECK(r1.trivially_zero);
  CHECK(r1.pass);

  SymbolFamily gm = sym_family("multg", {}, "coscos", kWav);  // real-valued symbol
  DefectReport r2 = adjoint_defect("adj-realmult", gm, kWav, tiny_sweep(),
                                   AdjointVariant::Degree0L2, opt);
  CHECK(r2.trivially_zero);
  CHECK(r2.pass);
}

TEST_CASE("adjoint defect of a noncommuting N=2 symbol is gamma-uniform") {
  MeasureOptions opt;
  opt.method = NormMethod::DenseSVD;
  SymbolFamily up = sym_family("upper2", {}, "coscos", kWav);
  DefectReport rep = adjoint_defect("adj-upper2", up, kWav, tiny_sweep(),
                                    AdjointVariant::Degree0L2, opt);
  CHECK_FALSE(rep.trivially_zero);
  CHECK(rep.spread <= 8.0);
  CHECK(rep.pass);
}

TEST_CASE("hermitian-symbol adjoint defect matches its conjugate-transpose twin") {
  // Hermitian sigma with a real profile: a* has the same defect as a
  MeasureOptions opt;
  opt.method = NormMethod::DenseSVD;
  SymbolFamily mix = sym_family("garding2", {}, "coscos", kWav);
  SweepSpec s;
  s.eps = {0.5};
  s.gamma = {2.0};
  DefectReport ra = adjoint_defect("adj-h", mix, kWav, s, AdjointVariant::Degree0L2, opt);
  SymbolFamily mixstar = mix;
  auto base = mix.sigma.eval;
  mixstar.sigma.eval = [base](std::span<const double> v, std::span<const double> z,
                              double g) { return base(v, z, g).adjoint(); };
  DefectReport rb =
      adjoint_defect("adj-h*", mixstar, kWav, s, AdjointVariant::Degree0L2, opt);
  CHECK(std::abs(ra.rows[0].raw - rb.rows[0].raw) < 1e-10);
}

TEST_CASE("product defect vanishes for multiplier pairs and multiplication pairs") {
  MeasureOptions opt;
  opt.method = NormMethod::DenseSVD;
  SymbolFamily m1 = sym_family("bracket", {{"m", -1.0}}, "zero", kWav);
  SymbolFamily m2 = sym_family("resolvent", {}, "zero", kWav);  // V = 0: multiplier
  DefectReport r1 = product_defect("prod-mult", m1, m2, kWav, tiny_sweep(),
                                   ProductVariant::Deg00L2, false, opt);
  CHECK(r1.trivially_zero);

  SymbolFamily g1 = sym_family("multg", {}, "coscos", kWav);
  SymbolFamily g2 = sym_family("multg", {{"a", 0.3}, {"b", 0.0}}, "sinsin", kWav);
  DefectReport r2 = product_defect("prod-mult2", g1, g2, kWav, tiny_sweep(),
                                   ProductVariant::Deg00L2, false, opt);
  CHECK(r2.trivially_zero);
}

TEST_CASE("multiplication on the left composes exactly (zero defect)") {
  // g(x,theta) factors out of the frequency sum, so Op(g) Op(b) = Op(g b)
  MeasureOptions opt;
  opt.method = NormMethod::DenseSVD;
  SymbolFamily a = sym_family("multg", {}, "coscos", kWav);
  SymbolFamily b = sym_family("resolvent", {}, "sinsin", kWav);
  DefectReport rep = product_defect("prod-gb", a, b, kWav, tiny_sweep(),
                                    ProductVariant::Deg00L2, false, opt);
  CHECK(rep.trivially_zero);
}

TEST_CASE("noncommuting product defect is gamma-uniform, starred variant included") {
  MeasureOptions opt;
  opt.method = NormMethod::DenseSVD;
  SymbolFamily a = sym_family("resolvent", {}, "sinsin", kWav);
  SymbolFamily b = sym_family("multg", {}, "coscos", kWav);
  DefectReport plain = product_defect("prod-ab", a, b, kWav, tiny_sweep(),
                                      ProductVariant::Deg00L2, false, opt);
  CHECK_FALSE(plain.trivially_zero);
  CHECK(plain.pass);
  DefectReport starred = product_defect("prod-ab*", a, b, kWav, tiny_sweep(),
                                        ProductVariant::Deg00L2, true, opt);
  CHECK(starred.pass);
}

TEST_CASE("garding: identity gives lambda_min = 1, positive family finds gamma0") {
  MeasureOptions opt;
  opt.power.max_iter = 600;
  opt.power.tol = 1e-9;
  SymbolFamily one = sym_family("identity", {}, "zero", kWav);
  // Re sigma = 1 >= C_K = 1; lambda_min = 1 for every cell
  DefectReport rid = garding_defect("garding-id", one, kWav, tiny_sweep(), {}, opt);
  CHECK(rid.pass);
  CHECK(rid.gamma0 == 1.0);
  for (const auto& row : rid.rows) CHECK(row.raw == doctest::Approx(1.0).epsilon(1e-6));

  SymbolFamily pos = sym_family("garding", {}, "coscos", kWav);
  DefectReport rp = garding_defect("garding-pos", pos, kWav, tiny_sweep(), {}, opt);
  CHECK(rp.pass);
  CHECK(rp.gamma0_found);

  // positive multiplier: lambda_min >= min Re over the lattice
  SymbolFamily mult = sym_family("garding", {{"c0", 1.0}, {"c1", 0.0}}, "zero", kWav);
  DefectReport rm = garding_defect("garding-mult", mult, kWav, tiny_sweep(), {}, opt);
  CHECK(rm.pass);
}

TEST_CASE("garding refuses symbols without certified positivity") {
  // c1 too large: Re sigma dips below zero on K
  SymbolFamily bad = sym_family("garding", {{"c0", 0.2}, {"c1", 0.9}}, "coscos", kWav);
  CHECK_THROWS_AS(garding_defect("garding-bad", bad, kWav, tiny_sweep()), Error);
}

TEST_CASE("smoothness requirements are enforced") {
  SymbolFamily rough = sym_family("multg", {}, "coscos", kWav);
  rough.V = make_profile("coscos", {{"n", 1}}, kWav);
  CHECK_THROWS_AS(
      adjoint_defect("x", rough, kWav, tiny_sweep(), AdjointVariant::Degree0L2), Error);
  CHECK_THROWS_AS(h1_boundedness_defect("x", rough, kWav, tiny_sweep()), Error);
  AmplitudeFamily ra = amp_family("amp0", {}, "coscos", "sinsin", kWav);
  ra.W = make_profile("sinsin", {{"n", 2}}, kWav);
  CHECK_THROWS_AS(
      amplitude_vs_symbol_defect("x", ra, kWav, tiny_sweep(), AmpSymVariant::L2), Error);
}

TEST_CASE("boundedness sweep of bracket(-1): exact 1/gamma decay") {
  MeasureOptions opt;
  opt.method = NormMethod::DenseSVD;
  SymbolFamily br = sym_family("bracket", {{"m", -1.0}}, "zero", kWav);
  DefectReport rep = boundedness_defect("prop3-bracket", br, kWav, tiny_sweep(), opt);
  CHECK(rep.pass);
  CHECK(rep.slope_checked);
  CHECK(std::abs(rep.fitted_slope + 1.0) < 0.02);
  for (const auto& r : rep.rows)
    CHECK(r.normalized == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("amplitude-vs-symbol defect: trivial zero when W is absent") {
  MeasureOptions opt;
  opt.method = NormMethod::DenseSVD;
  AmplitudeFamily f = amp_family("amp0", {{"a", 0.5}, {"b", 0.0}}, "coscos", "zero", kWav);
  DefectReport rep =
      amplitude_vs_symbol_defect("thm3-trivial", f, kWav, tiny_sweep(), AmpSymVariant::L2, opt);
  CHECK(rep.trivially_zero);
  CHECK(rep.pass);
}

TEST_CASE("amplitude-vs-symbol defect: uniform for a genuine amplitude") {
  MeasureOptions opt;
  opt.power.max_iter = 400;
  AmplitudeFamily f = amp_family("amp0", {}, "coscos", "sinsin", kWav);
  DefectReport rep =
      amplitude_vs_symbol_defect("thm3-amp0", f, kWav, tiny_sweep(), AmpSymVariant::L2, opt);
  CHECK_FALSE(rep.trivially_zero);
  CHECK(rep.pass);

  // the v-coupled amplitude decays even faster (eps^2); its gamma-normalized
  // defect stays bounded though the envelope ratio is not meaningful for it
  AmplitudeFamily fw = amp_family("ampw", {}, "coscos", "sinsin", kWav);
  DefectReport rw =
      amplitude_vs_symbol_defect("thm3-ampw", fw, kWav, tiny_sweep(), AmpSymVariant::L2, opt);
  double worst = 0.0;
  for (const auto& r : rw.rows) worst = std::max(worst, r.normalized);
  CHECK(worst < 1.0);
}

TEST_CASE("theorem-1 constant stays under the ceiling") {
  SymbolFamily rs = sym_family("resolvent", {}, "coscos", kWav);
  double c = theorem1_constant(rs, kWav, 0.5, 2.0, 5, 31);
  CHECK(c > 0.0);
  CHECK(c <= 10.0);

  SymbolFamily rp = sym_family("resolvent", {}, "gauss", kPul);
  double cp = theorem1_constant(rp, kPul, 0.5, 2.0, 5, 37);
  CHECK(cp > 0.0);
  CHECK(cp <= 10.0);
}

TEST_CASE("reverse product probe reports without asserting") {
  MeasureOptions opt;
  opt.power.max_iter = 300;
  SymbolFamily neg = sym_family("smoothneg", {}, "coscos", kWav);
  SweepSpec s;
  s.eps = {1.0, 0.25};
  s.gamma = {1.0, 4.0};
  DefectReport rep = reverse_product_probe("revprobe", neg, kWav, s, opt);
  CHECK(rep.pass);  // report-only
  for (const auto& r : rep.rows) CHECK(std::isfinite(r.raw));
}
