#include "spcalc/estimates.hpp"

#include <cmath>

#include "spcalc/pulse.hpp"

namespace spcalc {

SymbolFamily standard_symbol_family(const std::string& symbol, const Params& pars,
                                    const GridSpec& g) {
  SymbolFamily f;
  f.name = symbol;
  f.sigma = make_symbol(symbol, pars);
  f.V = g.geometry == Geometry::Wavetrain ? make_profile("coscos", {}, g)
                                          : make_profile("gauss", {}, g);
  f.beta = std::vector<double>(g.d, 0.0);
  f.beta[0] = 1.0;
  return f;
}

AmplitudeFamily standard_amplitude_family(const std::string& amp, const Params& pars,
                                          const GridSpec& g) {
  AmplitudeFamily f;
  f.name = amp;
  f.sigma = make_amplitude(amp, pars);
  if (g.geometry == Geometry::Wavetrain) {
    f.V = make_profile("coscos", {}, g);
    f.W = make_profile("sinsin", {}, g);
  } else {
    f.V = make_profile("gauss", {}, g);
    f.W = make_profile("gaussw", {}, g);
  }
  f.beta = std::vector<double>(g.d, 0.0);
  f.beta[0] = 1.0;
  return f;
}

namespace {

DefectReport threshold_report(const std::string& id, Geometry geom, double threshold,
                              std::vector<DefectRow> rows, const std::string& detail) {
  DefectReport rep;
  rep.estimate_id = id;
  rep.geometry = geom;
  rep.detail = detail;
  rep.threshold_mode = true;
  rep.threshold = threshold;
  rep.rows = std::move(rows);
  rep.finalize();
  return rep;
}

// ---- transform exactness (desk scale) -------------------------------------

DefectReport run_parseval(const EstimateContext& ctx, const GridSpec& g,
                          const std::string& id) {
  std::vector<DefectRow> rows;
  for (int rep = 0; rep < 100; ++rep) {
    Field u = random_field(g, 1, ctx.seed + rep);
    DefectRow r;
    r.raw = parseval_defect(u);
    rows.push_back(r);
  }
  return threshold_report(id, g.geometry, 1e-12, std::move(rows),
                          "100 seeded random fields, " + g.describe());
}

DefectReport run_roundtrip(const EstimateContext& ctx, const GridSpec& g,
                           const std::string& id) {
  std::vector<DefectRow> rows;
  for (int rep = 0; rep < 100; ++rep) {
    Field u = random_field(g, 1, ctx.seed + 7000 + rep);
    Field v = inverse_transform(forward_transform(u));
    v -= u;
    DefectRow r;
    r.raw = v.l2_norm() / u.l2_norm();
    rows.push_back(r);
  }
  return threshold_report(id, g.geometry, 1e-12, std::move(rows),
                          "inverse(forward(u)) round trip, " + g.describe());
}

// ---- quantization identities (desk scale) ----------------------------------

DefectReport run_quantize(const EstimateContext& ctx, const GridSpec& g,
                          const std::string& id) {
  std::vector<DefectRow> rows;
  Field u = random_field(g, 1, ctx.seed + 11);
  const std::string prof = g.geometry == Geometry::Wavetrain ? "coscos" : "gauss";
  // identity symbol
  {
    SingularSymbol one{make_symbol("identity"), make_profile(prof, {}, g),
                       std::vector<double>(g.d, 0.0), 0.5, 2.0};
    one.beta[0] = 1.0;
    Field v = apply_singular(one, u);
    v -= u;
    DefectRow r;
    r.eps = 0.5;
    r.raw = v.l2_norm() / u.l2_norm();
    rows.push_back(r);
  }
  // bracket multiplier vs independent diagonal evaluation
  {
    NormParams p{0.0, 2.0, 0.25, std::vector<double>(g.d, 0.0)};
    p.beta[0] = 1.0;
    SingularSymbol br{make_symbol("bracket", {{"m", -1.0}}), zero_profile(1), p.beta,
                      p.epsilon, p.gamma};
    Field via_op = apply_singular(br, u);
    SpectralField U = forward_transform(u);
    for (int n = 0; n < g.spatial_points(); ++n)
      for (int jk = 0; jk < g.theta_modes(); ++jk) {
        double z2 = singular_shift_sq(g, n, jk, p.beta, p.epsilon);
        U.at(g.mode_index(n, jk)) *= 1.0 / std::sqrt(p.gamma * p.gamma + z2);
      }
    Field direct = inverse_transform(U);
    via_op -= direct;
    DefectRow r;
    r.eps = 0.25;
    r.gamma = 2.0;
    r.raw = via_op.l2_norm() / u.l2_norm();
    rows.push_back(r);
  }
  // singular ixi1 vs the diagonal singular-derivative multiplier
  for (double eps : {1.0, 1.0 / 16, 1.0 / 256}) {
    NormParams p{1.0, 1.0, eps, std::vector<double>(g.d, 0.0)};
    p.beta[0] = 1.0;
    SingularSymbol dsym{make_symbol("ixi1"), make_profile(prof, {}, g), p.beta, eps, 1.0};
    Field via_sym = apply_singular(dsym, u);
    Field via_diag = make_singular_derivative(g, 0, p)->apply(u);
    via_sym -= via_diag;
    DefectRow r;
    r.eps = eps;
    r.raw = via_sym.l2_norm() / std::max(1e-300, via_diag.l2_norm());
    rows.push_back(r);
  }
  return threshold_report(id, g.geometry, 1e-12, std::move(rows),
                          "identity / multiplier / singular-derivative reductions");
}

// ---- oracle parity ---------------------------------------------------------

DefectReport run_oracle_parity(const EstimateContext& ctx, const GridSpec& g,
                               const std::string& id, const std::string& symbol,
                               const Params& pars, bool v_profile) {
  SymbolFamily fam = standard_symbol_family(symbol, pars, g);
  if (!v_profile) fam.V = zero_profile(1);
  SingularSymbol sym = fam.at(0.5, 2.0);
  LinOpPtr op = make_singular_op(sym, g);
  DenseMatrix m = assemble_matrix(*op);
  std::vector<DefectRow> rows;
  for (int rep = 0; rep < ctx.probes; ++rep) {
    Field u = random_field(g, sym.ncomp(), ctx.seed + 500 + rep);
    Field via_apply = op->apply(u);
    CVec via_mat = m.matvec(u.data);
    double diff = 0.0;
    for (std::size_t i = 0; i < via_mat.size(); ++i)
      diff = std::max(diff, std::abs(via_mat[i] - via_apply.data[i]));
    DefectRow r;
    r.raw = diff;
    rows.push_back(r);
  }
  return threshold_report(id, g.geometry, 1e-10, std::move(rows),
                          symbol + " on " + g.describe() + " (" +
                              std::to_string(g.points() * sym.ncomp()) + " DOF)");
}

// ---- bracket isometry -------------------------------------------------------

DefectReport run_isometry(const EstimateContext&, const GridSpec& g,
                          const std::string& id) {
  std::vector<DefectRow> rows;
  for (double m : {1.0, -1.0, 2.0})
    for (double eps : {1.0, 0.125})
      for (double gamma : {1.0, 8.0}) {
        NormParams p{0.0, gamma, eps, std::vector<double>(g.d, 0.0)};
        p.beta[0] = 1.0;
        SingularSymbol br{make_symbol("bracket", {{"m", m}}), zero_profile(1), p.beta,
                          eps, gamma};
        LinOpPtr op = make_singular_op(br, g);
        LinOpPtr inv = make_singular_weight(g, -m, p);
        double nrm = operator_norm(*make_compose({op, inv}), NormMethod::DenseSVD);
        DefectRow r;
        r.eps = eps;
        r.gamma = gamma;
        r.raw = std::abs(nrm - 1.0);
        rows.push_back(r);
      }
  return threshold_report(id, g.geometry, 1e-10, std::move(rows),
                          "bracket(m) . weight^{-m} is an isometry");
}

// ---- remainder identity -----------------------------------------------------

DefectReport run_remainder(const EstimateContext& ctx, const GridSpec& g,
                           const std::string& id) {
  std::vector<std::pair<std::string, Params>> amps = {
      {"amp0", {{"a", 0.5}, {"b", 0.0}}},  // (y,omega)-independent
      {"ampy", {}},                        // multiplication in the y slot
      {"amp0", {}},
      {"ampw", {}},
      {"amprot2", {}},
  };
  std::vector<DefectRow> rows;
  int i = 0;
  for (const auto& [name, pars] : amps) {
    AmplitudeFamily fam = standard_amplitude_family(name, pars, g);
    if (i == 0) fam.W = zero_profile(1);
    for (auto [eps, gamma] : {std::pair{1.0, 1.0}, {0.25, 2.0}, {1.0 / 16, 8.0}}) {
      DefectRow r;
      r.eps = eps;
      r.gamma = gamma;
      r.raw = remainder_identity_defect(fam.at(eps, gamma), g, ctx.probes,
                                        ctx.seed + 31 * i);
      rows.push_back(r);
    }
    ++i;
  }
  return threshold_report(id, g.geometry, 1e-8, std::move(rows),
                          "Opt(a~) - Op(a) - Opt(r1) - Opt(r2) on 5 amplitudes");
}

// ---- truncation ladder -------------------------------------------------------

DefectReport run_ladder(const EstimateContext& ctx, const GridSpec& g,
                        const std::string& id) {
  AmplitudeFamily fam = standard_amplitude_family("amp0", {}, g);
  SingularAmplitude a = fam.at(0.5, 1.0);
  Field u = random_field(g, 1, ctx.seed + 77);
  auto [ref, rep0] = apply_oscillatory(a, u, TruncationLadder::standard(g));
  std::vector<DefectRow> rows;
  DefectRow r0;
  r0.raw = rep0.stabilized ? 0.0 : 1.0;
  rows.push_back(r0);  // exact stabilization required
  DefectRow r1;
  r1.raw = rep0.successive_diffs.empty() ? 1.0 : rep0.successive_diffs.back();
  rows.push_back(r1);
  // Remark-2 scaling: chi1(0) chi2(0) = c reproduces c x reference
  double c1 = 0.6, c2 = 1.5;
  auto [scaled, rep1] = apply_oscillatory(a, u, TruncationLadder::standard(g, c1, c2));
  Field expect = cplx(c1 * c2) * ref;
  expect -= scaled;
  DefectRow r2;
  r2.raw = expect.l2_norm() / ref.l2_norm();
  rows.push_back(r2);
  return threshold_report(id, g.geometry, 1e-12, std::move(rows),
                          "delta-ladder stabilization and chi(0)-scaling");
}

// ---- decay checks -------------------------------------------------------------

DefectReport run_decay(const EstimateContext&, Geometry geom, const std::string& id,
                       const std::string& symbol, const Params& pars, bool expect_pass) {
  BaseSymbol s = make_symbol(symbol, pars);
  DecayReport rep = decay_check(s, 0.5, 2, 1);
  std::vector<DefectRow> rows;
  for (const auto& e : rep.entries) {
    DefectRow r;
    r.raw = std::isfinite(e.ratio) ? e.ratio : 1e18;
    rows.push_back(r);
  }
  DefectReport out = threshold_report(id, geom, 1.5, std::move(rows),
                                      "normalized-derivative refinement ratios of " +
                                          symbol);
  if (!expect_pass)
    out.note = "designed failure fixture: the symbol violates every decay order";
  return out;
}

// ---- theorem-1 constants -------------------------------------------------------

DefectReport run_thm1_constant(const EstimateContext& ctx, const GridSpec& g,
                               const std::string& id) {
  std::vector<std::string> symbols = {"resolvent", "multg", "garding"};
  std::vector<DefectRow> rows;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    SymbolFamily fam = standard_symbol_family(symbols[i], {}, g);
    for (auto [eps, gamma] : {std::pair{1.0, 1.0}, {0.0625, 4.0}}) {
      DefectRow r;
      r.eps = eps;
      r.gamma = gamma;
      r.raw = theorem1_constant(fam, g, eps, gamma, 20, ctx.seed + 900 + 7 * i);
      rows.push_back(r);
    }
  }
  return threshold_report(id, g.geometry, 10.0, std::move(rows),
                          "||Op u|| / (|||sigma||| ||u||) over 20 probes per symbol");
}

// ---- pulse profile shape checks -------------------------------------------------

DefectReport run_pulse_profiles(const EstimateContext&, const GridSpec& g,
                                const std::string& id) {
  std::vector<DefectRow> rows;
  for (const char* name : {"gauss", "gaussw", "sechcos"}) {
    ProfileCheckReport rep = pulse_profile_check(make_profile(name, {}, g), g, 3);
    DefectRow r;
    r.raw = rep.pass ? 0.0 : 1.0;
    rows.push_back(r);
  }
  // the constant profile must fail at order 0
  ProfileCheckReport bad = pulse_profile_check(make_profile("const", {}, g), g, 1);
  DefectRow r;
  r.raw = (!bad.pass && bad.failed_dx == 0 && bad.failed_dtheta == 0) ? 0.0 : 1.0;
  rows.push_back(r);
  // weight shape behind the Theorem-9 remainder bound
  DefectRow s1;
  s1.raw = theta_weight_shape_sup(g) / 4.0;  // expect O(2); normalize against 4
  rows.push_back(s1);
  DefectRow s2;
  s2.raw = profile_pair_shape_sup(make_profile("gauss", {}, g),
                                  make_profile("gaussw", {}, g), g) /
           4.0;
  rows.push_back(s2);
  return threshold_report(id, g.geometry, 1.0 - 1e-12, std::move(rows),
                          "<theta>-weighted profile checks and weight shapes");
}

// ---- k-lattice refinement stability ----------------------------------------------

DefectReport run_refinement(const EstimateContext& ctx, const std::string& id) {
  GridSpec coarse = ctx.pul_sweep;
  GridSpec fine = GridSpec::pulse(coarse.d, coarse.L, coarse.Nx, coarse.Theta,
                                  2 * coarse.Ntheta);
  std::vector<DefectRow> rows;
  for (auto [eps, gamma] : {std::pair{1.0, 2.0}, {0.125, 4.0}}) {
    SymbolFamily fam = standard_symbol_family("resolvent", {}, coarse);
    double a = operator_norm(*make_singular_op(fam.at(eps, gamma), coarse),
                             ctx.opt.method, ctx.opt.power);
    SymbolFamily famf = standard_symbol_family("resolvent", {}, fine);
    double b = operator_norm(*make_singular_op(famf.at(eps, gamma), fine),
                             ctx.opt.method, ctx.opt.power);
    DefectRow r;
    r.eps = eps;
    r.gamma = gamma;
    r.raw = std::abs(a - b) / std::max(a, 1e-300);
    rows.push_back(r);
  }
  return threshold_report(id, Geometry::Pulse, 0.10, std::move(rows),
                          "operator norms under Ntheta doubling");
}

// ---- registry --------------------------------------------------------------------

std::vector<EstimateDef> build_registry() {
  std::vector<EstimateDef> defs;
  auto add = [&](std::string id, Geometry geom, std::string twin, std::string doc,
                 std::function<DefectReport(const EstimateContext&)> run) {
    defs.push_back({std::move(id), geom, std::move(twin), std::move(doc), std::move(run)});
  };
  const Geometry W = Geometry::Wavetrain, P = Geometry::Pulse;

  // transforms and quantization
  add("PARSEVAL-WT", W, "PARSEVAL-P", "Parseval defect on random fields",
      [](const EstimateContext& c) { return run_parseval(c, c.wav_desk, "PARSEVAL-WT"); });
  add("PARSEVAL-P", P, "PARSEVAL-WT", "Parseval defect on random fields",
      [](const EstimateContext& c) { return run_parseval(c, c.pul_desk, "PARSEVAL-P"); });
  add("ROUNDTRIP-WT", W, "ROUNDTRIP-P", "transform round-trip error",
      [](const EstimateContext& c) { return run_roundtrip(c, c.wav_desk, "ROUNDTRIP-WT"); });
  add("ROUNDTRIP-P", P, "ROUNDTRIP-WT", "transform round-trip error",
      [](const EstimateContext& c) { return run_roundtrip(c, c.pul_desk, "ROUNDTRIP-P"); });
  add("QUANT-WT", W, "QUANT-P", "quantization identity reductions",
      [](const EstimateContext& c) { return run_quantize(c, c.wav_desk, "QUANT-WT"); });
  add("QUANT-P", P, "QUANT-WT", "quantization identity reductions",
      [](const EstimateContext& c) { return run_quantize(c, c.pul_desk, "QUANT-P"); });

  // oracle parity (apply vs dense matrix), several sizes
  add("ORACLE-WT-56", W, "ORACLE-P-128", "FFT path vs dense oracle, 56 DOF",
      [](const EstimateContext& c) {
        return run_oracle_parity(c, c.wav_small, "ORACLE-WT-56", "resolvent", {}, true);
      });
  add("ORACLE-P-128", P, "ORACLE-WT-56", "FFT path vs dense oracle, 128 DOF",
      [](const EstimateContext& c) {
        return run_oracle_parity(c, c.pul_small, "ORACLE-P-128", "resolvent", {}, true);
      });
  add("ORACLE-WT-544", W, "ORACLE-P-512", "FFT path vs dense oracle, 544 DOF",
      [](const EstimateContext& c) {
        return run_oracle_parity(c, GridSpec::wavetrain(1, kPi, 32, 8), "ORACLE-WT-544",
                                 "resolvent", {}, true);
      });
  add("ORACLE-P-512", P, "ORACLE-WT-544", "FFT path vs dense oracle, 512 DOF",
      [](const EstimateContext& c) {
        return run_oracle_parity(c, GridSpec::pulse(1, kPi, 16, 10.0, 32), "ORACLE-P-512",
                                 "resolvent", {}, true);
      });
  add("ORACLE-WT-N2", W, "", "FFT path vs dense oracle, N=2 rotation, 288 DOF",
      [](const EstimateContext& c) {
        return run_oracle_parity(c, GridSpec::wavetrain(1, kPi, 16, 4), "ORACLE-WT-N2",
                                 "rot2", {}, true);
      });
  add("ORACLE-WT-4032", W, "", "multiplier dense oracle at the DOF budget",
      [](const EstimateContext& c) {
        return run_oracle_parity(c, GridSpec::wavetrain(1, kPi, 64, 31), "ORACLE-WT-4032",
                                 "bracket", {{"m", -1.0}}, false);
      });

  add("ISO-BRACKET-WT", W, "ISO-BRACKET-P", "bracket/weight isometry",
      [](const EstimateContext& c) { return run_isometry(c, c.wav_small, "ISO-BRACKET-WT"); });
  add("ISO-BRACKET-P", P, "ISO-BRACKET-WT", "bracket/weight isometry",
      [](const EstimateContext& c) { return run_isometry(c, c.pul_small, "ISO-BRACKET-P"); });

  // boundedness (Props 3/13, 4/14, 6/16) and smoothing (5/15, 7/17)
  auto bnd = [](const char* id, Geometry geom, const char* twin, const char* sym,
                Params pars) {
    std::string sid = id;
    std::string ssym = sym;
    return EstimateDef{
        sid, geom, twin, std::string("operator-norm sweep of ") + sym,
        [sid, geom, ssym, pars](const EstimateContext& c) {
          const GridSpec& g = geom == Geometry::Wavetrain ? c.wav_sweep : c.pul_sweep;
          return boundedness_defect(sid, standard_symbol_family(ssym, pars, g), g,
                                    c.sweep, c.opt);
        }};
  };
  defs.push_back(bnd("PROP3-BRACKET", W, "PROP13-BRACKET", "bracket", {{"m", -1.0}}));
  defs.push_back(bnd("PROP13-BRACKET", P, "PROP3-BRACKET", "bracket", {{"m", -1.0}}));
  defs.push_back(bnd("PROP3-SMOOTHNEG", W, "PROP13-SMOOTHNEG", "smoothneg", {}));
  defs.push_back(bnd("PROP13-SMOOTHNEG", P, "PROP3-SMOOTHNEG", "smoothneg", {}));
  defs.push_back(bnd("PROP3-RESOLVENT", W, "PROP13-RESOLVENT", "resolvent", {}));
  defs.push_back(bnd("PROP13-RESOLVENT", P, "PROP3-RESOLVENT", "resolvent", {}));
  defs.push_back(bnd("PROP3-ROT2", W, "PROP13-ROT2", "rot2", {}));
  defs.push_back(bnd("PROP13-ROT2", P, "PROP3-ROT2", "rot2", {}));
  defs.push_back(bnd("PROP4-BRACKETV", W, "PROP14-BRACKETV", "bracketv", {{"m", 1.0}}));
  defs.push_back(bnd("PROP14-BRACKETV", P, "PROP4-BRACKETV", "bracketv", {{"m", 1.0}}));

  auto smo = [](const char* id, Geometry geom, const char* twin) {
    std::string sid = id;
    return EstimateDef{sid, geom, twin, "L2 -> H^{1,eps} smoothing sweep (degree -1)",
                       [sid, geom](const EstimateContext& c) {
                         const GridSpec& g =
                             geom == Geometry::Wavetrain ? c.wav_sweep : c.pul_sweep;
                         return smoothing_defect(
                             sid, standard_symbol_family("smoothneg", {}, g), g, c.sweep,
                             c.opt);
                       }};
  };
  defs.push_back(smo("PROP5-SMOOTHNEG", W, "PROP15-SMOOTHNEG"));
  defs.push_back(smo("PROP15-SMOOTHNEG", P, "PROP5-SMOOTHNEG"));

  auto ampbnd = [](const char* id, Geometry geom, const char* twin, const char* amp) {
    std::string sid = id, samp = amp;
    return EstimateDef{sid, geom, twin, std::string("oscillatory boundedness of ") + amp,
                       [sid, geom, samp](const EstimateContext& c) {
                         const GridSpec& g =
                             geom == Geometry::Wavetrain ? c.wav_sweep : c.pul_sweep;
                         return amplitude_boundedness_defect(
                             sid, standard_amplitude_family(samp, {}, g), g, c.sweep,
                             c.opt);
                       }};
  };
  defs.push_back(ampbnd("PROP6-AMP0", W, "PROP16-AMP0", "amp0"));
  defs.push_back(ampbnd("PROP16-AMP0", P, "PROP6-AMP0", "amp0"));
  defs.push_back(ampbnd("PROP6-AMPW", W, "PROP16-AMPW", "ampw"));
  defs.push_back(ampbnd("PROP16-AMPW", P, "PROP6-AMPW", "ampw"));

  auto ampsmo = [](const char* id, Geometry geom, const char* twin) {
    std::string sid = id;
    return EstimateDef{sid, geom, twin, "oscillatory smoothing sweep (degree -1)",
                       [sid, geom](const EstimateContext& c) {
                         const GridSpec& g =
                             geom == Geometry::Wavetrain ? c.wav_sweep : c.pul_sweep;
                         return amplitude_smoothing_defect(
                             sid, standard_amplitude_family("ampm1", {}, g), g, c.sweep,
                             c.opt);
                       }};
  };
  defs.push_back(ampsmo("PROP7-AMPM1", W, "PROP17-AMPM1"));
  defs.push_back(ampsmo("PROP17-AMPM1", P, "PROP7-AMPM1"));

  auto lem4 = [](const char* id, Geometry geom, const char* twin) {
    std::string sid = id;
    return EstimateDef{sid, geom, twin, "H^{1,eps} boundedness of a degree-0 operator",
                       [sid, geom](const EstimateContext& c) {
                         const GridSpec& g =
                             geom == Geometry::Wavetrain ? c.wav_sweep : c.pul_sweep;
                         return h1_boundedness_defect(
                             sid, standard_symbol_family("resolvent", {}, g), g, c.sweep,
                             c.opt);
                       }};
  };
  defs.push_back(lem4("LEM4-RESOLVENT", W, "LEM4P-RESOLVENT"));
  defs.push_back(lem4("LEM4P-RESOLVENT", P, "LEM4-RESOLVENT"));

  // amplitude vs symbol (Thms 3/9, 4/10)
  auto avs = [](const char* id, Geometry geom, const char* twin, const char* amp,
                AmpSymVariant variant) {
    std::string sid = id, samp = amp;
    return EstimateDef{sid, geom, twin, std::string("Opt-vs-Op defect of ") + amp,
                       [sid, geom, samp, variant](const EstimateContext& c) {
                         const GridSpec& g =
                             geom == Geometry::Wavetrain ? c.wav_sweep : c.pul_sweep;
                         return amplitude_vs_symbol_defect(
                             sid, standard_amplitude_family(samp, {}, g), g, c.sweep,
                             variant, c.opt);
                       }};
  };
  defs.push_back(avs("THM3-L2-AMP0", W, "THM9-L2-AMP0", "amp0", AmpSymVariant::L2));
  defs.push_back(avs("THM9-L2-AMP0", P, "THM3-L2-AMP0", "amp0", AmpSymVariant::L2));
  defs.push_back(avs("THM3-H1-AMP0", W, "THM9-H1-AMP0", "amp0", AmpSymVariant::H1eps));
  defs.push_back(avs("THM9-H1-AMP0", P, "THM3-H1-AMP0", "amp0", AmpSymVariant::H1eps));
  defs.push_back(avs("THM4-AMP1", W, "THM10-AMP1", "amp1", AmpSymVariant::Degree1L2));
  defs.push_back(avs("THM10-AMP1", P, "THM4-AMP1", "amp1", AmpSymVariant::Degree1L2));
  defs.push_back(avs("THM3-TRIVIAL", W, "THM9-TRIVIAL", "ampy", AmpSymVariant::L2));
  defs.push_back(avs("THM9-TRIVIAL", P, "THM3-TRIVIAL", "ampy", AmpSymVariant::L2));

  // remainder identity (Prop 2 / Thm 9 structure)
  add("PROP2-REMAINDER", W, "THM9-REMAINDER", "first-order remainder operator identity",
      [](const EstimateContext& c) { return run_remainder(c, c.wav_small, "PROP2-REMAINDER"); });
  add("THM9-REMAINDER", P, "PROP2-REMAINDER", "first-order remainder operator identity",
      [](const EstimateContext& c) { return run_remainder(c, c.pul_small, "THM9-REMAINDER"); });

  // adjoints (Props 8/18, 9/19)
  auto adj = [](const char* id, Geometry geom, const char* twin, const char* sym,
                AdjointVariant variant) {
    std::string sid = id, ssym = sym;
    return EstimateDef{sid, geom, twin, std::string("adjoint defect of ") + sym,
                       [sid, geom, ssym, variant](const EstimateContext& c) {
                         const GridSpec& g =
                             geom == Geometry::Wavetrain ? c.wav_sweep : c.pul_sweep;
                         return adjoint_defect(sid, standard_symbol_family(ssym, {}, g),
                                               g, c.sweep, variant, c.opt);
                       }};
  };
  defs.push_back(adj("PROP8-L2-UPPER2", W, "PROP18-L2-UPPER2", "upper2",
                     AdjointVariant::Degree0L2));
  defs.push_back(adj("PROP18-L2-UPPER2", P, "PROP8-L2-UPPER2", "upper2",
                     AdjointVariant::Degree0L2));
  defs.push_back(adj("PROP8-H1-UPPER2", W, "PROP18-H1-UPPER2", "upper2",
                     AdjointVariant::Degree0H1eps));
  defs.push_back(adj("PROP18-H1-UPPER2", P, "PROP8-H1-UPPER2", "upper2",
                     AdjointVariant::Degree0H1eps));
  defs.push_back(adj("PROP9-DUALITY", W, "PROP19-DUALITY", "ixi1v",
                     AdjointVariant::Degree1Duality));
  defs.push_back(adj("PROP19-DUALITY", P, "PROP9-DUALITY", "ixi1v",
                     AdjointVariant::Degree1Duality));
  defs.push_back(adj("PROP8-TRIVIAL", W, "PROP18-TRIVIAL", "multg",
                     AdjointVariant::Degree0L2));
  defs.push_back(adj("PROP18-TRIVIAL", P, "PROP8-TRIVIAL", "multg",
                     AdjointVariant::Degree0L2));

  // products (Props 10/20, 11, 12/21)
  auto prod = [](const char* id, Geometry geom, const char* twin, const char* a,
                 Params pa, const char* b, Params pb, ProductVariant variant,
                 bool starred) {
    std::string sid = id, sa = a, sb = b;
    return EstimateDef{
        sid, geom, twin, std::string("product defect ") + a + (starred ? " x adj " : " x ") + b,
        [sid, geom, sa, pa, sb, pb, variant, starred](const EstimateContext& c) {
          const GridSpec& g = geom == Geometry::Wavetrain ? c.wav_sweep : c.pul_sweep;
          return product_defect(sid, standard_symbol_family(sa, pa, g),
                                standard_symbol_family(sb, pb, g), g, c.sweep, variant,
                                starred, c.opt);
        }};
  };
  defs.push_back(prod("PROP10-STAR", W, "PROP20-STAR", "resolvent", {}, "multg", {},
                      ProductVariant::Deg00L2, true));
  defs.push_back(prod("PROP20-STAR", P, "PROP10-STAR", "resolvent", {}, "multg", {},
                      ProductVariant::Deg00L2, true));
  defs.push_back(prod("PROP11-00", W, "PROP20-00", "resolvent", {}, "multg", {},
                      ProductVariant::Deg00L2, false));
  defs.push_back(prod("PROP20-00", P, "PROP11-00", "resolvent", {}, "multg", {},
                      ProductVariant::Deg00L2, false));
  defs.push_back(prod("PROP11-H1", W, "PROP20-H1", "resolvent", {}, "multg", {},
                      ProductVariant::Deg00H1eps, false));
  defs.push_back(prod("PROP20-H1", P, "PROP11-H1", "resolvent", {}, "multg", {},
                      ProductVariant::Deg00H1eps, false));
  defs.push_back(prod("PROP11-10", W, "PROP20-10", "ixi1v", {}, "multg", {},
                      ProductVariant::MixedDeg1L2, false));
  defs.push_back(prod("PROP20-10", P, "PROP11-10", "ixi1v", {}, "multg", {},
                      ProductVariant::MixedDeg1L2, false));
  defs.push_back(prod("PROP12-M1P1", W, "PROP21-M1P1", "smoothneg", {}, "ixi1v", {},
                      ProductVariant::DegM1P1H1eps, false));
  defs.push_back(prod("PROP21-M1P1", P, "PROP12-M1P1", "smoothneg", {}, "ixi1v", {},
                      ProductVariant::DegM1P1H1eps, false));
  defs.push_back(prod("PROP11-TRIVIAL", W, "PROP20-TRIVIAL", "bracket", {{"m", -1.0}},
                      "bracket", {{"m", 1.0}}, ProductVariant::MixedDeg1L2, false));
  defs.push_back(prod("PROP20-TRIVIAL", P, "PROP11-TRIVIAL", "bracket", {{"m", -1.0}},
                      "bracket", {{"m", 1.0}}, ProductVariant::MixedDeg1L2, false));

  // Garding (Thms 5/11)
  auto gard = [](const char* id, Geometry geom, const char* twin, const char* sym) {
    std::string sid = id, ssym = sym;
    return EstimateDef{sid, geom, twin, std::string("Garding inequality for ") + sym,
                       [sid, geom, ssym](const EstimateContext& c) {
                         const GridSpec& g =
                             geom == Geometry::Wavetrain ? c.wav_sweep : c.pul_sweep;
                         return garding_defect(sid, standard_symbol_family(ssym, {}, g),
                                               g, c.sweep, {}, c.opt);
                       }};
  };
  defs.push_back(gard("THM5-GARDING", W, "THM11-GARDING", "garding"));
  defs.push_back(gard("THM11-GARDING", P, "THM5-GARDING", "garding"));
  defs.push_back(gard("THM5-GARDING2", W, "THM11-GARDING2", "garding2"));
  defs.push_back(gard("THM11-GARDING2", P, "THM5-GARDING2", "garding2"));

  // exploratory probes (report-only)
  add("REVPROBE", W, "", "(+1,-1) reverse-order product probe",
      [](const EstimateContext& c) {
        return reverse_product_probe(
            "REVPROBE", standard_symbol_family("smoothneg", {}, c.wav_sweep), c.wav_sweep,
            c.sweep, c.opt);
      });
  add("REM4-DEG2", W, "", "degree -2 smoothing probe (Remark 4, report-only)",
      [](const EstimateContext& c) {
        SymbolFamily fam =
            standard_symbol_family("bracketv", {{"m", -2.0}, {"a", 0.5}}, c.wav_sweep);
        CellFn cell = [&](double e, double gam) {
          LinOpPtr op = make_singular_op(fam.at(e, gam), c.wav_sweep);
          NormParams p{0.0, gam, e, fam.beta};
          return operator_norm_sobolev(*op, 0.0, 2.0, p, c.opt.method, c.opt.power);
        };
        DefectReport rep = measure_sweep("REM4-DEG2", Geometry::Wavetrain, c.sweep, cell,
                                         0.0, 0.0, false, "L2 -> H^{2,eps} of degree -2");
        rep.pass = true;
        rep.note = "observation only: smoothing two orders may blow up in eps";
        return rep;
      });

  // decay checks
  add("DECAY-BRACKET", W, "", "decay check of bracket(1)",
      [](const EstimateContext& c) {
        return run_decay(c, Geometry::Wavetrain, "DECAY-BRACKET", "bracket", {{"m", 1.0}},
                         true);
      });
  add("DECAY-IXI1", W, "", "decay check of i zeta_1",
      [](const EstimateContext& c) {
        return run_decay(c, Geometry::Wavetrain, "DECAY-IXI1", "ixi1", {}, true);
      });
  add("DECAY-EXPXI", W, "", "designed decay-check failure (e^{|zeta|})",
      [](const EstimateContext& c) {
        return run_decay(c, Geometry::Wavetrain, "DECAY-EXPXI", "expxi", {}, false);
      });

  // empirical Calderon-Vaillancourt constants
  add("THM1-CONST-WT", W, "THM1-CONST-P", "empirical L2-bound constant",
      [](const EstimateContext& c) {
        return run_thm1_constant(c, c.wav_sweep, "THM1-CONST-WT");
      });
  add("THM1-CONST-P", P, "THM1-CONST-WT", "empirical L2-bound constant",
      [](const EstimateContext& c) {
        return run_thm1_constant(c, c.pul_sweep, "THM1-CONST-P");
      });

  add("LADDER-WT", W, "LADDER-P", "truncation-ladder semantics",
      [](const EstimateContext& c) { return run_ladder(c, c.wav_small, "LADDER-WT"); });
  add("LADDER-P", P, "LADDER-WT", "truncation-ladder semantics",
      [](const EstimateContext& c) { return run_ladder(c, c.pul_small, "LADDER-P"); });

  add("PULSE-PROFILES", P, "", "<theta>-weighted profile certification",
      [](const EstimateContext& c) {
        return run_pulse_profiles(c, c.pul_sweep, "PULSE-PROFILES");
      });
  add("PULSE-REFINE", P, "", "k-lattice refinement stability",
      [](const EstimateContext& c) { return run_refinement(c, "PULSE-REFINE"); });

  return defs;
}

}  // namespace

const std::vector<EstimateDef>& estimate_registry() {
  static const std::vector<EstimateDef> defs = build_registry();
  return defs;
}

const EstimateDef& find_estimate(const std::string& id) {
  for (const auto& d : estimate_registry())
    if (d.id == id) return d;
  fail(ErrorCode::Lookup, "unknown estimate '" + id + "'");
}

std::vector<std::string> estimate_ids() {
  std::vector<std::string> out;
  for (const auto& d : estimate_registry()) out.push_back(d.id);
  return out;
}

}  // namespace spcalc
