#include <cmath>

#include "spcalc/symbols.hpp"

namespace spcalc {

namespace {

double get(const Params& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

void check_keys(const Params& p, std::initializer_list<const char*> allowed,
                const std::string& owner) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* a : allowed)
      if (k == a) ok = true;
    require(ok, ErrorCode::Config, "unknown parameter '" + k + "' for '" + owner + "'");
  }
}

double nsq(std::span<const double> z) {
  double s = 0.0;
  for (double t : z) s += t * t;
  return s;
}

// gamma (gamma^2+|zeta|^2)^{-1/2}: the bounded degree-0 building block
double damp(std::span<const double> z, double g) { return g / std::sqrt(g * g + nsq(z)); }

}  // namespace

BaseSymbol make_symbol(const std::string& name, const Params& params) {
  BaseSymbol s;
  s.name = name;
  if (name == "identity") {
    check_keys(params, {"ncomp"}, name);
    s.ncomp = int(get(params, "ncomp", 1));
    s.degree = 0.0;
    s.v_dependent = false;
    s.xi_dependent = false;
    int n = s.ncomp;
    s.eval = [n](std::span<const double>, std::span<const double>, double) {
      return CMat::identity(n);
    };
    return s;
  }
  if (name == "ixi1") {
    check_keys(params, {}, name);
    s.degree = 1.0;
    s.v_dependent = false;
    s.eval = [](std::span<const double>, std::span<const double> z, double) {
      return CMat::scalar(cplx(0.0, z[0]));
    };
    s.dxi = [](int axis, std::span<const double>, std::span<const double>, double) {
      return CMat::scalar(axis == 0 ? cplx(0.0, 1.0) : cplx(0.0));
    };
    return s;
  }
  if (name == "bracket") {
    check_keys(params, {"m"}, name);
    double m = get(params, "m", 1.0);
    s.degree = m;
    s.v_dependent = false;
    s.eval = [m](std::span<const double>, std::span<const double> z, double g) {
      return CMat::scalar(std::pow(g * g + nsq(z), 0.5 * m));
    };
    s.dxi = [m](int axis, std::span<const double>, std::span<const double> z, double g) {
      return CMat::scalar(m * z[axis] * std::pow(g * g + nsq(z), 0.5 * m - 1.0));
    };
    return s;
  }
  if (name == "resolvent") {
    check_keys(params, {}, name);
    s.degree = 0.0;
    s.domain_radius = 0.9;
    s.eval = [](std::span<const double> v, std::span<const double> z, double g) {
      return CMat::scalar(g / (cplx(g + v[0], -z[0])));
    };
    s.dv = [](int axis, std::span<const double> v, std::span<const double> z, double g) {
      if (axis != 0) return CMat::scalar(0.0);
      cplx den = cplx(g + v[0], -z[0]);
      return CMat::scalar(-g / (den * den));
    };
    s.dxi = [](int axis, std::span<const double> v, std::span<const double> z, double g) {
      if (axis != 0) return CMat::scalar(0.0);
      cplx den = cplx(g + v[0], -z[0]);
      return CMat::scalar(g * cplx(0.0, 1.0) / (den * den));
    };
    return s;
  }
  if (name == "multg") {
    check_keys(params, {"a", "b"}, name);
    double a = get(params, "a", 1.0), b = get(params, "b", 0.5);
    s.degree = 0.0;
    s.xi_dependent = false;
    s.eval = [a, b](std::span<const double> v, std::span<const double>, double) {
      return CMat::scalar(1.0 + a * v[0] + b * v[0] * v[0]);
    };
    s.dv = [a, b](int axis, std::span<const double> v, std::span<const double>, double) {
      return CMat::scalar(axis == 0 ? a + 2.0 * b * v[0] : 0.0);
    };
    return s;
  }
  if (name == "smoothneg") {
    check_keys(params, {"a"}, name);
    double a = get(params, "a", 0.5);
    s.degree = -1.0;
    s.eval = [a](std::span<const double> v, std::span<const double> z, double g) {
      return CMat::scalar((1.0 + a * v[0]) / std::sqrt(g * g + nsq(z)));
    };
    return s;
  }
  if (name == "bracketv") {
    check_keys(params, {"m", "a"}, name);
    double m = get(params, "m", 1.0), a = get(params, "a", 0.5);
    s.degree = m;
    s.eval = [m, a](std::span<const double> v, std::span<const double> z, double g) {
      return CMat::scalar((1.0 + a * v[0]) * std::pow(g * g + nsq(z), 0.5 * m));
    };
    return s;
  }
  if (name == "ixi1v") {
    check_keys(params, {"a"}, name);
    double a = get(params, "a", 0.5);
    s.degree = 1.0;
    s.eval = [a](std::span<const double> v, std::span<const double> z, double) {
      return CMat::scalar(cplx(0.0, (1.0 + a * v[0]) * z[0]));
    };
    return s;
  }
  if (name == "rot2") {
    check_keys(params, {"c"}, name);
    double c = get(params, "c", 1.0);
    s.ncomp = 2;
    s.degree = 0.0;
    s.eval = [c](std::span<const double> v, std::span<const double>, double) {
      double t = c * v[0];
      CMat m(2);
      m.at(0, 0) = std::cos(t);
      m.at(0, 1) = -std::sin(t);
      m.at(1, 0) = std::sin(t);
      m.at(1, 1) = std::cos(t);
      return m;
    };
    s.xi_dependent = false;
    return s;
  }
  if (name == "upper2") {
    check_keys(params, {"c"}, name);
    double c = get(params, "c", 0.8);
    s.ncomp = 2;
    s.degree = 0.0;
    s.eval = [c](std::span<const double> v, std::span<const double> z, double g) {
      CMat m = CMat::identity(2);
      m.at(0, 1) = c * v[0] * damp(z, g);
      return m;
    };
    return s;
  }
  if (name == "garding") {
    check_keys(params, {"c0", "c1"}, name);
    double c0 = get(params, "c0", 1.0), c1 = get(params, "c1", 0.3);
    s.degree = 0.0;
    s.eval = [c0, c1](std::span<const double> v, std::span<const double> z, double g) {
      return CMat::scalar(c0 + c1 * v[0] * damp(z, g));
    };
    return s;
  }
  if (name == "garding2") {
    check_keys(params, {"c0", "c1"}, name);
    double c0 = get(params, "c0", 1.0), c1 = get(params, "c1", 0.25);
    s.ncomp = 2;
    s.degree = 0.0;
    s.eval = [c0, c1](std::span<const double> v, std::span<const double> z, double g) {
      CMat m = CMat::identity(2) * cplx(c0);
      double t = c1 * v[0] * damp(z, g);
      m.at(0, 1) += t;
      m.at(1, 0) += t;
      return m;
    };
    return s;
  }
  if (name == "expxi") {
    // deliberately violates every S^m decay order; decay_check must FAIL it
    check_keys(params, {}, name);
    s.degree = 1.0;
    s.v_dependent = false;
    s.eval = [](std::span<const double>, std::span<const double> z, double) {
      return CMat::scalar(std::exp(std::sqrt(nsq(z))));
    };
    return s;
  }
  fail(ErrorCode::Lookup, "unknown symbol '" + name + "'");
}

AmplitudeSymbol make_amplitude(const std::string& name, const Params& params) {
  AmplitudeSymbol s;
  s.name = name;
  using Span = std::span<const double>;
  if (name == "amp0") {
    check_keys(params, {"a", "b"}, name);
    double a = get(params, "a", 0.5), b = get(params, "b", 0.5);
    s.degree = 0.0;
    s.eval = [a, b](Span v, Span w, Span z, double g) {
      return CMat::scalar((1.0 + a * v[0]) * (1.0 + b * w[0]) * damp(z, g));
    };
    s.dw = [a, b](int axis, Span v, Span, Span z, double g) {
      return CMat::scalar(axis == 0 ? (1.0 + a * v[0]) * b * damp(z, g) : 0.0);
    };
    s.separable.push_back(
        {[a](Span v) { return cplx(1.0 + a * v[0]); },
         [b](Span w) { return cplx(1.0 + b * w[0]); },
         [](Span z, double g) { return CMat::scalar(damp(z, g)); }});
    return s;
  }
  if (name == "ampw") {
    check_keys(params, {"a"}, name);
    double a = get(params, "a", 0.8);
    s.degree = 0.0;
    s.eval = [a](Span v, Span w, Span z, double g) {
      return CMat::scalar(1.0 + a * v[0] * w[0] * damp(z, g));
    };
    s.dw = [a](int axis, Span v, Span, Span z, double g) {
      return CMat::scalar(axis == 0 ? a * v[0] * damp(z, g) : 0.0);
    };
    s.separable.push_back({nullptr, nullptr,
                           [](Span, double) { return CMat::scalar(1.0); }});
    s.separable.push_back(
        {[a](Span v) { return cplx(a * v[0]); }, [](Span w) { return cplx(w[0]); },
         [](Span z, double g) { return CMat::scalar(damp(z, g)); }});
    return s;
  }
  if (name == "amp1") {
    check_keys(params, {"a", "b"}, name);
    double a = get(params, "a", 0.5), b = get(params, "b", 0.5);
    s.degree = 1.0;
    s.eval = [a, b](Span v, Span w, Span z, double) {
      return CMat::scalar(cplx(0.0, (1.0 + a * v[0] + b * w[0]) * z[0]));
    };
    s.dw = [b](int axis, Span, Span, Span z, double) {
      return CMat::scalar(axis == 0 ? cplx(0.0, b * z[0]) : cplx(0.0));
    };
    s.separable.push_back({nullptr, nullptr, [](Span z, double) {
                             return CMat::scalar(cplx(0.0, z[0]));
                           }});
    s.separable.push_back({[a](Span v) { return cplx(a * v[0]); }, nullptr,
                           [](Span z, double) { return CMat::scalar(cplx(0.0, z[0])); }});
    s.separable.push_back({nullptr, [b](Span w) { return cplx(b * w[0]); },
                           [](Span z, double) { return CMat::scalar(cplx(0.0, z[0])); }});
    return s;
  }
  if (name == "ampm1") {
    check_keys(params, {"b"}, name);
    double b = get(params, "b", 0.5);
    s.degree = -1.0;
    s.eval = [b](Span, Span w, Span z, double g) {
      return CMat::scalar((1.0 + b * w[0]) / std::sqrt(g * g + nsq(z)));
    };
    s.dw = [b](int axis, Span, Span, Span z, double g) {
      return CMat::scalar(axis == 0 ? b / std::sqrt(g * g + nsq(z)) : 0.0);
    };
    s.separable.push_back({nullptr, nullptr, [](Span z, double g) {
                             return CMat::scalar(1.0 / std::sqrt(g * g + nsq(z)));
                           }});
    s.separable.push_back({nullptr, [b](Span w) { return cplx(b * w[0]); },
                           [](Span z, double g) {
                             return CMat::scalar(1.0 / std::sqrt(g * g + nsq(z)));
                           }});
    return s;
  }
  if (name == "ampy") {
    // pure multiplication placed in the y slot
    check_keys(params, {"b"}, name);
    double b = get(params, "b", 1.0);
    s.degree = 0.0;
    s.xi_dependent = false;
    s.eval = [b](Span, Span w, Span, double) { return CMat::scalar(1.0 + b * w[0]); };
    s.dw = [b](int axis, Span, Span, Span, double) {
      return CMat::scalar(axis == 0 ? b : 0.0);
    };
    s.separable.push_back({nullptr, nullptr,
                           [](Span, double) { return CMat::scalar(1.0); }});
    s.separable.push_back({nullptr, [b](Span w) { return cplx(b * w[0]); },
                           [](Span, double) { return CMat::scalar(1.0); }});
    return s;
  }
  if (name == "amprot2") {
    check_keys(params, {"c", "b"}, name);
    double c = get(params, "c", 1.0), b = get(params, "b", 0.5);
    s.degree = 0.0;
    s.ncomp = 2;
    s.eval = [c, b](Span v, Span w, Span z, double g) {
      double t = c * v[0];
      double fac = (1.0 + b * w[0]) * damp(z, g);
      CMat m(2);
      m.at(0, 0) = fac * std::cos(t);
      m.at(0, 1) = -fac * std::sin(t);
      m.at(1, 0) = fac * std::sin(t);
      m.at(1, 1) = fac * std::cos(t);
      return m;
    };
    s.dw = [c, b](int axis, Span v, Span, Span z, double g) {
      CMat m(2);
      if (axis != 0) return m;
      double t = c * v[0];
      double fac = b * damp(z, g);
      m.at(0, 0) = fac * std::cos(t);
      m.at(0, 1) = -fac * std::sin(t);
      m.at(1, 0) = fac * std::sin(t);
      m.at(1, 1) = fac * std::cos(t);
      return m;
    };
    auto rot_i = [c](Span v) { return cplx(std::cos(c * v[0])); };
    auto rot_j = [c](Span v) { return cplx(std::sin(c * v[0])); };
    auto wfac = [b](Span w) { return cplx(1.0 + b * w[0]); };
    s.separable.push_back({rot_i, wfac, [](Span z, double g) {
                             return CMat::identity(2) * cplx(damp(z, g));
                           }});
    s.separable.push_back({rot_j, wfac, [](Span z, double g) {
                             CMat j(2);
                             j.at(0, 1) = -1.0;
                             j.at(1, 0) = 1.0;
                             return j * cplx(damp(z, g));
                           }});
    return s;
  }
  fail(ErrorCode::Lookup, "unknown amplitude '" + name + "'");
}

Profile make_profile(const std::string& name, const Params& params, const GridSpec& grid) {
  Profile p;
  p.name = name;
  double L = grid.L;
  if (name == "zero") {
    check_keys(params, {}, name);
    return zero_profile(1);
  }
  if (name == "const") {
    check_keys(params, {"r"}, name);
    double r = get(params, "r", 0.4);
    p.value_set_radius = std::abs(r);
    p.eval = [r](std::span<const double>, double, std::span<double> out) { out[0] = r; };
    p.grad = [](int, int, std::span<const double>, double) { return 0.0; };
    return p;
  }
  if (name == "xonly") {
    check_keys(params, {"r", "n"}, name);
    double r = get(params, "r", 0.4);
    p.value_set_radius = std::abs(r);
    p.smoothness = int(get(params, "n", 99));
    p.eval = [r, L](std::span<const double> x, double, std::span<double> out) {
      out[0] = r * std::cos(kPi * x[0] / L);
    };
    p.grad = [r, L](int, int dir, std::span<const double> x, double) {
      return dir == 0 ? -r * kPi / L * std::sin(kPi * x[0] / L) : 0.0;
    };
    return p;
  }
  if (name == "coscos" || name == "sinsin") {
    require(grid.geometry == Geometry::Wavetrain, ErrorCode::Geometry,
            "profile '" + name + "' is periodic in theta (wavetrain only)");
    check_keys(params, {"r", "n"}, name);
    double r = get(params, "r", 0.4);
    p.value_set_radius = std::abs(r);
    p.smoothness = int(get(params, "n", 99));
    bool cos_form = name == "coscos";
    p.eval = [r, L, cos_form](std::span<const double> x, double th, std::span<double> out) {
      out[0] = cos_form ? r * std::cos(kPi * x[0] / L) * std::cos(kTwoPi * th)
                        : r * std::sin(kPi * x[0] / L) * std::sin(kTwoPi * th);
    };
    p.grad = [r, L, cos_form](int, int dir, std::span<const double> x, double th) {
      if (cos_form) {
        if (dir == 0) return -r * kPi / L * std::sin(kPi * x[0] / L) * std::cos(kTwoPi * th);
        return -r * kTwoPi * std::cos(kPi * x[0] / L) * std::sin(kTwoPi * th);
      }
      if (dir == 0) return r * kPi / L * std::cos(kPi * x[0] / L) * std::sin(kTwoPi * th);
      return r * kTwoPi * std::sin(kPi * x[0] / L) * std::cos(kTwoPi * th);
    };
    return p;
  }
  if (name == "gauss" || name == "gaussw") {
    require(grid.geometry == Geometry::Pulse, ErrorCode::Geometry,
            "profile '" + name + "' decays in theta (pulse only)");
    check_keys(params, {"r", "tau", "n"}, name);
    double r = get(params, "r", 0.4);
    double tau = get(params, "tau", 0.0);
    if (tau <= 0.0) tau = grid.Theta / 5.0;
    p.value_set_radius = std::abs(r);
    p.smoothness = int(get(params, "n", 99));
    p.weighted = true;
    if (name == "gauss") {
      p.eval = [r, L, tau](std::span<const double> x, double th, std::span<double> out) {
        out[0] = r * std::cos(kPi * x[0] / L) * std::exp(-(th / tau) * (th / tau));
      };
      p.grad = [r, L, tau](int, int dir, std::span<const double> x, double th) {
        double e = std::exp(-(th / tau) * (th / tau));
        if (dir == 0) return -r * kPi / L * std::sin(kPi * x[0] / L) * e;
        return r * std::cos(kPi * x[0] / L) * e * (-2.0 * th / (tau * tau));
      };
    } else {
      // odd bump (theta/tau) e^{-theta^2/tau^2}, normalized to peak 1
      double norm = std::sqrt(2.0 * std::exp(1.0));
      p.eval = [r, L, tau, norm](std::span<const double> x, double th, std::span<double> out) {
        double t = th / tau;
        out[0] = r * std::sin(kPi * x[0] / L) * norm * t * std::exp(-t * t) / 1.0;
      };
      p.grad = [r, L, tau, norm](int, int dir, std::span<const double> x, double th) {
        double t = th / tau;
        double bump = norm * t * std::exp(-t * t);
        if (dir == 0) return r * kPi / L * std::cos(kPi * x[0] / L) * bump;
        double dbump = norm * (1.0 - 2.0 * t * t) * std::exp(-t * t) / tau;
        return r * std::sin(kPi * x[0] / L) * dbump;
      };
    }
    return p;
  }
  if (name == "sechcos") {
    require(grid.geometry == Geometry::Pulse, ErrorCode::Geometry,
            "profile 'sechcos' decays in theta (pulse only)");
    check_keys(params, {"r", "tau"}, name);
    double r = get(params, "r", 0.4);
    double tau = get(params, "tau", 1.0);
    p.value_set_radius = std::abs(r);
    p.weighted = true;
    p.eval = [r, L, tau](std::span<const double> x, double th, std::span<double> out) {
      out[0] = r * std::cos(kPi * x[0] / L) / std::cosh(th / tau);
    };
    p.grad = [r, L, tau](int, int dir, std::span<const double> x, double th) {
      double sech = 1.0 / std::cosh(th / tau);
      if (dir == 0) return -r * kPi / L * std::sin(kPi * x[0] / L) * sech;
      return -r * std::cos(kPi * x[0] / L) * sech * std::tanh(th / tau) / tau;
    };
    return p;
  }
  fail(ErrorCode::Lookup, "unknown profile '" + name + "'");
}

std::vector<CatalogEntry> catalog_entries() {
  std::vector<CatalogEntry> out;
  auto sym = [&](const std::string& n, Params d, const std::string& doc) {
    out.push_back({n, "symbol", std::move(d), doc});
  };
  auto amp = [&](const std::string& n, Params d, const std::string& doc) {
    out.push_back({n, "amplitude", std::move(d), doc});
  };
  auto prof = [&](const std::string& n, Params d, const std::string& doc) {
    out.push_back({n, "profile", std::move(d), doc});
  };
  sym("identity", {{"ncomp", 1}}, "constant identity matrix, degree 0");
  sym("ixi1", {}, "i*zeta_1, degree 1 Fourier multiplier");
  sym("bracket", {{"m", 1}}, "(gamma^2+|zeta|^2)^{m/2}, degree m multiplier");
  sym("resolvent", {}, "gamma/(gamma + v1 - i zeta_1), degree 0");
  sym("multg", {{"a", 1}, {"b", 0.5}}, "multiplication by 1 + a v1 + b v1^2");
  sym("smoothneg", {{"a", 0.5}}, "(1 + a v1) (gamma^2+|zeta|^2)^{-1/2}, degree -1");
  sym("bracketv", {{"m", 1}, {"a", 0.5}}, "(1 + a v1) bracket(m)");
  sym("ixi1v", {{"a", 0.5}}, "(1 + a v1) i zeta_1, degree 1");
  sym("rot2", {{"c", 1}}, "2x2 rotation by angle c v1, degree 0");
  sym("upper2", {{"c", 0.8}}, "2x2 identity plus damped upper-triangular v1 term");
  sym("garding", {{"c0", 1}, {"c1", 0.3}}, "positive-real-part family, degree 0");
  sym("garding2", {{"c0", 1}, {"c1", 0.25}}, "2x2 Hermitian positive family");
  sym("expxi", {}, "e^{|zeta|}; violates every decay order (test fixture)");
  amp("amp0", {{"a", 0.5}, {"b", 0.5}}, "(1+a v1)(1+b w1) damp(zeta), degree 0");
  amp("ampw", {{"a", 0.8}}, "1 + a v1 w1 damp(zeta), degree 0");
  amp("amp1", {{"a", 0.5}, {"b", 0.5}}, "(1 + a v1 + b w1) i zeta_1, degree 1");
  amp("ampm1", {{"b", 0.5}}, "(1 + b w1) bracket(-1), degree -1");
  amp("ampy", {{"b", 1}}, "multiplication 1 + b w1 placed in the y slot");
  amp("amprot2", {{"c", 1}, {"b", 0.5}}, "2x2 rotation amplitude, degree 0");
  prof("zero", {}, "V = 0");
  prof("const", {{"r", 0.4}}, "constant profile (unbounded <theta> weight)");
  prof("xonly", {{"r", 0.4}, {"n", 99}}, "r cos(pi x1/L), theta-independent");
  prof("coscos", {{"r", 0.4}, {"n", 99}}, "r cos(pi x1/L) cos(2 pi theta) [wavetrain]");
  prof("sinsin", {{"r", 0.4}, {"n", 99}}, "r sin(pi x1/L) sin(2 pi theta) [wavetrain]");
  prof("gauss", {{"r", 0.4}, {"tau", 0}, {"n", 99}},
       "r cos(pi x1/L) exp(-(theta/tau)^2) [pulse], tau=0 -> Theta/5");
  prof("gaussw", {{"r", 0.4}, {"tau", 0}, {"n", 99}},
       "odd Gaussian bump profile [pulse]");
  prof("sechcos", {{"r", 0.4}, {"tau", 1}}, "r sech(theta/tau) cos(pi x1/L) [pulse]");
  return out;
}

}  // namespace spcalc
