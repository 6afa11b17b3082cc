#include "spcalc/symbols.hpp"

#include <cmath>

namespace spcalc {

namespace {

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// smootherstep on [0,1]
double smoothstep01(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

}  // namespace

Profile zero_profile(int q) {
  // eval left empty: is_zero() keys off it and every consumer short-circuits
  Profile p;
  p.name = "zero";
  p.q = q;
  p.value_set_radius = 0.0;
  return p;
}

void SingularSymbol::profile_values(std::span<const double> x, double theta,
                                    std::span<double> v) const {
  if (V.is_zero()) {
    for (auto& t : v) t = 0.0;
    return;
  }
  V.values_at(x, theta, v);
  for (auto& t : v) t *= epsilon;
}

CMat SingularSymbol::evaluate_shifted(std::span<const double> x, double theta,
                                      std::span<const double> zeta) const {
  double vbuf[4] = {0, 0, 0, 0};
  std::span<double> v(vbuf, std::size_t(sigma.q));
  profile_values(x, theta, v);
  double r2 = norm_sq(v);
  require(r2 <= sigma.domain_radius * sigma.domain_radius, ErrorCode::Domain,
          "profile value eps*V left the symbol domain");
  return sigma.eval(v, zeta, gamma);
}

CMat SingularSymbol::evaluate(std::span<const double> x, double theta,
                              std::span<const double> xi, double kappa) const {
  double zbuf[4] = {0, 0, 0, 0};
  int d = int(beta.size());
  for (int a = 0; a < d; ++a) zbuf[a] = xi[a] + kappa * beta[a] / epsilon;
  return evaluate_shifted(x, theta, std::span<const double>(zbuf, std::size_t(d)));
}

std::string SingularSymbol::describe() const {
  return "Op[" + sigma.name + ";V=" + V.name + ";eps=" + format_double(epsilon) +
         ";gamma=" + format_double(gamma) + "]";
}

CMat SingularAmplitude::evaluate(std::span<const double> x, double theta,
                                 std::span<const double> y, double omega,
                                 std::span<const double> xi, double kappa) const {
  double vbuf[4] = {0, 0, 0, 0}, wbuf[4] = {0, 0, 0, 0}, zbuf[4] = {0, 0, 0, 0};
  std::span<double> v(vbuf, std::size_t(sigma.qv)), w(wbuf, std::size_t(sigma.qw));
  if (!V.is_zero()) {
    V.values_at(x, theta, v);
    for (auto& t : v) t *= epsilon;
  }
  if (!W.is_zero()) {
    W.values_at(y, omega, w);
    for (auto& t : w) t *= epsilon;
  }
  int d = int(beta.size());
  for (int a = 0; a < d; ++a) zbuf[a] = xi[a] + kappa * beta[a] / epsilon;
  return sigma.eval(v, w, std::span<const double>(zbuf, std::size_t(d)), gamma);
}

CMat SingularAmplitude::d_incoming(int dir, std::span<const double> x, double theta,
                                   std::span<const double> y, double omega,
                                   std::span<const double> xi, double kappa) const {
  if (W.is_zero() || !sigma.w_dependent) return CMat(sigma.ncomp);
  require(bool(sigma.dw), ErrorCode::Smoothness,
          "amplitude '" + sigma.name + "' has no analytic w-derivative");
  require(bool(W.grad), ErrorCode::Smoothness,
          "profile '" + W.name + "' has no analytic gradient");
  double vbuf[4] = {0, 0, 0, 0}, wbuf[4] = {0, 0, 0, 0}, zbuf[4] = {0, 0, 0, 0};
  std::span<double> v(vbuf, std::size_t(sigma.qv)), w(wbuf, std::size_t(sigma.qw));
  if (!V.is_zero()) {
    V.values_at(x, theta, v);
    for (auto& t : v) t *= epsilon;
  }
  CMat out(sigma.ncomp);
  W.values_at(y, omega, w);
  for (auto& t : w) t *= epsilon;
  int d = int(beta.size());
  for (int a = 0; a < d; ++a) zbuf[a] = xi[a] + kappa * beta[a] / epsilon;
  std::span<const double> zeta(zbuf, std::size_t(d));
  for (int c = 0; c < sigma.qw; ++c) {
    double g = epsilon * W.grad(c, dir, y, omega);
    if (g == 0.0) continue;
    out = out + sigma.dw(c, v, w, zeta, gamma) * cplx(g);
  }
  return out;
}

std::string SingularAmplitude::describe() const {
  return "Opt[" + sigma.name + ";V=" + V.name + ";W=" + W.name +
         ";eps=" + format_double(epsilon) + ";gamma=" + format_double(gamma) + "]";
}

double extended_cutoff(std::span<const double> zeta1, std::span<const double> zeta2) {
  double n1 = std::sqrt(norm_sq(zeta1));
  double n2 = std::sqrt(norm_sq(zeta2));
  if (n2 == 0.0) return n1 == 0.0 ? 1.0 : 0.0;
  double ratio = n1 / n2;
  // 1 on ratio <= 1/4, 0 on ratio >= 1/2
  return 1.0 - smoothstep01((ratio - 0.25) / 0.25);
}

ExtendedSymbol make_extended_cutoff(int d) {
  ExtendedSymbol es;
  es.name = "freq-cutoff";
  es.degree = 0.0;
  es.q = 1;
  es.ncomp = 1;
  (void)d;
  es.eval = [](std::span<const double>, std::span<const double>,
               std::span<const double> z1, std::span<const double> z2, double) {
    return CMat::scalar(extended_cutoff(z1, z2));
  };
  return es;
}

CMat evaluate_extended(const ExtendedSymbol& es, const Profile& V,
                       const std::vector<double>& beta, double eps, double gamma,
                       std::span<const double> x, double theta,
                       std::span<const double> xi, double kappa) {
  double vbuf[4] = {0, 0, 0, 0};
  std::span<double> v(vbuf, std::size_t(es.q));
  if (!V.is_zero()) {
    V.values_at(x, theta, v);
    for (auto& t : v) t *= eps;
  } else {
    for (auto& t : v) t = 0.0;
  }
  int d = int(beta.size());
  double shifted[4], z2[4];
  for (int a = 0; a < d; ++a) {
    z2[a] = kappa * beta[a] / eps;
    shifted[a] = xi[a] + z2[a];
  }
  return es.eval(v, std::span<const double>(shifted, std::size_t(d)), xi,
                 std::span<const double>(z2, std::size_t(d)), gamma);
}

// ---------------------------------------------------------------------------
// Seminorms

namespace {

// direction ids for the finite-difference engine
struct DirSet {
  int d = 1;
  // ids: 0..d-1 = x, d = theta, d+1..2d = y, 2d+1 = omega, 2d+2..3d+1 = xi, 3d+2 = k
  int x(int a) const { return a; }
  int theta() const { return d; }
  int y(int a) const { return d + 1 + a; }
  int omega() const { return 2 * d + 1; }
  int xi(int a) const { return 2 * d + 2 + a; }
  int k() const { return 3 * d + 2; }
  int count() const { return 3 * d + 3; }
};

struct ProbePoint {
  double x[4] = {0, 0, 0, 0};
  double theta = 0.0;
};

struct FreqPoint {
  double xi[4] = {0, 0, 0, 0};
  double kappa = 0.0;
};

std::vector<double> axis_samples(double lo, double hi, int count) {
  std::vector<double> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * (i + 0.25) / count);
  return out;
}

std::vector<ProbePoint> grid_probe(const GridSpec& g, const SeminormOptions& opt) {
  int per_axis = std::min(g.Nx, opt.grid_samples) * opt.refine;
  auto xs = axis_samples(-g.L, g.L, per_axis);
  std::vector<double> ths;
  if (g.geometry == Geometry::Wavetrain)
    ths = axis_samples(0.0, 1.0, std::min(g.theta_points(), opt.grid_samples) * opt.refine);
  else
    ths = axis_samples(-g.Theta, g.Theta,
                       std::min(g.Ntheta, opt.grid_samples) * opt.refine);
  std::vector<ProbePoint> out;
  if (g.d == 1) {
    for (double x : xs)
      for (double th : ths) {
        ProbePoint p;
        p.x[0] = x;
        p.theta = th;
        out.push_back(p);
      }
  } else {
    // multi-d: probe along the diagonal and the first axis to keep cost sane
    for (double x : xs)
      for (double th : ths) {
        ProbePoint p;
        for (int a = 0; a < g.d; ++a) p.x[a] = (a == 0) ? x : 0.37 * x;
        p.theta = th;
        out.push_back(p);
      }
  }
  return out;
}

std::vector<FreqPoint> freq_probe(const GridSpec& g, const SeminormOptions& opt) {
  int nxi = std::min(g.Nx, opt.freq_samples);
  std::vector<double> xis;
  for (int i = 0; i < nxi; ++i) {
    double t = double(i) / std::max(1, nxi - 1);
    double n = -double(g.Nx / 2) + t * (g.Nx - 1);
    for (int r = 0; r < opt.refine; ++r)
      xis.push_back((n + double(r) / opt.refine) * g.dxi());
  }
  std::vector<double> kappas;
  int nk = std::min(g.theta_modes(), opt.freq_samples);
  for (int i = 0; i < nk; ++i) {
    double t = double(i) / std::max(1, nk - 1);
    if (g.geometry == Geometry::Wavetrain) {
      int k = int(std::lround(-g.Kmax + t * (2 * g.Kmax)));
      kappas.push_back(kTwoPi * k);
    } else {
      double n = -double(g.Ntheta / 2) + t * (g.Ntheta - 1);
      for (int r = 0; r < opt.refine; ++r)
        kappas.push_back((n + double(r) / opt.refine) * g.dk());
    }
  }
  std::vector<FreqPoint> out;
  for (double xi : xis)
    for (double kap : kappas) {
      FreqPoint f;
      f.xi[0] = xi;
      for (int a = 1; a < g.d; ++a) f.xi[a] = 0.61 * xi;
      f.kappa = kap;
      out.push_back(f);
    }
  return out;
}

struct EvalPoint {
  double x[4], theta, y[4], omega, xi[4], kappa;
};

using PointFn = std::function<CMat(const EvalPoint&)>;

// nested centered differences; orders[dir] in {0,1,2}
CMat fd_eval(const PointFn& fn, EvalPoint pt, const std::vector<int>& orders,
             const std::vector<double>& steps, const DirSet& ds, int dir) {
  if (dir < 0) return fn(pt);
  if (orders[dir] == 0) return fd_eval(fn, pt, orders, steps, ds, dir - 1);
  double h = steps[dir];
  auto shift = [&](EvalPoint p, double delta) {
    if (dir < ds.d)
      p.x[dir] += delta;
    else if (dir == ds.theta())
      p.theta += delta;
    else if (dir < ds.omega())
      p.y[dir - ds.d - 1] += delta;
    else if (dir == ds.omega())
      p.omega += delta;
    else if (dir < ds.k())
      p.xi[dir - 2 * ds.d - 2] += delta;
    else
      p.kappa += delta;
    return p;
  };
  if (orders[dir] == 1) {
    CMat hi = fd_eval(fn, shift(pt, h), orders, steps, ds, dir - 1);
    CMat lo = fd_eval(fn, shift(pt, -h), orders, steps, ds, dir - 1);
    return (hi - lo) * cplx(0.5 / h);
  }
  CMat hi = fd_eval(fn, shift(pt, h), orders, steps, ds, dir - 1);
  CMat mid = fd_eval(fn, pt, orders, steps, ds, dir - 1);
  CMat lo = fd_eval(fn, shift(pt, -h), orders, steps, ds, dir - 1);
  return (hi - mid * cplx(2.0) + lo) * cplx(1.0 / (h * h));
}

void enumerate_orders(const std::vector<std::pair<int, int>>& dirs_max,  // (dir, max)
                      std::vector<std::vector<int>>& out, std::vector<int>& cur,
                      std::size_t i, int total_dirs) {
  if (i == dirs_max.size()) {
    out.push_back(cur);
    return;
  }
  for (int o = 0; o <= dirs_max[i].second; ++o) {
    cur[dirs_max[i].first] = o;
    enumerate_orders(dirs_max, out, cur, i + 1, total_dirs);
  }
  cur[dirs_max[i].first] = 0;
}

double japanese_bracket(double t) { return std::sqrt(1.0 + t * t); }

double seminorm_impl(const PointFn& fn, const GridSpec& g, SeminormMode mode,
                     const SeminormOptions& opt, bool has_incoming) {
  DirSet ds{g.d};
  std::vector<std::pair<int, int>> dirs;
  bool w_theta = false, w_omega = false;
  switch (mode) {
    case SeminormMode::Pseudo:
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.x(a), 1});
      dirs.push_back({ds.theta(), 1});
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.xi(a), 1});
      break;
    case SeminormMode::Amp:
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.x(a), 1});
      dirs.push_back({ds.theta(), 1});
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.y(a), 1});
      dirs.push_back({ds.omega(), 1});
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.xi(a), 2});
      break;
    case SeminormMode::PulsePseudo:
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.x(a), 1});
      dirs.push_back({ds.theta(), 1});
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.xi(a), 1});
      w_theta = true;
      break;
    case SeminormMode::PulseAmpK:
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.x(a), 1});
      dirs.push_back({ds.theta(), 1});
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.y(a), 1});
      dirs.push_back({ds.omega(), 1});
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.xi(a), 2});
      dirs.push_back({ds.k(), 1});
      w_omega = true;
      break;
    case SeminormMode::PulseAmpNoK:
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.x(a), 1});
      dirs.push_back({ds.theta(), 1});
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.y(a), 1});
      dirs.push_back({ds.omega(), 1});
      for (int a = 0; a < g.d; ++a) dirs.push_back({ds.xi(a), 2});
      w_theta = w_omega = true;
      break;
  }
  if ((mode == SeminormMode::PulsePseudo || mode == SeminormMode::PulseAmpK ||
       mode == SeminormMode::PulseAmpNoK)) {
    require(g.geometry == Geometry::Pulse, ErrorCode::Geometry,
            "pulse seminorm mode on a wavetrain grid");
  }

  std::vector<std::vector<int>> order_sets;
  std::vector<int> cur(ds.count(), 0);
  enumerate_orders(dirs, order_sets, cur, 0, ds.count());

  std::vector<double> steps(ds.count(), opt.fd_step);
  for (int a = 0; a < g.d; ++a) steps[ds.xi(a)] = g.dxi();
  steps[ds.k()] = g.dk();

  auto gp = grid_probe(g, opt);
  auto fp = freq_probe(g, opt);
  std::vector<ProbePoint> gp_in = has_incoming ? gp : std::vector<ProbePoint>{ProbePoint{}};

  double sup = 0.0;
  for (const auto& orders : order_sets) {
    for (const auto& po : gp) {
      for (const auto& pi : gp_in) {
        double weight = 1.0;
        if (w_theta) weight *= japanese_bracket(po.theta);
        if (w_omega) weight *= japanese_bracket(pi.theta);
        for (const auto& f : fp) {
          EvalPoint pt{};
          for (int a = 0; a < g.d; ++a) {
            pt.x[a] = po.x[a];
            pt.y[a] = pi.x[a];
            pt.xi[a] = f.xi[a];
          }
          pt.theta = po.theta;
          pt.omega = pi.theta;
          pt.kappa = f.kappa;
          CMat val = fd_eval(fn, pt, orders, steps, ds, ds.count() - 1);
          sup = std::max(sup, weight * val.norm2());
        }
      }
    }
  }
  return sup;
}

}  // namespace

double symbol_seminorm(const SingularSymbol& sym, const GridSpec& grid,
                       SeminormMode mode, const SeminormOptions& opt) {
  require(mode == SeminormMode::Pseudo || mode == SeminormMode::PulsePseudo,
          ErrorCode::Parameter, "symbol seminorm needs a pseudo mode");
  PointFn fn = [&](const EvalPoint& p) {
    std::span<const double> x(p.x, std::size_t(grid.d));
    std::span<const double> xi(p.xi, std::size_t(grid.d));
    return sym.evaluate(x, p.theta, xi, p.kappa);
  };
  return seminorm_impl(fn, grid, mode, opt, false);
}

double amplitude_seminorm(const SingularAmplitude& amp, const GridSpec& grid,
                          SeminormMode mode, const SeminormOptions& opt) {
  require(mode != SeminormMode::Pseudo && mode != SeminormMode::PulsePseudo,
          ErrorCode::Parameter, "amplitude seminorm needs an amplitude mode");
  if (mode == SeminormMode::PulseAmpK) {
    // one k-derivative is part of the family; the profiles must certify
    // enough smoothness for the finite differences to make sense
    require(amp.V.smoothness >= 2 && amp.W.smoothness >= 2, ErrorCode::Smoothness,
            "profiles too rough for the requested seminorm mode");
  }
  PointFn fn = [&](const EvalPoint& p) {
    std::span<const double> x(p.x, std::size_t(grid.d));
    std::span<const double> y(p.y, std::size_t(grid.d));
    std::span<const double> xi(p.xi, std::size_t(grid.d));
    return amp.evaluate(x, p.theta, y, p.omega, xi, p.kappa);
  };
  return seminorm_impl(fn, grid, mode, opt, true);
}

// ---------------------------------------------------------------------------
// Decay check

namespace {

double decay_sample_sup(const BaseSymbol& sigma, double k_radius,
                        const std::vector<int>& alpha, const std::vector<int>& nu,
                        int d, int v_density, double xi_max, double xi_density) {
  // v lattice in the ball of radius k_radius
  std::vector<std::vector<double>> vs;
  {
    std::vector<double> axis;
    for (int i = 0; i < v_density; ++i)
      axis.push_back(-k_radius + 2.0 * k_radius * i / std::max(1, v_density - 1));
    if (sigma.q == 1) {
      for (double t : axis) vs.push_back({t});
    } else {
      for (double t : axis)
        for (double u : axis) {
          std::vector<double> v(sigma.q, 0.0);
          v[0] = t;
          v[1] = u * 0.7;
          double r = 0.0;
          for (double z : v) r += z * z;
          if (r <= k_radius * k_radius) vs.push_back(v);
        }
    }
  }
  // log xi lattice with sign/direction variations
  std::vector<std::vector<double>> xis;
  xis.push_back(std::vector<double>(d, 0.0));
  for (double mag = 0.25; mag <= xi_max * 1.0001; mag *= xi_density) {
    for (int a = 0; a < d; ++a)
      for (double s : {1.0, -1.0}) {
        std::vector<double> xi(d, 0.0);
        xi[a] = s * mag;
        xis.push_back(xi);
      }
    if (d > 1) {
      std::vector<double> xi(d, mag / std::sqrt(double(d)));
      xis.push_back(xi);
    }
  }
  std::vector<double> gammas{1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};

  double m = sigma.degree;
  int order_nu = 0;
  for (int o : nu) order_nu += o;

  auto deriv = [&](std::span<const double> v, std::span<const double> xi,
                   double gamma) -> CMat {
    // nested central differences over v (alpha) then xi (nu), orders <= 2
    std::function<CMat(std::vector<double>, std::vector<double>, int)> dv_rec;
    std::function<CMat(std::vector<double>, std::vector<double>, int)> dxi_rec;
    dxi_rec = [&](std::vector<double> vv, std::vector<double> xx, int axis) -> CMat {
      if (axis < 0) return sigma.eval(vv, xx, gamma);
      double h = 1e-3 * std::max(1.0, std::abs(xx[axis]));
      int o = nu[axis];
      if (o == 0) return dxi_rec(vv, xx, axis - 1);
      auto at = [&](double delta) {
        auto x2 = xx;
        x2[axis] += delta;
        return dxi_rec(vv, x2, axis - 1);
      };
      if (o == 1) return (at(h) - at(-h)) * cplx(0.5 / h);
      return (at(h) - dxi_rec(vv, xx, axis - 1) * cplx(2.0) + at(-h)) *
             cplx(1.0 / (h * h));
    };
    dv_rec = [&](std::vector<double> vv, std::vector<double> xx, int axis) -> CMat {
      if (axis < 0) return dxi_rec(vv, xx, int(xx.size()) - 1);
      double h = 1e-4;
      int o = alpha[axis];
      if (o == 0) return dv_rec(vv, xx, axis - 1);
      auto at = [&](double delta) {
        auto v2 = vv;
        v2[axis] += delta;
        return dv_rec(v2, xx, axis - 1);
      };
      if (o == 1) return (at(h) - at(-h)) * cplx(0.5 / h);
      return (at(h) - dv_rec(vv, xx, axis - 1) * cplx(2.0) + at(-h)) *
             cplx(1.0 / (h * h));
    };
    return dv_rec(std::vector<double>(v.begin(), v.end()),
                  std::vector<double>(xi.begin(), xi.end()), sigma.q - 1);
  };

  double sup = 0.0;
  for (const auto& v : vs)
    for (const auto& xi : xis)
      for (double gamma : gammas) {
        double weight = std::pow(gamma * gamma + norm_sq(xi), -0.5 * (m - order_nu));
        CMat val = deriv(v, xi, gamma);
        double t = weight * val.norm2();
        if (std::isfinite(t))
          sup = std::max(sup, t);
        else
          return std::numeric_limits<double>::infinity();
      }
  return sup;
}

}  // namespace

DecayReport decay_check(const BaseSymbol& sigma, double k_radius, int max_order, int d) {
  DecayReport rep;
  rep.symbol = sigma.name;
  rep.pass = true;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> orders;
  // all (alpha, nu) with per-axis orders summing to <= max_order
  std::vector<std::vector<int>> alphas, nus;
  {
    std::vector<int> cur(sigma.q, 0);
    std::function<void(int, int)> rec = [&](int axis, int rem) {
      if (axis == sigma.q) {
        alphas.push_back(cur);
        return;
      }
      for (int o = 0; o <= rem; ++o) {
        cur[axis] = o;
        rec(axis + 1, rem - o);
      }
      cur[axis] = 0;
    };
    rec(0, max_order);
  }
  {
    std::vector<int> cur(d, 0);
    std::function<void(int, int)> rec = [&](int axis, int rem) {
      if (axis == d) {
        nus.push_back(cur);
        return;
      }
      for (int o = 0; o <= rem; ++o) {
        cur[axis] = o;
        rec(axis + 1, rem - o);
      }
      cur[axis] = 0;
    };
    rec(0, max_order);
  }
  for (const auto& alpha : alphas) {
    int oa = 0;
    for (int o : alpha) oa += o;
    for (const auto& nu : nus) {
      int on = 0;
      for (int o : nu) on += o;
      if (oa + on > max_order) continue;
      DecayEntry e;
      e.alpha = alpha;
      e.nu = nu;
      e.sup_base = decay_sample_sup(sigma, k_radius, alpha, nu, d, 5, 64.0, 2.0);
      e.sup_refined = decay_sample_sup(sigma, k_radius, alpha, nu, d, 9, 256.0, 1.5);
      if (!std::isfinite(e.sup_base) || !std::isfinite(e.sup_refined)) {
        e.ratio = std::numeric_limits<double>::infinity();
        e.pass = false;
      } else {
        e.ratio = e.sup_base > 0.0 ? e.sup_refined / e.sup_base
                                   : (e.sup_refined > 1e-12 ? 1e9 : 1.0);
        e.pass = e.ratio <= 1.5;
      }
      rep.pass = rep.pass && e.pass;
      rep.entries.push_back(std::move(e));
    }
  }
  return rep;
}

}  // namespace spcalc
