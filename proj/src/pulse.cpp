#include "spcalc/pulse.hpp"

#include <cmath>

namespace spcalc {

namespace {

double jb(double t) { return std::sqrt(1.0 + t * t); }

// centered FD of the profile component 0 at (x, theta); orders <= 2 per
// direction are enough for the boundedness check
double profile_fd(const Profile& V, int ox, int ot, double x0, double theta) {
  double h = 0.02;
  auto val = [&](double xx, double th) {
    double buf[4] = {0, 0, 0, 0};
    double xv[1] = {xx};
    V.values_at(std::span<const double>(xv, 1), th, std::span<double>(buf, 1));
    return buf[0];
  };
  auto dx = [&](double th) {
    switch (ox) {
      case 0:
        return val(x0, th);
      case 1:
        return (val(x0 + h, th) - val(x0 - h, th)) / (2 * h);
      default:
        return (val(x0 + h, th) - 2 * val(x0, th) + val(x0 - h, th)) / (h * h);
    }
  };
  switch (ot) {
    case 0:
      return dx(theta);
    case 1:
      return (profile_fd(V, ox, 0, x0, theta + h) - profile_fd(V, ox, 0, x0, theta - h)) /
             (2 * h);
    default:
      return (profile_fd(V, ox, 0, x0, theta + h) - 2 * profile_fd(V, ox, 0, x0, theta) +
              profile_fd(V, ox, 0, x0, theta - h)) /
             (h * h);
  }
}

}  // namespace

ProfileCheckReport pulse_profile_check(const Profile& V, const GridSpec& g,
                                       int max_order) {
  require(g.geometry == Geometry::Pulse, ErrorCode::Geometry,
          "profile check applies to the pulse geometry");
  ProfileCheckReport rep;
  rep.profile = V.name;
  for (int total = 0; total <= max_order; ++total) {
    for (int ox = 0; ox <= total; ++ox) {
      int ot = total - ox;
      if (ox > 2 || ot > 2) continue;
      ProfileCheckEntry e;
      e.dx_order = ox;
      e.dtheta_order = ot;
      for (int m = 0; m < g.Nx; ++m) {
        double x = g.x_coord(m);
        for (int j = 0; j < g.Ntheta; ++j) {
          double th = g.theta_coord(j);
          double w = jb(th) * std::abs(profile_fd(V, ox, ot, x, th));
          e.sup_full = std::max(e.sup_full, w);
          if (std::abs(th) <= 0.5 * g.Theta) e.sup_inner = std::max(e.sup_inner, w);
        }
      }
      e.growth = e.sup_inner > 0.0 ? e.sup_full / e.sup_inner
                                   : (e.sup_full > 1e-12 ? 1e9 : 1.0);
      e.pass = e.growth <= 1.5;
      if (!e.pass && rep.pass) {
        rep.failed_dx = ox;
        rep.failed_dtheta = ot;
      }
      rep.pass = rep.pass && e.pass;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

double theta_weight_shape_sup(const GridSpec& g, int samples) {
  double sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    double th = -g.Theta + 2.0 * g.Theta * (i + 0.5) / samples;
    for (int j = 0; j < samples; ++j) {
      double om = -g.Theta + 2.0 * g.Theta * (j + 0.5) / samples;
      double integral = 0.0;
      int nq = 96;
      for (int q = 0; q < nq; ++q) {
        double t = (q + 0.5) / nq;
        double s = th + t * (om - th);
        integral += 1.0 / (nq * (1.0 + s * s));
      }
      sup = std::max(sup, jb(om - th) * integral);
    }
  }
  return sup;
}

double profile_pair_shape_sup(const Profile& V, const Profile& W, const GridSpec& g,
                              int samples) {
  double supv = 0.0, supw = 0.0;
  auto weighted = [&](const Profile& P, double th) {
    double buf[1];
    double x[1] = {0.31};
    P.values_at(std::span<const double>(x, 1), th, std::span<double>(buf, 1));
    return jb(th) * std::abs(buf[0]);
  };
  for (int i = 0; i < 4 * samples; ++i) {
    double th = -g.Theta + 2.0 * g.Theta * (i + 0.5) / (4 * samples);
    supv = std::max(supv, weighted(V, th));
    supw = std::max(supw, weighted(W, th));
  }
  if (supv == 0.0 || supw == 0.0) return 0.0;
  double sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    double th = -g.Theta + 2.0 * g.Theta * (i + 0.5) / samples;
    for (int j = 0; j < samples; ++j) {
      double om = -g.Theta + 2.0 * g.Theta * (j + 0.5) / samples;
      double integral = 0.0;
      int nq = 96;
      for (int q = 0; q < nq; ++q) {
        double t = (q + 0.5) / nq;
        double s = th + t * (om - th);
        // |V(theta) W(s)| with the weighted sups factored out
        integral += (weighted(V, th) / jb(th)) * (weighted(W, s) / jb(s)) / nq;
      }
      sup = std::max(sup, jb(om - th) * integral / (supv * supw));
    }
  }
  return sup;
}

}  // namespace spcalc
