#include "spcalc/grid.hpp"

#include <cmath>
#include <cstdio>

namespace spcalc {

std::string geometry_name(Geometry g) {
  return g == Geometry::Wavetrain ? "wavetrain" : "pulse";
}

Geometry geometry_from_name(const std::string& name) {
  if (name == "wavetrain") return Geometry::Wavetrain;
  if (name == "pulse") return Geometry::Pulse;
  fail(ErrorCode::Config, "unknown geometry '" + name + "'");
}

static bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

GridSpec GridSpec::wavetrain(int d, double L, int Nx, int Kmax) {
  GridSpec g;
  g.geometry = Geometry::Wavetrain;
  g.d = d;
  g.L = L;
  g.Nx = Nx;
  g.Kmax = Kmax;
  g.validate();
  return g;
}

GridSpec GridSpec::pulse(int d, double L, int Nx, double Theta, int Ntheta) {
  GridSpec g;
  g.geometry = Geometry::Pulse;
  g.d = d;
  g.L = L;
  g.Nx = Nx;
  g.Theta = Theta;
  g.Ntheta = Ntheta;
  g.validate();
  return g;
}

void GridSpec::validate() const {
  require(d >= 1 && d <= 3, ErrorCode::Parameter, "spatial dimension must be in [1,3]");
  require(L > 0.0, ErrorCode::Parameter, "box half-width L must be positive");
  require(is_pow2(Nx), ErrorCode::Parameter, "Nx must be a power of two");
  if (geometry == Geometry::Wavetrain) {
    require(Kmax >= 1, ErrorCode::Parameter, "Kmax must be >= 1");
  } else {
    require(is_pow2(Ntheta), ErrorCode::Parameter, "Ntheta must be a power of two");
    require(Theta > 0.0, ErrorCode::Parameter, "Theta must be positive");
  }
  require(points() > 0, ErrorCode::Parameter, "grid has no degrees of freedom");
}

bool GridSpec::operator==(const GridSpec& o) const {
  if (geometry != o.geometry || d != o.d || L != o.L || Nx != o.Nx) return false;
  if (geometry == Geometry::Wavetrain) return Kmax == o.Kmax;
  return Theta == o.Theta && Ntheta == o.Ntheta;
}

int GridSpec::spatial_points() const {
  int n = 1;
  for (int a = 0; a < d; ++a) n *= Nx;
  return n;
}

int GridSpec::theta_points() const {
  return geometry == Geometry::Wavetrain ? 2 * Kmax + 1 : Ntheta;
}

int GridSpec::theta_modes() const { return theta_points(); }

double GridSpec::dtheta() const {
  return geometry == Geometry::Wavetrain ? 1.0 / theta_points()
                                         : 2.0 * Theta / Ntheta;
}

double GridSpec::dk() const {
  return geometry == Geometry::Wavetrain ? 1.0 : kPi / Theta;
}

double GridSpec::weight_phys() const {
  double w = 1.0;
  for (int a = 0; a < d; ++a) w *= dx();
  return w * dtheta();
}

double GridSpec::weight_spec() const {
  double w = 1.0;
  for (int a = 0; a < d; ++a) w *= dxi() / kTwoPi;
  if (geometry == Geometry::Pulse) w *= dk() / kTwoPi;
  return w;
}

double GridSpec::theta_coord(int j) const {
  return geometry == Geometry::Wavetrain ? j * dtheta() : -Theta + j * dtheta();
}

int GridSpec::mode_signed(int jk) const {
  if (geometry == Geometry::Wavetrain) return jk - Kmax;
  return jk < Ntheta / 2 ? jk : jk - Ntheta;
}

double GridSpec::mode_k_sobolev(int jk) const {
  int k = mode_signed(jk);
  return geometry == Geometry::Wavetrain ? double(k) : k * dk();
}

double GridSpec::mode_k_phase(int jk) const {
  int k = mode_signed(jk);
  return geometry == Geometry::Wavetrain ? kTwoPi * k : k * dk();
}

double GridSpec::max_abs_k_phase() const {
  return geometry == Geometry::Wavetrain ? kTwoPi * Kmax : dk() * (Ntheta / 2);
}

std::array<int, 4> GridSpec::spatial_multi(int m) const {
  std::array<int, 4> idx{0, 0, 0, 0};
  for (int a = d - 1; a >= 0; --a) {
    idx[a] = m % Nx;
    m /= Nx;
  }
  return idx;
}

std::array<double, 4> GridSpec::point_x(int m) const {
  auto idx = spatial_multi(m);
  std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) x[a] = x_coord(idx[a]);
  return x;
}

std::array<double, 4> GridSpec::freq_xi(int n) const {
  auto idx = spatial_multi(n);
  std::array<double, 4> xi{0.0, 0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) xi[a] = xi_of_signed(signed_index(idx[a]));
  return xi;
}

std::string GridSpec::describe() const {
  char buf[160];
  if (geometry == Geometry::Wavetrain) {
    std::snprintf(buf, sizeof(buf), "wavetrain d=%d L=%s Nx=%d Kmax=%d", d,
                  format_double(L).c_str(), Nx, Kmax);
  } else {
    std::snprintf(buf, sizeof(buf), "pulse d=%d L=%s Nx=%d Theta=%s Ntheta=%d", d,
                  format_double(L).c_str(), Nx, format_double(Theta).c_str(), Ntheta);
  }
  return buf;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace spcalc
