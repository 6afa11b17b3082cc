#pragma once

#include <array>
#include <string>

#include "spcalc/common.hpp"

namespace spcalc {

enum class Geometry { Wavetrain, Pulse };

std::string geometry_name(Geometry g);
Geometry geometry_from_name(const std::string& name);

// Discretization of R^d x T (wavetrain) or R^{d+1} (pulse).
//
// Spatial axes: periodized box [-L, L)^d with Nx points per axis and the
// frequency lattice xi in (pi/L) * {-Nx/2, ..., Nx/2 - 1}.
//
// Fast axis:
//   wavetrain  theta in [0,1), 2*Kmax+1 samples, integer modes k in [-Kmax, Kmax],
//              phase e^{2 i pi k theta};
//   pulse      theta in [-Theta, Theta), Ntheta samples, frequency lattice
//              k in (pi/Theta) * {-Ntheta/2, ..., Ntheta/2 - 1}, phase e^{i k theta}.
struct GridSpec {
  Geometry geometry = Geometry::Wavetrain;
  int d = 1;
  double L = kPi;
  int Nx = 32;
  int Kmax = 8;       // wavetrain only
  double Theta = 8.0; // pulse only
  int Ntheta = 32;    // pulse only

  static GridSpec wavetrain(int d, double L, int Nx, int Kmax);
  static GridSpec pulse(int d, double L, int Nx, double Theta, int Ntheta);

  void validate() const;

  bool operator==(const GridSpec& o) const;
  bool operator!=(const GridSpec& o) const { return !(*this == o); }

  // counts
  int spatial_points() const;           // Nx^d
  int theta_points() const;             // 2K+1 or Ntheta
  int theta_modes() const;              // 2K+1 or Ntheta
  int points() const { return spatial_points() * theta_points(); }
  int modes() const { return spatial_points() * theta_modes(); }

  // spacings and quadrature weights
  double dx() const { return 2.0 * L / Nx; }
  double dxi() const { return kPi / L; }
  double dtheta() const;                // pulse: 2*Theta/Ntheta; wavetrain: 1/(2K+1)
  double dk() const;                    // pulse: pi/Theta; wavetrain: 1 (mode step)
  double weight_phys() const;           // cell weight of the physical quadrature
  double weight_spec() const;           // cell weight of the spectral quadrature

  // coordinates
  double x_coord(int axis_index) const { return -L + axis_index * dx(); }
  double theta_coord(int j) const;
  // signed spatial frequency index for storage slot a (0..Nx-1): n in [-Nx/2, Nx/2)
  int signed_index(int a) const { return a < Nx / 2 ? a : a - Nx; }
  int storage_index(int n) const { return n >= 0 ? n : n + Nx; }
  double xi_of_signed(int n) const { return n * dxi(); }

  // theta-mode attributes for mode slot jk (0..theta_modes()-1)
  // k_sobolev: the "k" entering the standard Sobolev weight (integer k for
  //            wavetrains, the continuous frequency for pulses)
  // k_phase:   kappa with phase e^{i kappa theta} (2 pi k resp. k); the
  //            singular frequency shift is xi + kappa * beta / eps.
  double mode_k_sobolev(int jk) const;
  double mode_k_phase(int jk) const;
  int mode_signed(int jk) const;        // signed mode index

  // multi-index helpers (lexicographic over d axes)
  std::array<int, 4> spatial_multi(int m) const;
  std::array<double, 4> point_x(int m) const;
  std::array<double, 4> freq_xi(int n) const;  // signed lattice frequencies

  // flattening: point p = spatial * theta_points + j; mode f = spatial * theta_modes + jk
  int point_index(int m_spatial, int j) const { return m_spatial * theta_points() + j; }
  int mode_index(int n_spatial, int jk) const { return n_spatial * theta_modes() + jk; }

  double max_abs_xi() const { return dxi() * (Nx / 2); }
  double max_abs_k_phase() const;

  std::string describe() const;
};

}  // namespace spcalc
