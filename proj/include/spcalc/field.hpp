#pragma once

#include <iosfwd>

#include "spcalc/grid.hpp"

namespace spcalc {

// Complex vector-valued samples on the grid. Layout: data[p * ncomp + c].
struct Field {
  GridSpec grid;
  int ncomp = 1;
  CVec data;

  Field() = default;
  Field(const GridSpec& g, int n);
  Field(const GridSpec& g, int n, CVec values);

  cplx& at(int p, int c = 0) { return data[p * ncomp + c]; }
  cplx at(int p, int c = 0) const { return data[p * ncomp + c]; }

  void check_finite() const;
  double l2_norm() const;  // ||u||_0 with the grid quadrature weight

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx z);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx z, Field a);

// Mixed Fourier coefficients hat{c_k(u)}(xi) on the frequency lattice.
// Layout: data[f * ncomp + c], f = spatial_freq * theta_modes + mode.
struct SpectralField {
  GridSpec grid;
  int ncomp = 1;
  CVec data;

  SpectralField() = default;
  SpectralField(const GridSpec& g, int n);

  cplx& at(int f, int c = 0) { return data[f * ncomp + c]; }
  cplx at(int f, int c = 0) const { return data[f * ncomp + c]; }

  double l2_norm() const;  // spectral-side L2 norm (Parseval twin)

  SpectralField& operator-=(const SpectralField& o);
};

SpectralField forward_transform(const Field& u);
Field inverse_transform(const SpectralField& U);

// | ||u||_0^2 - spectral mass | / ||u||_0^2  (0 for the zero field)
double parseval_defect(const Field& u);

// Seeded random field: complex Gaussian spectral coefficients under a smooth
// envelope, normalized to ||u||_0 = 1.
Field random_field(const GridSpec& g, int ncomp, std::uint64_t seed);

// Plain-text serialization (format documented in the README).
void save_field(const Field& u, std::ostream& os);
Field load_field(std::istream& is);
void save_field_file(const Field& u, const std::string& path);
Field load_field_file(const std::string& path);

}  // namespace spcalc
