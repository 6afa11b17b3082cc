#include "spcalc/field.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fft.hpp"

namespace spcalc {

Field::Field(const GridSpec& g, int n) : grid(g), ncomp(n) {
  require(n >= 1 && n <= 2, ErrorCode::Shape, "component dimension must be 1 or 2");
  data.assign(std::size_t(g.points()) * n, cplx(0.0));
}

Field::Field(const GridSpec& g, int n, CVec values) : grid(g), ncomp(n), data(std::move(values)) {
  require(n >= 1 && n <= 2, ErrorCode::Shape, "component dimension must be 1 or 2");
  require(data.size() == std::size_t(g.points()) * n, ErrorCode::Shape,
          "value array shape does not match grid degrees of freedom");
  check_finite();
}

void Field::check_finite() const {
  for (const cplx& z : data)
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::Shape,
            "field contains non-finite entries");
}

double Field::l2_norm() const {
  double s = 0.0;
  for (const cplx& z : data) s += std::norm(z);
  return std::sqrt(s * grid.weight_phys());
}

Field& Field::operator+=(const Field& o) {
  require(grid == o.grid && ncomp == o.ncomp, ErrorCode::Shape, "field shape mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require(grid == o.grid && ncomp == o.ncomp, ErrorCode::Shape, "field shape mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

Field& Field::operator*=(cplx z) {
  for (cplx& v : data) v *= z;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx z, Field a) { return a *= z; }

SpectralField::SpectralField(const GridSpec& g, int n) : grid(g), ncomp(n) {
  data.assign(std::size_t(g.modes()) * n, cplx(0.0));
}

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (const cplx& z : data) s += std::norm(z);
  return std::sqrt(s * grid.weight_spec());
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require(grid == o.grid && ncomp == o.ncomp, ErrorCode::Shape, "spectral shape mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

namespace {

// Applies fn to every 1-d line of length n with element stride `stride`
// (strides measured in cplx slots of the flat array).
template <typename Fn>
void for_each_line(CVec& a, int total_slots, int n, int stride, Fn&& fn) {
  int block = n * stride;
  CVec line(n);
  for (int base = 0; base < total_slots; base += block) {
    for (int off = 0; off < stride; ++off) {
      for (int t = 0; t < n; ++t) line[t] = a[base + off + t * stride];
      fn(line);
      for (int t = 0; t < n; ++t) a[base + off + t * stride] = line[t];
    }
  }
}

// forward on one power-of-two spatial axis: F(n) = dx * (-1)^slot * DFT_slot
void axis_forward_pow2(CVec& line, double scale) {
  int n = int(line.size());
  fft_pow2(line.data(), n, -1);
  for (int s = 0; s < n; ++s) line[s] *= (s & 1) ? -scale : scale;
}

// inverse: f_m = (dxi/2pi) * sum_n (-1)^slot F(slot) e^{2 pi i m slot / n}
void axis_inverse_pow2(CVec& line, double scale) {
  int n = int(line.size());
  for (int s = 0; s < n; ++s)
    if (s & 1) line[s] = -line[s];
  fft_pow2(line.data(), n, +1);
  for (cplx& z : line) z *= scale;
}

}  // namespace

SpectralField forward_transform(const Field& u) {
  u.grid.validate();
  require(u.data.size() == std::size_t(u.grid.points()) * u.ncomp, ErrorCode::Shape,
          "declared grid does not match actual array shape");
  const GridSpec& g = u.grid;
  CVec work = u.data;
  int T = g.theta_points();
  int total = int(work.size());

  // theta axis (stride = ncomp)
  if (g.geometry == Geometry::Wavetrain) {
    CVec dft(T);
    for_each_line(work, total, T, u.ncomp, [&](CVec& line) {
      dft_direct(line.data(), dft.data(), T, -1);
      // slot jk holds k = jk - Kmax; DFT bin for k is k mod T
      for (int jk = 0; jk < T; ++jk) {
        int k = jk - g.Kmax;
        int kk = k >= 0 ? k : k + T;
        line[jk] = dft[kk] / double(T);
      }
    });
  } else {
    double scale = g.dtheta();
    for_each_line(work, total, T, u.ncomp, [&](CVec& line) { axis_forward_pow2(line, scale); });
  }

  // spatial axes
  for (int a = g.d - 1; a >= 0; --a) {
    int stride = u.ncomp * T;
    for (int b = g.d - 1; b > a; --b) stride *= g.Nx;
    for_each_line(work, total, g.Nx, stride,
                  [&](CVec& line) { axis_forward_pow2(line, g.dx()); });
  }

  SpectralField out(g, u.ncomp);
  out.data = std::move(work);
  return out;
}

Field inverse_transform(const SpectralField& U) {
  U.grid.validate();
  require(U.data.size() == std::size_t(U.grid.modes()) * U.ncomp, ErrorCode::Shape,
          "declared grid does not match actual array shape");
  const GridSpec& g = U.grid;
  CVec work = U.data;
  int T = g.theta_modes();
  int total = int(work.size());

  for (int a = g.d - 1; a >= 0; --a) {
    int stride = U.ncomp * T;
    for (int b = g.d - 1; b > a; --b) stride *= g.Nx;
    double scale = g.dxi() / kTwoPi;
    for_each_line(work, total, g.Nx, stride,
                  [&](CVec& line) { axis_inverse_pow2(line, scale); });
  }

  if (g.geometry == Geometry::Wavetrain) {
    CVec tmp(T), dft(T);
    for_each_line(work, total, T, U.ncomp, [&](CVec& line) {
      // reorder to DFT bin order, then plain inverse DFT (no scaling)
      for (int jk = 0; jk < T; ++jk) {
        int k = jk - g.Kmax;
        int kk = k >= 0 ? k : k + T;
        tmp[kk] = line[jk];
      }
      dft_direct(tmp.data(), dft.data(), T, +1);
      for (int j = 0; j < T; ++j) line[j] = dft[j];
    });
  } else {
    double scale = g.dk() / kTwoPi;
    for_each_line(work, total, T, U.ncomp, [&](CVec& line) { axis_inverse_pow2(line, scale); });
  }

  Field out(g, U.ncomp);
  out.data = std::move(work);
  return out;
}

double parseval_defect(const Field& u) {
  double phys = u.l2_norm();
  if (phys == 0.0) return 0.0;
  double spec = forward_transform(u).l2_norm();
  return std::abs(phys * phys - spec * spec) / (phys * phys);
}

Field random_field(const GridSpec& g, int ncomp, std::uint64_t seed) {
  Rng rng(seed ^ 0x5bc1e995u);
  SpectralField U(g, ncomp);
  for (int n = 0; n < g.spatial_points(); ++n) {
    auto multi = g.spatial_multi(n);
    double decay = 0.0;
    for (int a = 0; a < g.d; ++a) {
      double t = double(g.signed_index(multi[a])) / (g.Nx / 2);
      decay += 6.0 * t * t;
    }
    for (int jk = 0; jk < g.theta_modes(); ++jk) {
      double tk = double(g.mode_signed(jk)) / std::max(1, g.theta_modes() / 2);
      double env = std::exp(-decay - 6.0 * tk * tk);
      for (int c = 0; c < ncomp; ++c)
        U.at(g.mode_index(n, jk), c) = env * rng.next_cgauss();
    }
  }
  Field u = inverse_transform(U);
  double nrm = u.l2_norm();
  if (nrm > 0.0) u *= cplx(1.0 / nrm);
  return u;
}

void save_field(const Field& u, std::ostream& os) {
  const GridSpec& g = u.grid;
  os << "spcalc-field 1\n";
  os << "geometry " << geometry_name(g.geometry) << "\n";
  os << "d " << g.d << "\n";
  os << "L " << format_double(g.L) << "\n";
  os << "Nx " << g.Nx << "\n";
  if (g.geometry == Geometry::Wavetrain) {
    os << "Kmax " << g.Kmax << "\n";
  } else {
    os << "Theta " << format_double(g.Theta) << "\n";
    os << "Ntheta " << g.Ntheta << "\n";
  }
  os << "ncomp " << u.ncomp << "\n";
  os << "points " << g.points() << "\n";
  for (int p = 0; p < g.points(); ++p) {
    for (int c = 0; c < u.ncomp; ++c) {
      if (c) os << ',';
      os << format_double(u.at(p, c).real()) << ',' << format_double(u.at(p, c).imag());
    }
    os << "\n";
  }
}

Field load_field(std::istream& is) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  require(bool(is) && magic == "spcalc-field" && version == 1, ErrorCode::Io,
          "not a spcalc field file");
  GridSpec g;
  int ncomp = 1, points = 0;
  std::string key;
  while (is >> key) {
    if (key == "geometry") {
      std::string name;
      is >> name;
      g.geometry = geometry_from_name(name);
    } else if (key == "d")
      is >> g.d;
    else if (key == "L")
      is >> g.L;
    else if (key == "Nx")
      is >> g.Nx;
    else if (key == "Kmax")
      is >> g.Kmax;
    else if (key == "Theta")
      is >> g.Theta;
    else if (key == "Ntheta")
      is >> g.Ntheta;
    else if (key == "ncomp")
      is >> ncomp;
    else if (key == "points") {
      is >> points;
      break;
    } else
      fail(ErrorCode::Io, "unknown field-file key '" + key + "'");
  }
  require(bool(is), ErrorCode::Io, "truncated field header");
  g.validate();
  require(points == g.points(), ErrorCode::Io, "field-file point count mismatch");
  Field u(g, ncomp);
  std::string line;
  std::getline(is, line);  // rest of header line
  for (int p = 0; p < points; ++p) {
    require(bool(std::getline(is, line)), ErrorCode::Io, "truncated field data");
    std::istringstream ss(line);
    for (int c = 0; c < ncomp; ++c) {
      double re = 0.0, im = 0.0;
      char comma = 0;
      ss >> re >> comma >> im;
      require(bool(ss), ErrorCode::Io, "malformed field data line");
      if (c + 1 < ncomp) ss >> comma;
      u.at(p, c) = cplx(re, im);
    }
  }
  u.check_finite();
  return u;
}

void save_field_file(const Field& u, const std::string& path) {
  std::ofstream os(path);
  require(bool(os), ErrorCode::Io, "cannot open '" + path + "' for writing");
  save_field(u, os);
}

Field load_field_file(const std::string& path) {
  std::ifstream is(path);
  require(bool(is), ErrorCode::Io, "cannot open '" + path + "'");
  return load_field(is);
}

}  // namespace spcalc
