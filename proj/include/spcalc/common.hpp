#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spcalc {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorCode {
  Shape = 1,
  Parameter,
  Geometry,
  Domain,
  Smoothness,
  Size,
  Convergence,
  Lookup,
  Config,
  Io,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

// Small dense complex matrix used for symbol values (N <= 4 in practice).
struct CMat {
  int n = 1;
  cplx v[4] = {cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0)};

  CMat() = default;
  explicit CMat(int dim) : n(dim) {}
  static CMat scalar(cplx z) {
    CMat m(1);
    m.v[0] = z;
    return m;
  }
  static CMat identity(int dim) {
    CMat m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }
  cplx& at(int i, int j) { return v[i * n + j]; }
  cplx at(int i, int j) const { return v[i * n + j]; }

  CMat adjoint() const {
    CMat m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = std::conj(at(j, i));
    return m;
  }
  CMat operator*(const CMat& o) const {
    CMat m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx s = 0.0;
        for (int k = 0; k < n; ++k) s += at(i, k) * o.at(k, j);
        m.at(i, j) = s;
      }
    return m;
  }
  CMat operator+(const CMat& o) const {
    CMat m(n);
    for (int i = 0; i < n * n; ++i) m.v[i] = v[i] + o.v[i];
    return m;
  }
  CMat operator-(const CMat& o) const {
    CMat m(n);
    for (int i = 0; i < n * n; ++i) m.v[i] = v[i] - o.v[i];
    return m;
  }
  CMat operator*(cplx z) const {
    CMat m(n);
    for (int i = 0; i < n * n; ++i) m.v[i] = v[i] * z;
    return m;
  }
  // Spectral (operator 2-) norm of the small matrix.
  double norm2() const {
    if (n == 1) return std::abs(v[0]);
    // power iteration on the 2x2 (or small) normal matrix; exact enough here
    double a = 0.0;
    for (int i = 0; i < n * n; ++i) a = std::max(a, std::abs(v[i]));
    if (a == 0.0) return 0.0;
    cplx x[4] = {cplx(1.0, 0.3), cplx(0.7, -0.2), cplx(0.1, 0.9), cplx(-0.4, 0.5)};
    double s = 0.0;
    for (int it = 0; it < 60; ++it) {
      cplx y[4] = {};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y[i] += at(i, j) * x[j];
      cplx z[4] = {};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z[j] += std::conj(at(i, j)) * y[i];
      double nz = 0.0, nx = 0.0;
      for (int j = 0; j < n; ++j) {
        nz += std::norm(z[j]);
        nx += std::norm(x[j]);
      }
      if (nx == 0.0) return 0.0;
      s = std::sqrt(std::sqrt(nz / nx));
      double inv = 1.0 / std::sqrt(nz);
      for (int j = 0; j < n; ++j) x[j] = z[j] * inv;
    }
    return s;
  }
};

inline CMat operator*(cplx z, const CMat& m) { return m * z; }

// Deterministic splitmix64-based generator; identical streams on every
// platform, which the CSV byte-reproducibility contract relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0,1)
  double next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }
  // standard normal via Box-Muller (explicit formulas keep streams portable)
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }
  cplx next_cgauss() {
    double re = next_normal();
    double im = next_normal();
    return cplx(re, im);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::string format_double(double x);  // fixed %.17g formatting for CSV output

}  // namespace spcalc
