#include <cmath>

#include "doctest.h"
#include "spcalc/linalg.hpp"

using namespace spcalc;

namespace {

DenseMatrix random_matrix(int n, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix m(n, n);
  for (auto& z : m.a) z = rng.next_cgauss();
  return m;
}

}  // namespace

TEST_CASE("jacobi recovers known eigenvalues of a hermitian matrix") {
  // H = U D U^H for a hand-built unitary-ish construction
  DenseMatrix a = random_matrix(12, 3);
  DenseMatrix h(12, 12);
  // h = a^H a is Hermitian positive semidefinite
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < 12; ++k) s += std::conj(a.at(k, i)) * a.at(k, j);
      h.at(i, j) = s;
    }
  auto ev = jacobi_hermitian_eigenvalues(h);
  REQUIRE(ev.size() == 12);
  for (double l : ev) CHECK(l > -1e-10);
  // trace check
  double tr = 0.0;
  for (int i = 0; i < 12; ++i) tr += h.at(i, i).real();
  double sum = 0.0;
  for (double l : ev) sum += l;
  CHECK(sum == doctest::Approx(tr).epsilon(1e-10));

  // eigenvalues of a diagonal matrix are its entries
  DenseMatrix d(5, 5);
  for (int i = 0; i < 5; ++i) d.at(i, i) = 3.0 - i;
  auto evd = jacobi_hermitian_eigenvalues(d);
  CHECK(evd.front() == doctest::Approx(-1.0));
  CHECK(evd.back() == doctest::Approx(3.0));
}

TEST_CASE("power iteration matches dense SVD on a generic matrix") {
  DenseMatrix m = random_matrix(24, 17);
  double svd = dense_svd_max(m);
  PowerOptions opt;
  opt.max_iter = 2000;
  opt.tol = 1e-12;
  auto res = power_singular_value([&](const CVec& x) { return m.matvec(x); },
                                  [&](const CVec& x) { return m.matvec_adjoint(x); },
                                  24, opt);
  CHECK(res.value == doctest::Approx(svd).epsilon(1e-6));
}

TEST_CASE("identity and diagonal norms") {
  DenseMatrix d(6, 6);
  for (int i = 0; i < 6; ++i) d.at(i, i) = cplx(0.0, i - 2.5);
  auto res = power_singular_value([&](const CVec& x) { return d.matvec(x); },
                                  [&](const CVec& x) { return d.matvec_adjoint(x); }, 6);
  CHECK(res.value == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(dense_svd_max(d) == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("hermitian extremes via shifted power iteration") {
  DenseMatrix h(8, 8);
  Rng rng(5);
  for (int i = 0; i < 8; ++i) {
    h.at(i, i) = 0.3 * i - 1.0;
    for (int j = i + 1; j < 8; ++j) {
      cplx z = 0.05 * rng.next_cgauss();
      h.at(i, j) = z;
      h.at(j, i) = std::conj(z);
    }
  }
  auto ev = jacobi_hermitian_eigenvalues(h);
  PowerOptions opt;
  opt.max_iter = 3000;
  opt.tol = 1e-12;
  auto ex = hermitian_extremes([&](const CVec& x) { return h.matvec(x); }, 8, opt);
  CHECK(ex.lambda_min == doctest::Approx(ev.front()).epsilon(1e-6));
  CHECK(ex.lambda_max == doctest::Approx(ev.back()).epsilon(1e-6));
}

TEST_CASE("adjoint matvec is the conjugate-transpose matvec") {
  DenseMatrix m = random_matrix(10, 23);
  Rng rng(29);
  CVec x(10), y(10);
  for (auto& z : x) z = rng.next_cgauss();
  for (auto& z : y) z = rng.next_cgauss();
  // <y, Mx> == <M^H y, x>
  cplx lhs = vec_dot(y, m.matvec(x));
  cplx rhs = vec_dot(m.matvec_adjoint(y), x);
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("CMat spectral norm") {
  CMat m(2);
  m.at(0, 0) = 3.0;
  m.at(1, 1) = -1.0;
  CHECK(m.norm2() == doctest::Approx(3.0).epsilon(1e-6));
  CMat r(2);  // rotation: norm 1
  r.at(0, 0) = std::cos(0.7);
  r.at(0, 1) = -std::sin(0.7);
  r.at(1, 0) = std::sin(0.7);
  r.at(1, 1) = std::cos(0.7);
  CHECK(r.norm2() == doctest::Approx(1.0).epsilon(1e-6));
}
