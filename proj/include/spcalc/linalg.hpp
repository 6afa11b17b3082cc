#pragma once

#include <functional>

#include "spcalc/common.hpp"

namespace spcalc {

// Row-major dense complex matrix, only used at oracle scale.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  CVec a;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, cplx(0.0)) {}
  cplx& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
  cplx at(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  CVec matvec(const CVec& x) const;
  CVec matvec_adjoint(const CVec& x) const;
  DenseMatrix adjoint() const;
  DenseMatrix mul(const DenseMatrix& o) const;
  DenseMatrix hermitian_part() const;  // (A + A^H)/2, square only
};

using ApplyFn = std::function<CVec(const CVec&)>;

struct PowerResult {
  double value = 0.0;  // largest singular value (or eigenvalue magnitude)
  int iterations = 0;
  bool converged = false;
  double last_delta = 0.0;
};

struct PowerOptions {
  int max_iter = 200;
  double tol = 1e-8;
  std::uint64_t seed = 7;
  bool throw_on_divergence = false;
};

// Largest singular value of A via power iteration on A^H A.
PowerResult power_singular_value(const ApplyFn& apply, const ApplyFn& apply_adjoint,
                                 int dim_in, const PowerOptions& opt = {});

// Extreme eigenvalues of a Hermitian operator (largest and smallest on the
// real line), via power iteration on shifted operators.
struct HermitianExtremes {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  bool converged = false;
};
HermitianExtremes hermitian_extremes(const ApplyFn& apply_hermitian, int dim,
                                     const PowerOptions& opt = {});

// All eigenvalues of a Hermitian matrix by cyclic complex Jacobi (ascending).
std::vector<double> jacobi_hermitian_eigenvalues(DenseMatrix h, int max_sweeps = 60);

// Largest singular value via Jacobi on A^H A (the DenseSVD route).
double dense_svd_max(const DenseMatrix& m);

double vec_norm(const CVec& v);
cplx vec_dot(const CVec& a, const CVec& b);  // conjugate-linear in a

}  // namespace spcalc
