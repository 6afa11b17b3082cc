#include "spcalc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace spcalc {

CVec DenseMatrix::matvec(const CVec& x) const {
  require(int(x.size()) == cols, ErrorCode::Shape, "matvec dimension mismatch");
  CVec y(rows, cplx(0.0));
  for (int i = 0; i < rows; ++i) {
    cplx s = 0.0;
    const cplx* row = &a[std::size_t(i) * cols];
    for (int j = 0; j < cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

CVec DenseMatrix::matvec_adjoint(const CVec& x) const {
  require(int(x.size()) == rows, ErrorCode::Shape, "matvec dimension mismatch");
  CVec y(cols, cplx(0.0));
  for (int i = 0; i < rows; ++i) {
    const cplx* row = &a[std::size_t(i) * cols];
    cplx xi = std::conj(x[i]);
    for (int j = 0; j < cols; ++j) y[j] += std::conj(row[j] * xi);
  }
  return y;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix m(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(j, i) = std::conj(at(i, j));
  return m;
}

DenseMatrix DenseMatrix::mul(const DenseMatrix& o) const {
  require(cols == o.rows, ErrorCode::Shape, "matmul dimension mismatch");
  DenseMatrix m(rows, o.cols);
  for (int i = 0; i < rows; ++i) {
    const cplx* row = &a[std::size_t(i) * cols];
    cplx* out = &m.a[std::size_t(i) * o.cols];
    for (int k = 0; k < cols; ++k) {
      cplx aik = row[k];
      if (aik == cplx(0.0)) continue;
      const cplx* orow = &o.a[std::size_t(k) * o.cols];
      for (int j = 0; j < o.cols; ++j) out[j] += aik * orow[j];
    }
  }
  return m;
}

DenseMatrix DenseMatrix::hermitian_part() const {
  require(rows == cols, ErrorCode::Shape, "hermitian part needs a square matrix");
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m.at(i, j) = 0.5 * (at(i, j) + std::conj(at(j, i)));
  return m;
}

double vec_norm(const CVec& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx vec_dot(const CVec& a, const CVec& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

PowerResult power_singular_value(const ApplyFn& apply, const ApplyFn& apply_adjoint,
                                 int dim_in, const PowerOptions& opt) {
  Rng rng(opt.seed);
  CVec v(dim_in);
  for (cplx& z : v) z = rng.next_cgauss();
  double nv = vec_norm(v);
  if (nv == 0.0) return {0.0, 0, true, 0.0};
  for (cplx& z : v) z /= nv;

  PowerResult res;
  double prev = -1.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    CVec w = apply(v);
    double sigma = vec_norm(w);
    res.iterations = it;
    if (sigma == 0.0) {
      res.value = 0.0;
      res.converged = true;
      return res;
    }
    CVec z = apply_adjoint(w);
    double nz = vec_norm(z);
    res.value = sigma;
    res.last_delta = prev < 0.0 ? 1.0 : std::abs(sigma - prev) / std::max(sigma, 1e-300);
    if (prev >= 0.0 && res.last_delta <= opt.tol) {
      res.converged = true;
      return res;
    }
    prev = sigma;
    if (nz == 0.0) {
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = z[i] / nz;
  }
  res.converged = res.last_delta <= 100.0 * opt.tol;
  if (!res.converged && opt.throw_on_divergence)
    fail(ErrorCode::Convergence,
         "power iteration did not converge: last relative delta " +
             format_double(res.last_delta) + " after " +
             std::to_string(res.iterations) + " iterations");
  return res;
}

namespace {

double rayleigh_extreme(const ApplyFn& apply, int dim, double shift, int max_iter,
                        double tol, std::uint64_t seed, bool& converged) {
  // power iteration on (apply - shift I); returns the Rayleigh quotient of the
  // dominant eigenvector plus shift
  Rng rng(seed);
  CVec v(dim);
  for (cplx& z : v) z = rng.next_cgauss();
  double nv = vec_norm(v);
  for (cplx& z : v) z /= nv;
  double prev = 0.0;
  converged = false;
  double lam = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    CVec w = apply(v);
    for (int i = 0; i < dim; ++i) w[i] -= shift * v[i];
    double nw = vec_norm(w);
    if (nw == 0.0) {
      converged = true;
      return shift;
    }
    lam = vec_dot(v, w).real() + shift;
    if (it > 0 && std::abs(lam - prev) <= tol * (1.0 + std::abs(lam))) {
      converged = true;
      return lam;
    }
    prev = lam;
    for (int i = 0; i < dim; ++i) v[i] = w[i] / nw;
  }
  return lam;
}

}  // namespace

HermitianExtremes hermitian_extremes(const ApplyFn& apply_hermitian, int dim,
                                     const PowerOptions& opt) {
  HermitianExtremes out;
  // bound on the spectral radius
  bool c0 = false;
  double rho = std::abs(rayleigh_extreme(apply_hermitian, dim, 0.0, opt.max_iter,
                                         opt.tol, opt.seed, c0));
  rho = std::max(rho, 1e-30);
  bool c1 = false, c2 = false;
  // extreme above: shift by -2 rho so the largest eigenvalue dominates
  out.lambda_max = rayleigh_extreme(apply_hermitian, dim, -2.0 * rho, opt.max_iter,
                                    opt.tol, opt.seed + 1, c1);
  out.lambda_min = rayleigh_extreme(apply_hermitian, dim, 2.0 * rho, opt.max_iter,
                                    opt.tol, opt.seed + 2, c2);
  out.converged = c1 && c2;
  return out;
}

std::vector<double> jacobi_hermitian_eigenvalues(DenseMatrix h, int max_sweeps) {
  int n = h.rows;
  require(n == h.cols, ErrorCode::Shape, "jacobi needs a square matrix");
  double scale = 0.0;
  for (const cplx& z : h.a) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return std::vector<double>(n, 0.0);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(h.at(i, j)));
    if (off < 1e-14 * scale) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cplx hpq = h.at(p, q);
        double b = std::abs(hpq);
        if (b < 1e-300) continue;
        double app = h.at(p, p).real();
        double aqq = h.at(q, q).real();
        // H' = U^H H U with U the phase-times-rotation in the (p,q) plane:
        //   U_pp = c, U_pq = s, U_qp = -conj(phi) s, U_qq = conj(phi) c,
        // phi = h_pq / |h_pq|; the real rotation zeroes the |h_pq| entry.
        cplx phi = hpq / b;
        double tau = (aqq - app) / (2.0 * b);
        double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        cplx phic = std::conj(phi);
        for (int k = 0; k < n; ++k) {  // columns: H <- H U
          cplx hkp = h.at(k, p);
          cplx hkq = h.at(k, q);
          h.at(k, p) = c * hkp - phic * s * hkq;
          h.at(k, q) = s * hkp + phic * c * hkq;
        }
        for (int k = 0; k < n; ++k) {  // rows: H <- U^H H
          cplx hpk = h.at(p, k);
          cplx hqk = h.at(q, k);
          h.at(p, k) = c * hpk - phi * s * hqk;
          h.at(q, k) = s * hpk + phi * c * hqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = h.at(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

double dense_svd_max(const DenseMatrix& m) {
  // Jacobi on the Gram matrix; singular values are sqrt of its eigenvalues.
  DenseMatrix g(m.cols, m.cols);
  for (int i = 0; i < m.cols; ++i)
    for (int j = 0; j < m.cols; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < m.rows; ++k) s += std::conj(m.at(k, i)) * m.at(k, j);
      g.at(i, j) = s;
    }
  auto ev = jacobi_hermitian_eigenvalues(std::move(g));
  double top = ev.empty() ? 0.0 : ev.back();
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

}  // namespace spcalc
