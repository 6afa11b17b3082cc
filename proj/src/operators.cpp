#include "spcalc/operators.hpp"

#include <cmath>

namespace spcalc {

std::size_t SampledSymbol::sample_cap = 8'000'000;

namespace {

// Precomputed quantization phases e^{i x xi} e^{i kappa theta} as per-axis
// tables; phase(p, f) is a product of d+1 table entries.
struct PhaseTable {
  GridSpec g;
  CVec spatial;  // Nx*Nx, index m*Nx + n_storage
  CVec theta;    // theta_points * theta_modes

  explicit PhaseTable(const GridSpec& grid) : g(grid) {
    spatial.resize(std::size_t(g.Nx) * g.Nx);
    for (int m = 0; m < g.Nx; ++m) {
      double x = g.x_coord(m);
      for (int n = 0; n < g.Nx; ++n) {
        double xi = g.xi_of_signed(g.signed_index(n));
        spatial[std::size_t(m) * g.Nx + n] = std::polar(1.0, x * xi);
      }
    }
    int tp = g.theta_points(), tm = g.theta_modes();
    theta.resize(std::size_t(tp) * tm);
    for (int j = 0; j < tp; ++j) {
      double th = g.theta_coord(j);
      for (int jk = 0; jk < tm; ++jk)
        theta[std::size_t(j) * tm + jk] = std::polar(1.0, g.mode_k_phase(jk) * th);
    }
  }

  cplx phase(int p, int f) const {
    int tp = g.theta_points(), tm = g.theta_modes();
    int j = p % tp, m = p / tp;
    int jk = f % tm, n = f / tm;
    cplx ph = theta[std::size_t(j) * tm + jk];
    if (g.d == 1) return ph * spatial[std::size_t(m) * g.Nx + n];
    for (int a = g.d - 1; a >= 0; --a) {
      int ma = m % g.Nx, na = n % g.Nx;
      m /= g.Nx;
      n /= g.Nx;
      ph *= spatial[std::size_t(ma) * g.Nx + na];
    }
    return ph;
  }
};

const PhaseTable& phase_table(const GridSpec& g) {
  thread_local std::unique_ptr<PhaseTable> cached;
  if (!cached || !(cached->g == g)) cached = std::make_unique<PhaseTable>(g);
  return *cached;
}

class MultiplierOp final : public LinOp {
 public:
  MultiplierOp(const GridSpec& g, int nc, CVec blocks, std::string desc)
      : LinOp(g, nc, std::move(desc)), blocks_(std::move(blocks)) {}

  Field apply(const Field& u) const override { return run(u, false); }
  Field apply_adjoint(const Field& u) const override { return run(u, true); }

  const CVec& blocks() const { return blocks_; }

 private:
  Field run(const Field& u, bool adj) const {
    check_input(u);
    SpectralField U = forward_transform(u);
    int nc = ncomp_;
    SpectralField V(grid_, nc);
    for (int f = 0; f < grid_.modes(); ++f) {
      const cplx* b = &blocks_[std::size_t(f) * nc * nc];
      for (int i = 0; i < nc; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < nc; ++j)
          s += (adj ? std::conj(b[j * nc + i]) : b[i * nc + j]) * U.at(f, j);
        V.at(f, i) = s;
      }
    }
    return inverse_transform(V);
  }
  CVec blocks_;
};

class MultiplicationOp final : public LinOp {
 public:
  MultiplicationOp(const GridSpec& g, int nc, CVec blocks, std::string desc)
      : LinOp(g, nc, std::move(desc)), blocks_(std::move(blocks)) {}

  Field apply(const Field& u) const override { return run(u, false); }
  Field apply_adjoint(const Field& u) const override { return run(u, true); }

 private:
  Field run(const Field& u, bool adj) const {
    check_input(u);
    int nc = ncomp_;
    Field v(grid_, nc);
    for (int p = 0; p < grid_.points(); ++p) {
      const cplx* b = &blocks_[std::size_t(p) * nc * nc];
      for (int i = 0; i < nc; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < nc; ++j)
          s += (adj ? std::conj(b[j * nc + i]) : b[i * nc + j]) * u.at(p, j);
        v.at(p, i) = s;
      }
    }
    return v;
  }
  CVec blocks_;
};

class SampledSymbolOp final : public LinOp {
 public:
  SampledSymbolOp(SampledSymbol s, std::string desc)
      : LinOp(s.grid, s.ncomp, std::move(desc)), sym_(std::move(s)) {}

  Field apply(const Field& u) const override {
    check_input(u);
    const GridSpec& g = grid_;
    const PhaseTable& pt = phase_table(g);
    SpectralField U = forward_transform(u);
    int nc = ncomp_, nc2 = nc * nc;
    double ws = g.weight_spec();
    Field out(g, nc);
    for (int p = 0; p < g.points(); ++p) {
      cplx acc[2] = {cplx(0.0), cplx(0.0)};
      const cplx* row = &sym_.values[std::size_t(p) * g.modes() * nc2];
      for (int f = 0; f < g.modes(); ++f) {
        cplx ph = pt.phase(p, f);
        const cplx* b = row + std::size_t(f) * nc2;
        for (int i = 0; i < nc; ++i) {
          cplx s = 0.0;
          for (int j = 0; j < nc; ++j) s += b[i * nc + j] * U.at(f, j);
          acc[i] += ph * s;
        }
      }
      for (int i = 0; i < nc; ++i) out.at(p, i) = ws * acc[i];
    }
    return out;
  }

  Field apply_adjoint(const Field& v) const override {
    check_input(v);
    const GridSpec& g = grid_;
    const PhaseTable& pt = phase_table(g);
    int nc = ncomp_, nc2 = nc * nc;
    double ws = g.weight_spec(), wp = g.weight_phys();
    CVec t(std::size_t(g.modes()) * nc, cplx(0.0));
    for (int p = 0; p < g.points(); ++p) {
      const cplx* row = &sym_.values[std::size_t(p) * g.modes() * nc2];
      for (int f = 0; f < g.modes(); ++f) {
        cplx phc = std::conj(pt.phase(p, f));
        const cplx* b = row + std::size_t(f) * nc2;
        for (int i = 0; i < nc; ++i) {
          cplx s = 0.0;
          for (int j = 0; j < nc; ++j) s += std::conj(b[j * nc + i]) * v.at(p, j);
          t[std::size_t(f) * nc + i] += phc * s;
        }
      }
    }
    Field out(g, nc);
    for (int p = 0; p < g.points(); ++p) {
      cplx acc[2] = {cplx(0.0), cplx(0.0)};
      for (int f = 0; f < g.modes(); ++f) {
        cplx ph = pt.phase(p, f);
        for (int i = 0; i < nc; ++i) acc[i] += ph * t[std::size_t(f) * nc + i];
      }
      for (int i = 0; i < nc; ++i) out.at(p, i) = ws * wp * acc[i];
    }
    return out;
  }

 private:
  SampledSymbol sym_;
};

class DenseOp final : public LinOp {
 public:
  DenseOp(const GridSpec& g, int nc, DenseMatrix m, std::string desc)
      : LinOp(g, nc, std::move(desc)), m_(std::move(m)) {
    require(m_.rows == g.points() * nc && m_.cols == m_.rows, ErrorCode::Shape,
            "dense kernel dimension mismatch");
  }
  Field apply(const Field& u) const override {
    check_input(u);
    return Field(grid_, ncomp_, m_.matvec(u.data));
  }
  Field apply_adjoint(const Field& u) const override {
    check_input(u);
    return Field(grid_, ncomp_, m_.matvec_adjoint(u.data));
  }
  const DenseMatrix& matrix() const { return m_; }

 private:
  DenseMatrix m_;
};

class ComposeOp final : public LinOp {
 public:
  explicit ComposeOp(std::vector<LinOpPtr> fs)
      : LinOp(fs.front()->grid(), fs.front()->ncomp(), ""), fs_(std::move(fs)) {
    std::string d;
    for (const auto& f : fs_) {
      require(f->grid() == grid_ && f->ncomp() == ncomp_, ErrorCode::Shape,
              "composition of operators on different grids");
      d += (d.empty() ? "" : " . ") + f->descriptor();
    }
    desc_ = d;
  }
  Field apply(const Field& u) const override {
    Field v = u;
    for (auto it = fs_.rbegin(); it != fs_.rend(); ++it) v = (*it)->apply(v);
    return v;
  }
  Field apply_adjoint(const Field& u) const override {
    Field v = u;
    for (const auto& f : fs_) v = f->apply_adjoint(v);
    return v;
  }

 private:
  std::vector<LinOpPtr> fs_;
};

class SumOp final : public LinOp {
 public:
  explicit SumOp(std::vector<std::pair<cplx, LinOpPtr>> ts)
      : LinOp(ts.front().second->grid(), ts.front().second->ncomp(), ""),
        ts_(std::move(ts)) {
    std::string d;
    for (const auto& [c, f] : ts_) {
      require(f->grid() == grid_ && f->ncomp() == ncomp_, ErrorCode::Shape,
              "sum of operators on different grids");
      d += (d.empty() ? "" : " + ") + f->descriptor();
    }
    desc_ = d;
  }
  Field apply(const Field& u) const override {
    Field acc(grid_, ncomp_);
    for (const auto& [c, f] : ts_) {
      Field t = f->apply(u);
      t *= c;
      acc += t;
    }
    return acc;
  }
  Field apply_adjoint(const Field& u) const override {
    Field acc(grid_, ncomp_);
    for (const auto& [c, f] : ts_) {
      Field t = f->apply_adjoint(u);
      t *= std::conj(c);
      acc += t;
    }
    return acc;
  }

 private:
  std::vector<std::pair<cplx, LinOpPtr>> ts_;
};

class AdjointOp final : public LinOp {
 public:
  explicit AdjointOp(LinOpPtr op)
      : LinOp(op->grid(), op->ncomp(), "adj(" + op->descriptor() + ")"),
        op_(std::move(op)) {}
  Field apply(const Field& u) const override { return op_->apply_adjoint(u); }
  Field apply_adjoint(const Field& u) const override { return op_->apply(u); }

 private:
  LinOpPtr op_;
};

// Rank-decomposed oscillatory operator: sum_r D_{f_r} Mult_r D_{g_r}.
class SeparableAmpOp final : public LinOp {
 public:
  struct Term {
    CVec fv;      // per point (scalar)
    CVec gw;      // per point (scalar)
    CVec blocks;  // per mode (nc^2)
  };
  SeparableAmpOp(const GridSpec& g, int nc, std::vector<Term> terms, std::string desc)
      : LinOp(g, nc, std::move(desc)), terms_(std::move(terms)) {}

  Field apply(const Field& u) const override {
    check_input(u);
    Field acc(grid_, ncomp_);
    int nc = ncomp_;
    for (const auto& t : terms_) {
      Field w(grid_, nc);
      for (int p = 0; p < grid_.points(); ++p)
        for (int c = 0; c < nc; ++c) w.at(p, c) = t.gw[p] * u.at(p, c);
      SpectralField W = forward_transform(w);
      for (int f = 0; f < grid_.modes(); ++f) {
        const cplx* b = &t.blocks[std::size_t(f) * nc * nc];
        cplx in[2];
        for (int j = 0; j < nc; ++j) in[j] = W.at(f, j);
        for (int i = 0; i < nc; ++i) {
          cplx s = 0.0;
          for (int j = 0; j < nc; ++j) s += b[i * nc + j] * in[j];
          W.at(f, i) = s;
        }
      }
      Field v = inverse_transform(W);
      for (int p = 0; p < grid_.points(); ++p)
        for (int c = 0; c < nc; ++c) acc.at(p, c) += t.fv[p] * v.at(p, c);
    }
    return acc;
  }

  Field apply_adjoint(const Field& u) const override {
    check_input(u);
    Field acc(grid_, ncomp_);
    int nc = ncomp_;
    for (const auto& t : terms_) {
      Field w(grid_, nc);
      for (int p = 0; p < grid_.points(); ++p)
        for (int c = 0; c < nc; ++c) w.at(p, c) = std::conj(t.fv[p]) * u.at(p, c);
      SpectralField W = forward_transform(w);
      for (int f = 0; f < grid_.modes(); ++f) {
        const cplx* b = &t.blocks[std::size_t(f) * nc * nc];
        cplx in[2];
        for (int j = 0; j < nc; ++j) in[j] = W.at(f, j);
        for (int i = 0; i < nc; ++i) {
          cplx s = 0.0;
          for (int j = 0; j < nc; ++j) s += std::conj(b[j * nc + i]) * in[j];
          W.at(f, i) = s;
        }
      }
      Field v = inverse_transform(W);
      for (int p = 0; p < grid_.points(); ++p)
        for (int c = 0; c < nc; ++c) acc.at(p, c) += std::conj(t.gw[p]) * v.at(p, c);
    }
    return acc;
  }

 private:
  std::vector<Term> terms_;
};

}  // namespace

CMat SampledSymbol::block(int p, int f) const {
  int nc2 = ncomp * ncomp;
  const cplx* src = nullptr;
  switch (kind) {
    case Kind::Multiplier:
      src = &values[std::size_t(f) * nc2];
      break;
    case Kind::Multiplication:
      src = &values[std::size_t(p) * nc2];
      break;
    case Kind::General:
      src = &values[(std::size_t(p) * grid.modes() + f) * nc2];
      break;
  }
  CMat m(ncomp);
  for (int i = 0; i < nc2; ++i) m.v[i] = src[i];
  return m;
}

SampledSymbol SampledSymbol::product(const SampledSymbol& o) const {
  require(grid == o.grid && ncomp == o.ncomp, ErrorCode::Shape,
          "sampled symbol product shape mismatch");
  SampledSymbol out;
  out.grid = grid;
  out.ncomp = ncomp;
  int nc2 = ncomp * ncomp;
  auto mul_into = [&](int p, int f, std::size_t slot) {
    CMat m = block(p, f) * o.block(p, f);
    for (int i = 0; i < nc2; ++i) out.values[slot * nc2 + i] = m.v[i];
  };
  if (kind == Kind::Multiplier && o.kind == Kind::Multiplier) {
    out.kind = Kind::Multiplier;
    out.values.resize(std::size_t(grid.modes()) * nc2);
    for (int f = 0; f < grid.modes(); ++f) mul_into(0, f, f);
  } else if (kind == Kind::Multiplication && o.kind == Kind::Multiplication) {
    out.kind = Kind::Multiplication;
    out.values.resize(std::size_t(grid.points()) * nc2);
    for (int p = 0; p < grid.points(); ++p) mul_into(p, 0, p);
  } else {
    std::size_t total = std::size_t(grid.points()) * grid.modes() * nc2;
    require(total <= sample_cap, ErrorCode::Size,
            "sampled symbol product exceeds the sampling budget");
    out.kind = Kind::General;
    out.values.resize(total);
    for (int p = 0; p < grid.points(); ++p)
      for (int f = 0; f < grid.modes(); ++f)
        mul_into(p, f, std::size_t(p) * grid.modes() + f);
  }
  return out;
}

SampledSymbol SampledSymbol::adjoint_values() const {
  SampledSymbol out = *this;
  int nc2 = ncomp * ncomp;
  for (std::size_t s = 0; s * nc2 < values.size(); ++s) {
    CMat m(ncomp);
    for (int i = 0; i < nc2; ++i) m.v[i] = values[s * nc2 + i];
    m = m.adjoint();
    for (int i = 0; i < nc2; ++i) out.values[s * nc2 + i] = m.v[i];
  }
  return out;
}

SampledSymbol sample_singular(const SingularSymbol& sym, const GridSpec& grid) {
  grid.validate();
  require(int(sym.beta.size()) == grid.d, ErrorCode::Parameter, "beta dimension mismatch");
  SampledSymbol out;
  out.grid = grid;
  out.ncomp = sym.ncomp();
  int nc2 = out.ncomp * out.ncomp;
  bool flat_v = !sym.sigma.v_dependent || sym.V.is_zero();
  bool flat_xi = !sym.sigma.xi_dependent;

  auto store = [&](std::size_t slot, const CMat& m) {
    for (int i = 0; i < nc2; ++i) out.values[slot * nc2 + i] = m.v[i];
  };

  if (flat_v) {
    out.kind = SampledSymbol::Kind::Multiplier;
    out.values.resize(std::size_t(grid.modes()) * nc2);
    double zero[4] = {0, 0, 0, 0};
    std::span<const double> x(zero, std::size_t(grid.d));
    for (int n = 0; n < grid.spatial_points(); ++n) {
      auto xi = grid.freq_xi(n);
      for (int jk = 0; jk < grid.theta_modes(); ++jk) {
        int f = grid.mode_index(n, jk);
        store(f, sym.evaluate(x, 0.0, std::span<const double>(xi.data(), std::size_t(grid.d)),
                              grid.mode_k_phase(jk)));
      }
    }
    return out;
  }
  if (flat_xi) {
    out.kind = SampledSymbol::Kind::Multiplication;
    out.values.resize(std::size_t(grid.points()) * nc2);
    double zero[4] = {0, 0, 0, 0};
    for (int m = 0; m < grid.spatial_points(); ++m) {
      auto x = grid.point_x(m);
      for (int j = 0; j < grid.theta_points(); ++j) {
        int p = grid.point_index(m, j);
        store(p, sym.evaluate(std::span<const double>(x.data(), std::size_t(grid.d)),
                              grid.theta_coord(j),
                              std::span<const double>(zero, std::size_t(grid.d)), 0.0));
      }
    }
    return out;
  }
  std::size_t total = std::size_t(grid.points()) * grid.modes() * nc2;
  require(total <= SampledSymbol::sample_cap, ErrorCode::Size,
          "grid too large for general symbol sampling");
  out.kind = SampledSymbol::Kind::General;
  out.values.resize(total);
  for (int m = 0; m < grid.spatial_points(); ++m) {
    auto x = grid.point_x(m);
    std::span<const double> xs(x.data(), std::size_t(grid.d));
    for (int j = 0; j < grid.theta_points(); ++j) {
      double th = grid.theta_coord(j);
      int p = grid.point_index(m, j);
      for (int n = 0; n < grid.spatial_points(); ++n) {
        auto xi = grid.freq_xi(n);
        std::span<const double> xis(xi.data(), std::size_t(grid.d));
        for (int jk = 0; jk < grid.theta_modes(); ++jk) {
          int f = grid.mode_index(n, jk);
          store(std::size_t(p) * grid.modes() + f,
                sym.evaluate(xs, th, xis, grid.mode_k_phase(jk)));
        }
      }
    }
  }
  return out;
}

LinOpPtr make_identity(const GridSpec& g, int ncomp) {
  CVec blocks(std::size_t(g.modes()) * ncomp * ncomp, cplx(0.0));
  for (int f = 0; f < g.modes(); ++f)
    for (int i = 0; i < ncomp; ++i)
      blocks[std::size_t(f) * ncomp * ncomp + i * ncomp + i] = 1.0;
  return std::make_shared<MultiplierOp>(g, ncomp, std::move(blocks), "identity");
}

LinOpPtr make_multiplier(const GridSpec& g, int ncomp,
                         const std::function<CMat(int f)>& fn, std::string desc) {
  CVec blocks(std::size_t(g.modes()) * ncomp * ncomp);
  for (int f = 0; f < g.modes(); ++f) {
    CMat m = fn(f);
    for (int i = 0; i < ncomp * ncomp; ++i)
      blocks[std::size_t(f) * ncomp * ncomp + i] = m.v[i];
  }
  return std::make_shared<MultiplierOp>(g, ncomp, std::move(blocks), std::move(desc));
}

LinOpPtr make_multiplication(const GridSpec& g, int ncomp,
                             const std::function<CMat(int p)>& fn, std::string desc) {
  CVec blocks(std::size_t(g.points()) * ncomp * ncomp);
  for (int p = 0; p < g.points(); ++p) {
    CMat m = fn(p);
    for (int i = 0; i < ncomp * ncomp; ++i)
      blocks[std::size_t(p) * ncomp * ncomp + i] = m.v[i];
  }
  return std::make_shared<MultiplicationOp>(g, ncomp, std::move(blocks), std::move(desc));
}

LinOpPtr make_sampled_op(SampledSymbol s, std::string desc) {
  GridSpec g = s.grid;
  int nc = s.ncomp;
  switch (s.kind) {
    case SampledSymbol::Kind::Multiplier:
      return std::make_shared<MultiplierOp>(g, nc, std::move(s.values), std::move(desc));
    case SampledSymbol::Kind::Multiplication:
      return std::make_shared<MultiplicationOp>(g, nc, std::move(s.values), std::move(desc));
    case SampledSymbol::Kind::General:
      return std::make_shared<SampledSymbolOp>(std::move(s), std::move(desc));
  }
  fail(ErrorCode::Internal, "unreachable");
}

LinOpPtr make_singular_op(const SingularSymbol& sym, const GridSpec& grid) {
  return make_sampled_op(sample_singular(sym, grid), sym.describe());
}

LinOpPtr make_dense_op(const GridSpec& g, int ncomp, DenseMatrix m, std::string desc) {
  return std::make_shared<DenseOp>(g, ncomp, std::move(m), std::move(desc));
}

LinOpPtr make_compose(std::vector<LinOpPtr> factors) {
  require(!factors.empty(), ErrorCode::Parameter, "empty composition");
  return std::make_shared<ComposeOp>(std::move(factors));
}

LinOpPtr make_sum(std::vector<std::pair<cplx, LinOpPtr>> terms) {
  require(!terms.empty(), ErrorCode::Parameter, "empty sum");
  return std::make_shared<SumOp>(std::move(terms));
}

LinOpPtr make_adjoint(LinOpPtr op) { return std::make_shared<AdjointOp>(std::move(op)); }

LinOpPtr make_singular_derivative(const GridSpec& g, int axis, const NormParams& p,
                                  int ncomp) {
  p.validate(g.d);
  require(axis >= 0 && axis < g.d, ErrorCode::Parameter, "invalid derivative axis");
  return make_multiplier(
      g, ncomp,
      [&](int f) {
        int n = f / g.theta_modes(), jk = f % g.theta_modes();
        auto xi = g.freq_xi(n);
        double z = xi[axis] + g.mode_k_phase(jk) * p.beta[axis] / p.epsilon;
        return CMat::identity(ncomp) * cplx(0.0, z);
      },
      "singular-derivative[" + std::to_string(axis) + "]");
}

LinOpPtr make_singular_weight(const GridSpec& g, double s, const NormParams& p,
                              int ncomp) {
  p.validate(g.d);
  return make_multiplier(
      g, ncomp,
      [&](int f) {
        int n = f / g.theta_modes(), jk = f % g.theta_modes();
        double z2 = singular_shift_sq(g, n, jk, p.beta, p.epsilon);
        return CMat::identity(ncomp) *
               cplx(std::pow(p.gamma * p.gamma + z2, 0.5 * s));
      },
      "singular-weight[s=" + format_double(s) + "]");
}

LinOpPtr make_spectral_envelope(const GridSpec& g, int ncomp, double strength) {
  return make_multiplier(
      g, ncomp,
      [&](int f) {
        int n = f / g.theta_modes(), jk = f % g.theta_modes();
        auto multi = g.spatial_multi(n);
        double decay = 0.0;
        for (int a = 0; a < g.d; ++a) {
          double t = double(g.signed_index(multi[a])) / (g.Nx / 2);
          decay += t * t;
        }
        double tk = double(g.mode_signed(jk)) / std::max(1, g.theta_modes() / 2);
        decay += tk * tk;
        return CMat::identity(ncomp) * cplx(std::exp(-strength * decay));
      },
      "band-envelope");
}

LinOpPtr make_oscillatory_op(const SingularAmplitude& amp, const GridSpec& grid) {
  grid.validate();
  int nc = amp.ncomp();
  if (amp.separable()) {
    std::vector<SeparableAmpOp::Term> terms;
    for (const auto& st : amp.sigma.separable) {
      SeparableAmpOp::Term t;
      t.fv.resize(grid.points());
      t.gw.resize(grid.points());
      t.blocks.resize(std::size_t(grid.modes()) * nc * nc);
      double vbuf[4] = {0, 0, 0, 0}, wbuf[4] = {0, 0, 0, 0};
      std::span<double> v(vbuf, std::size_t(amp.sigma.qv));
      std::span<double> w(wbuf, std::size_t(amp.sigma.qw));
      for (int m = 0; m < grid.spatial_points(); ++m) {
        auto x = grid.point_x(m);
        std::span<const double> xs(x.data(), std::size_t(grid.d));
        for (int j = 0; j < grid.theta_points(); ++j) {
          double th = grid.theta_coord(j);
          int p = grid.point_index(m, j);
          if (!amp.V.is_zero()) {
            amp.V.values_at(xs, th, v);
            for (auto& z : v) z *= amp.epsilon;
          }
          if (!amp.W.is_zero()) {
            amp.W.values_at(xs, th, w);
            for (auto& z : w) z *= amp.epsilon;
          }
          t.fv[p] = st.fv ? st.fv(v) : cplx(1.0);
          t.gw[p] = st.gw ? st.gw(w) : cplx(1.0);
        }
      }
      for (int n = 0; n < grid.spatial_points(); ++n) {
        auto xi = grid.freq_xi(n);
        for (int jk = 0; jk < grid.theta_modes(); ++jk) {
          double zbuf[4];
          double kap = grid.mode_k_phase(jk);
          for (int a = 0; a < grid.d; ++a)
            zbuf[a] = xi[a] + kap * amp.beta[a] / amp.epsilon;
          CMat b = st.mult(std::span<const double>(zbuf, std::size_t(grid.d)), amp.gamma);
          int f = grid.mode_index(n, jk);
          for (int i = 0; i < nc * nc; ++i)
            t.blocks[std::size_t(f) * nc * nc + i] = b.v[i];
        }
      }
      terms.push_back(std::move(t));
    }
    return std::make_shared<SeparableAmpOp>(grid, nc, std::move(terms), amp.describe());
  }
  // dense fallback at oracle scale
  GridAmplitudeFn fn = [&amp, grid](int p_out, int p_in, int f) {
    auto xo = grid.point_x(p_out / grid.theta_points());
    auto xi_in = grid.point_x(p_in / grid.theta_points());
    auto freq = grid.freq_xi(f / grid.theta_modes());
    return amp.evaluate(std::span<const double>(xo.data(), std::size_t(grid.d)),
                        grid.theta_coord(p_out % grid.theta_points()),
                        std::span<const double>(xi_in.data(), std::size_t(grid.d)),
                        grid.theta_coord(p_in % grid.theta_points()),
                        std::span<const double>(freq.data(), std::size_t(grid.d)),
                        grid.mode_k_phase(f % grid.theta_modes()));
  };
  return make_amplitude_dense_op(grid, nc, fn, amp.describe());
}

DenseMatrix assemble_amplitude_dense(const GridSpec& g, int ncomp,
                                     const GridAmplitudeFn& amp) {
  std::size_t cost = std::size_t(g.points()) * g.points() * g.modes();
  require(cost <= 60'000'000, ErrorCode::Size,
          "grid too large for dense amplitude assembly");
  const PhaseTable& pt = phase_table(g);
  int dim = g.points() * ncomp;
  DenseMatrix m(dim, dim);
  double w = g.weight_spec() * g.weight_phys();
  for (int po = 0; po < g.points(); ++po) {
    for (int pi = 0; pi < g.points(); ++pi) {
      CMat acc(ncomp);
      for (int f = 0; f < g.modes(); ++f) {
        cplx ph = pt.phase(po, f) * std::conj(pt.phase(pi, f));
        acc = acc + amp(po, pi, f) * ph;
      }
      for (int i = 0; i < ncomp; ++i)
        for (int j = 0; j < ncomp; ++j)
          m.at(po * ncomp + i, pi * ncomp + j) = w * acc.at(i, j);
    }
  }
  return m;
}

LinOpPtr make_amplitude_dense_op(const GridSpec& g, int ncomp,
                                 const GridAmplitudeFn& amp, std::string desc) {
  return make_dense_op(g, ncomp, assemble_amplitude_dense(g, ncomp, amp), std::move(desc));
}

Field apply_pseudo(const SampledSymbol& sig, const Field& u) {
  return make_sampled_op(sig, "sampled")->apply(u);
}

Field apply_singular(const SingularSymbol& sym, const Field& u) {
  return make_singular_op(sym, u.grid)->apply(u);
}

// ---------------------------------------------------------------------------
// Truncation ladder

namespace {

double bump_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// C-infinity bump: 1 on [-1,1], 0 outside [-2,2]
double standard_bump(double t) {
  double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  double up = bump_exp(2.0 - a);
  double dn = bump_exp(a - 1.0);
  return up / (up + dn);
}

double cutoff_k_arg(const GridSpec& g, int jk) {
  return g.geometry == Geometry::Wavetrain ? double(g.mode_signed(jk))
                                           : g.mode_k_sobolev(jk);
}

}  // namespace

TruncationLadder TruncationLadder::standard(const GridSpec& g, double scale1,
                                            double scale2) {
  TruncationLadder l;
  l.chi1 = [scale1](double t) { return scale1 * standard_bump(t); };
  l.chi2_1d = [scale2](double t) { return scale2 * standard_bump(t); };
  double p2 = 1.0;
  for (int a = 1; a < g.d; ++a) p2 *= scale2;
  l.chi_at_zero = scale1 * scale2 * p2;
  double maxk = g.geometry == Geometry::Wavetrain ? double(g.Kmax)
                                                  : g.dk() * (g.Ntheta / 2);
  double maxxi = g.max_abs_xi();
  double thr = 1.0 / std::max(maxk, maxxi);
  double delta = 1.0;
  while (delta > thr) {
    l.deltas.push_back(delta);
    delta *= 0.5;
  }
  for (int extra = 0; extra < 3; ++extra) {
    l.deltas.push_back(delta);
    delta *= 0.5;
  }
  return l;
}

std::pair<Field, OscillatoryReport> apply_oscillatory(const SingularAmplitude& amp,
                                                      const Field& u,
                                                      const TruncationLadder& ladder) {
  const GridSpec& g = u.grid;
  int nc = amp.ncomp();
  require(u.ncomp == nc, ErrorCode::Shape, "amplitude/field component mismatch");
  std::size_t cost = std::size_t(g.points()) * g.points() * g.modes() * ladder.deltas.size();
  require(cost <= 200'000'000, ErrorCode::Size,
          "grid too large for the truncated oscillatory sum");
  const PhaseTable& pt = phase_table(g);
  double ws = g.weight_spec(), wp = g.weight_phys();

  // inner transform over (y, omega): t(f) = sum_{p'} conj(phase) amp(...) u(p')
  // is recomputed per output point since the amplitude couples (x, theta) with
  // (y, omega); cutoffs then scale each frequency shell.
  OscillatoryReport rep;
  double maxk = g.geometry == Geometry::Wavetrain ? double(g.Kmax)
                                                  : g.dk() * (g.Ntheta / 2);
  rep.lattice_threshold = 1.0 / std::max(maxk, g.max_abs_xi());

  Field previous(g, nc);
  Field current(g, nc);
  bool have_prev = false;
  std::vector<double> chi(g.modes());
  for (double delta : ladder.deltas) {
    for (int f = 0; f < g.modes(); ++f) {
      int n = f / g.theta_modes(), jk = f % g.theta_modes();
      double c = ladder.chi1(delta * cutoff_k_arg(g, jk));
      auto xi = g.freq_xi(n);
      for (int a = 0; a < g.d; ++a) c *= ladder.chi2_1d(delta * xi[a]);
      chi[f] = c;
    }
    Field out(g, nc);
    for (int po = 0; po < g.points(); ++po) {
      auto xo = g.point_x(po / g.theta_points());
      double tho = g.theta_coord(po % g.theta_points());
      std::span<const double> xos(xo.data(), std::size_t(g.d));
      cplx acc[2] = {cplx(0.0), cplx(0.0)};
      for (int f = 0; f < g.modes(); ++f) {
        if (chi[f] == 0.0) continue;
        auto xi = g.freq_xi(f / g.theta_modes());
        double kap = g.mode_k_phase(f % g.theta_modes());
        std::span<const double> xis(xi.data(), std::size_t(g.d));
        cplx t[2] = {cplx(0.0), cplx(0.0)};
        for (int pi = 0; pi < g.points(); ++pi) {
          auto y = g.point_x(pi / g.theta_points());
          double om = g.theta_coord(pi % g.theta_points());
          CMat a = amp.evaluate(xos, tho, std::span<const double>(y.data(), std::size_t(g.d)),
                                om, xis, kap);
          cplx phc = std::conj(pt.phase(pi, f));
          for (int i = 0; i < nc; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < nc; ++j) s += a.at(i, j) * u.at(pi, j);
            t[i] += phc * s;
          }
        }
        cplx ph = pt.phase(po, f) * (chi[f] * ws * wp);
        for (int i = 0; i < nc; ++i) acc[i] += ph * t[i];
      }
      for (int i = 0; i < nc; ++i) out.at(po, i) = acc[i];
    }
    rep.deltas.push_back(delta);
    if (have_prev) {
      Field diff = out;
      diff -= previous;
      rep.successive_diffs.push_back(diff.l2_norm());
    }
    previous = out;
    current = std::move(out);
    have_prev = true;
  }
  int nd = int(rep.deltas.size());
  if (nd >= 2 && rep.deltas[nd - 1] <= rep.lattice_threshold &&
      rep.deltas[nd - 2] <= rep.lattice_threshold) {
    rep.stabilized = rep.successive_diffs.back() == 0.0;
  }
  require(nd < 2 || rep.deltas[nd - 1] > rep.lattice_threshold || rep.stabilized ||
              rep.deltas[nd - 2] > rep.lattice_threshold,
          ErrorCode::Internal, "truncation ladder failed to stabilize below threshold");
  return {std::move(current), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Operator norms

namespace {

ApplyFn op_apply_fn(const LinOp& op, bool adjoint) {
  const GridSpec g = op.grid();
  int nc = op.ncomp();
  return [&op, g, nc, adjoint](const CVec& x) {
    Field u(g, nc);
    u.data = x;
    Field v = adjoint ? op.apply_adjoint(u) : op.apply(u);
    return v.data;
  };
}

// full norm weight (gamma^2 + |zeta|^2)^s per mode; callers take sqrt
CVec spectral_weights(const GridSpec& g, double s, const NormParams& np) {
  CVec w(g.modes());
  for (int f = 0; f < g.modes(); ++f) {
    int n = f / g.theta_modes(), jk = f % g.theta_modes();
    double z2 = singular_shift_sq(g, n, jk, np.beta, np.epsilon);
    w[f] = std::pow(np.gamma * np.gamma + z2, s);
  }
  return w;
}

}  // namespace

double operator_norm(const LinOp& op, NormMethod method, const PowerOptions& opt) {
  int dim = op.grid().points() * op.ncomp();
  if (method == NormMethod::DenseSVD) {
    DenseMatrix m = assemble_matrix(op);
    return dense_svd_max(m);
  }
  return power_singular_value(op_apply_fn(op, false), op_apply_fn(op, true), dim, opt)
      .value;
}

double operator_norm_sobolev(const LinOp& op, double s_in, double s_out,
                             const NormParams& np, NormMethod method,
                             const PowerOptions& opt) {
  const GridSpec g = op.grid();
  np.validate(g.d);
  if (s_in == 0.0 && s_out == 0.0) return operator_norm(op, method, opt);
  int nc = op.ncomp();
  int dim = g.modes() * nc;
  CVec win = spectral_weights(g, s_in, np);
  CVec wout = spectral_weights(g, s_out, np);
  double ws = g.weight_spec();
  double sq = std::sqrt(ws);

  ApplyFn fwd = [&, nc](const CVec& t) {
    SpectralField U(g, nc);
    for (int f = 0; f < g.modes(); ++f)
      for (int c = 0; c < nc; ++c)
        U.at(f, c) = t[std::size_t(f) * nc + c] / (sq * std::sqrt(win[f].real()));
    Field u = inverse_transform(U);
    Field v = op.apply(u);
    SpectralField V = forward_transform(v);
    CVec out(dim);
    for (int f = 0; f < g.modes(); ++f)
      for (int c = 0; c < nc; ++c)
        out[std::size_t(f) * nc + c] = V.at(f, c) * sq * std::sqrt(wout[f].real());
    return out;
  };
  ApplyFn adj = [&, nc](const CVec& t) {
    SpectralField U(g, nc);
    for (int f = 0; f < g.modes(); ++f)
      for (int c = 0; c < nc; ++c)
        U.at(f, c) = t[std::size_t(f) * nc + c] * std::sqrt(wout[f].real()) / sq;
    Field u = inverse_transform(U);
    Field v = op.apply_adjoint(u);
    SpectralField V = forward_transform(v);
    CVec out(dim);
    for (int f = 0; f < g.modes(); ++f)
      for (int c = 0; c < nc; ++c)
        out[std::size_t(f) * nc + c] = V.at(f, c) * sq / std::sqrt(win[f].real());
    return out;
  };
  if (method == NormMethod::DenseSVD) {
    require(dim <= 4200, ErrorCode::Size, "weighted dense SVD beyond the oracle budget");
    DenseMatrix b(dim, dim);
    CVec e(dim, cplx(0.0));
    for (int j = 0; j < dim; ++j) {
      e[j] = 1.0;
      CVec col = fwd(e);
      for (int i = 0; i < dim; ++i) b.at(i, j) = col[i];
      e[j] = 0.0;
    }
    return dense_svd_max(b);
  }
  return power_singular_value(fwd, adj, dim, opt).value;
}

double hermitian_lambda_min(const LinOp& op, const PowerOptions& opt) {
  int dim = op.grid().points() * op.ncomp();
  ApplyFn a = op_apply_fn(op, false);
  ApplyFn ah = op_apply_fn(op, true);
  ApplyFn herm = [a, ah](const CVec& x) {
    CVec u = a(x);
    CVec v = ah(x);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.5 * (u[i] + v[i]);
    return u;
  };
  return hermitian_extremes(herm, dim, opt).lambda_min;
}

DenseMatrix assemble_matrix(const LinOp& op, int dof_cap) {
  int dim = op.grid().points() * op.ncomp();
  require(dim <= dof_cap, ErrorCode::Size,
          "assemble_matrix: " + std::to_string(dim) + " DOF exceeds the oracle budget");
  DenseMatrix m(dim, dim);
  Field e(op.grid(), op.ncomp());
  for (int j = 0; j < dim; ++j) {
    e.data[j] = 1.0;
    Field col = op.apply(e);
    for (int i = 0; i < dim; ++i) m.at(i, j) = col.data[i];
    e.data[j] = 0.0;
  }
  return m;
}

}  // namespace spcalc
