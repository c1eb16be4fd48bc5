#include "mimobf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mimobf {

namespace {

bool finite(cxd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require(bool ok, const char* what) {
  if (!ok) throw DimensionMismatch(what);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cxd> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(data_.size() == rows_ * cols_, "entry count must equal rows*cols");
  for (const cxd& z : data_) {
    if (!finite(z)) throw std::invalid_argument("non-finite matrix entry");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  require(cols_ == rhs.rows_, "matrix product shape mismatch");
  ComplexMatrix m(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const cxd a = (*this)(r, k);
      if (a == cxd(0.0, 0.0)) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) m(r, c) += a * rhs(k, c);
    }
  }
  return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix sum shape mismatch");
  ComplexMatrix m = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] += rhs.data_[i];
  return m;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix diff shape mismatch");
  ComplexMatrix m = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] -= rhs.data_[i];
  return m;
}

ComplexMatrix ComplexMatrix::scaled(cxd factor) const {
  ComplexMatrix m = *this;
  for (cxd& z : m.data_) z *= factor;
  return m;
}

cxd ComplexMatrix::trace() const {
  cxd t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cxd& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
  return true;
}

std::vector<cxd> ComplexMatrix::col(std::size_t j) const {
  std::vector<cxd> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, j);
  return v;
}

void ComplexMatrix::set_col(std::size_t j, const std::vector<cxd>& v) {
  require(v.size() == rows_, "column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, j) = v[r];
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

namespace {

double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// One two-sided rotation zeroing w(p,q). Accumulates the column transform
// into v. The rotation is unitary, so Hermitian structure is preserved.
void jacobi_rotate(ComplexMatrix& w, ComplexMatrix& v, std::size_t p,
                   std::size_t q) {
  const cxd apq = w(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cxd phase = apq / mag;
  const double app = w(p, p).real();
  const double aqq = w(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double sg = tau >= 0.0 ? 1.0 : -1.0;
  const double t = -sg / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const std::size_t n = w.rows();
  // right-multiply by U = [[c, -s*phase], [s*conj(phase), c]] on cols (p,q)
  for (std::size_t r = 0; r < n; ++r) {
    const cxd wp = w(r, p), wq = w(r, q);
    w(r, p) = c * wp + s * std::conj(phase) * wq;
    w(r, q) = -s * phase * wp + c * wq;
  }
  // left-multiply by U^H on rows (p,q)
  for (std::size_t col = 0; col < n; ++col) {
    const cxd wp = w(p, col), wq = w(q, col);
    w(p, col) = c * wp + s * phase * wq;
    w(q, col) = -s * std::conj(phase) * wp + c * wq;
  }
  for (std::size_t r = 0; r < n; ++r) {
    const cxd vp = v(r, p), vq = v(r, q);
    v(r, p) = c * vp + s * std::conj(phase) * vq;
    v(r, q) = -s * phase * vp + c * vq;
  }
}

}  // namespace

EigResult hermitian_eig(const ComplexMatrix& a) {
  require(a.rows() == a.cols(), "hermitian_eig needs a square matrix");
  const std::size_t n = a.rows();
  // work on the Hermitian part; callers pass matrices Hermitian to rounding
  ComplexMatrix w = a + a.adjoint();
  w = w.scaled(0.5);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(w.frobenius_norm(), 1e-300);
  const double tol = 1e-14 * scale;
  const int max_sweeps = 100;
  int sweep = 0;
  while (offdiag_norm(w) > tol) {
    if (++sweep > max_sweeps)
      throw NonConvergence("jacobi eigensolver exceeded sweep cap");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (std::abs(w(p, q)) > 1e-300) jacobi_rotate(w, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return w(i, i).real() > w(j, j).real();
  });

  EigResult res;
  res.values.resize(n);
  res.vectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    res.values[j] = w(order[j], order[j]).real();
    for (std::size_t r = 0; r < n; ++r) res.vectors(r, j) = v(r, order[j]);
  }
  return res;
}

namespace {

// Cholesky b = L L^H with the positive-definiteness floor from the module
// contract: pivot <= 1e-12 * trace(b)/n fails the factorization.
ComplexMatrix cholesky_pd(const ComplexMatrix& b) {
  const std::size_t n = b.rows();
  const double floor = 1e-12 * std::max(b.trace().real(), 0.0) /
                       static_cast<double>(std::max<std::size_t>(n, 1));
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = b(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > floor))
      throw NotPositiveDefinite("matrix pivot below positive-definite floor");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      cxd s = b(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / l(j, j).real();
    }
  }
  return l;
}

// columns of x become L^-1 x (forward substitution, L lower triangular)
void forward_solve_inplace(const ComplexMatrix& l, ComplexMatrix& x) {
  const std::size_t n = l.rows();
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      cxd s = x(r, c);
      for (std::size_t k = 0; k < r; ++k) s -= l(r, k) * x(k, c);
      x(r, c) = s / l(r, r).real();
    }
  }
}

// columns of x become L^-H x (back substitution, L^H upper triangular)
void adjoint_solve_inplace(const ComplexMatrix& l, ComplexMatrix& x) {
  const std::size_t n = l.rows();
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t rr = n; rr > 0; --rr) {
      const std::size_t r = rr - 1;
      cxd s = x(r, c);
      for (std::size_t k = r + 1; k < n; ++k)
        s -= std::conj(l(k, r)) * x(k, c);
      x(r, c) = s / l(r, r).real();
    }
  }
}

}  // namespace

EigResult hermitian_generalized_eig(const ComplexMatrix& a,
                                    const ComplexMatrix& b, std::size_t m) {
  require(a.rows() == a.cols() && b.rows() == b.cols() && a.rows() == b.rows(),
          "pencil matrices must be square and of equal dimension");
  const std::size_t n = a.rows();
  require(m >= 1 && m <= n, "requested eigenpair count out of range");

  const ComplexMatrix l = cholesky_pd(b);
  ComplexMatrix z = a;
  forward_solve_inplace(l, z);         // z = L^-1 a
  ComplexMatrix zh = z.adjoint();      // zh = a^H L^-H = a L^-H (a Hermitian)
  forward_solve_inplace(l, zh);        // zh = L^-1 a L^-H
  EigResult std_res = hermitian_eig(zh);

  ComplexMatrix vecs(n, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t r = 0; r < n; ++r) vecs(r, j) = std_res.vectors(r, j);
  adjoint_solve_inplace(l, vecs);      // back-transform: v = L^-H y

  EigResult res;
  res.values.assign(std_res.values.begin(), std_res.values.begin() + m);
  res.vectors = std::move(vecs);
  return res;
}

DominantEigpair dominant_nonneg_eigpair(const RealMatrix& m) {
  require(m.rows() == m.cols() && m.rows() >= 1,
          "dominant eigenpair needs a square matrix");
  const std::size_t n = m.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (m(r, c) < 0.0)
        throw std::invalid_argument("dominant_nonneg_eigpair: negative entry");

  std::vector<double> v(n, 1.0), w(n, 0.0);
  double lambda = 0.0;
  double best_resid = std::numeric_limits<double>::infinity();
  std::vector<double> best_v;
  double best_lambda = 0.0;
  const int cap = 10000;
  for (int it = 0; it < cap; ++it) {
    double vv = 0.0, wv = 0.0, vinf = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += m(r, c) * v[c];
      w[r] = s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      vv += v[r] * v[r];
      wv += w[r] * v[r];
      vinf = std::max(vinf, std::abs(v[r]));
    }
    lambda = wv / vv;
    double resid = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      resid = std::max(resid, std::abs(w[r] - lambda * v[r]));
    const double rel = resid / std::max(vinf, 1e-300);
    if (rel < best_resid) {
      best_resid = rel;
      best_v = v;
      best_lambda = lambda;
    }
    if (rel <= 1e-12) break;  // iterate past the 1e-10 contract for margin
    double winf = 0.0;
    for (double x : w) winf = std::max(winf, std::abs(x));
    if (winf == 0.0) {  // nilpotent-like tail, zero vector image
      lambda = 0.0;
      break;
    }
    for (std::size_t r = 0; r < n; ++r) v[r] = w[r] / winf;
  }
  if (best_resid > 1e-10)
    throw NonConvergence("power iteration failed to meet residual target");

  DominantEigpair out;
  out.value = best_lambda;
  out.vector = best_v;
  for (double& x : out.vector) {
    if (x < 0.0) {
      if (x < -1e-12)
        throw NonConvergence("power iteration produced a negative component");
      x = 0.0;
    }
  }
  const double last = out.vector.back();
  if (last <= 0.0)
    throw NonConvergence("dominant eigenvector has non-positive last entry");
  for (double& x : out.vector) x /= last;
  return out;
}

std::vector<double> solve_linear(const RealMatrix& a,
                                 const std::vector<double>& b) {
  require(a.rows() == a.cols() && a.rows() == b.size(),
          "solve_linear shape mismatch");
  const std::size_t n = a.rows();
  RealMatrix w = a;
  std::vector<double> x = b;

  double max_row_norm = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += std::abs(w(r, c));
    max_row_norm = std::max(max_row_norm, s);
  }
  const double pivot_floor = 1e-12 * max_row_norm;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(w(perm[r], col)) > std::abs(w(perm[piv], col))) piv = r;
    std::swap(perm[col], perm[piv]);
    const double p = w(perm[col], col);
    if (std::abs(p) <= pivot_floor)
      throw SingularMatrix("pivot below singularity floor");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = w(perm[r], col) / p;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) w(perm[r], c) -= f * w(perm[col], c);
      x[perm[r]] -= f * x[perm[col]];
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t rr = n; rr > 0; --rr) {
    const std::size_t r = rr - 1;
    double s = x[perm[r]];
    for (std::size_t c = r + 1; c < n; ++c) s -= w(perm[r], c) * out[c];
    out[r] = s / w(perm[r], r);
  }
  return out;
}

namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  std::size_t m, n;           // constraint count, structural variable count
  std::vector<std::vector<double>> t;  // m rows of n+m+1 (rhs last)
  std::vector<double> z;               // reduced-cost row, same width
  std::vector<std::size_t> basis;      // basis[i] = variable of row i

  double rhs(std::size_t i) const { return t[i][n + m]; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = t[row][col];
    for (double& v : t[row]) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = t[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
    }
    const double fz = z[col];
    if (fz != 0.0)
      for (std::size_t j = 0; j <= n + m; ++j) z[j] -= fz * t[row][j];
    basis[row] = col;
  }

  // Bland's rule: entering = lowest index with negative reduced cost;
  // leaving = min-ratio row, ties by lowest basis variable index.
  // Returns false at optimality; throws if the ratio test finds no row.
  bool bland_step(std::size_t col_limit) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < col_limit; ++j) {
      if (z[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == n + m) return false;
    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= kPivotTol) continue;
      const double ratio = rhs(i) / t[i][enter];
      if (leave == m || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 &&
           basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m)
      throw std::logic_error("lp_min_sum: unbounded direction encountered");
    pivot(leave, enter);
    return true;
  }
};

}  // namespace

std::optional<LpSolution> lp_min_sum(const RealMatrix& aeq,
                                     const std::vector<double>& beq) {
  const std::size_t m = aeq.rows(), n = aeq.cols();
  require(m >= 1 && n >= m && beq.size() == m,
          "lp_min_sum expects K x L data with K <= L");
  double bmax = 0.0;
  for (double b : beq) {
    if (!(b > 0.0))
      throw std::invalid_argument("lp_min_sum requires positive rhs entries");
    bmax = std::max(bmax, b);
  }

  Tableau tb;
  tb.m = m;
  tb.n = n;
  tb.t.assign(m, std::vector<double>(n + m + 1, 0.0));
  tb.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tb.t[i][j] = aeq(i, j);
    tb.t[i][n + i] = 1.0;
    tb.t[i][n + m] = beq[i];
    tb.basis[i] = n + i;
  }

  // phase one: minimize the artificial sum
  tb.z.assign(n + m + 1, 0.0);
  for (std::size_t j = 0; j <= n + m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += tb.t[i][j];
    if (j < n || j == n + m) tb.z[j] = -s;
  }
  while (tb.bland_step(n + m)) {
  }
  const double phase1 = -tb.z[n + m];
  if (phase1 > 1e-9 * std::max(1.0, bmax)) return std::nullopt;

  // drive leftover artificials out of the basis where possible
  for (std::size_t i = 0; i < m; ++i) {
    if (tb.basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(tb.t[i][j]) > kPivotTol) {
        tb.pivot(i, j);
        break;
      }
    }
  }

  // phase two: minimize 1^T p over the structural columns
  tb.z.assign(n + m + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (tb.basis[i] < n) s -= tb.t[i][j];
    tb.z[j] = s;
  }
  {
    double obj = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (tb.basis[i] < n) obj += tb.rhs(i);
    tb.z[n + m] = -obj;
  }
  while (tb.bland_step(n)) {
  }

  LpSolution sol;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (tb.basis[i] < n) {
      double v = tb.rhs(i);
      if (v < 0.0) v = v < -1e-9 * std::max(1.0, bmax) ? v : 0.0;
      sol.x[tb.basis[i]] = v;
    }
  }
  sol.objective = 0.0;
  for (double v : sol.x) sol.objective += v;
  return sol;
}

}  // namespace mimobf
