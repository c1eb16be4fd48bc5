#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex/real matrix kernels used by the beamforming and power
// allocation solvers: Hermitian generalized eigensolver, dominant
// nonnegative eigenpair, pivoted linear solve and a small two-phase
// simplex for equality-constrained minimum-sum LPs.

namespace mimobf {

using cxd = std::complex<double>;

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Row-major dense complex matrix. Constructors reject NaN/Inf entries;
// all arithmetic assumes operands stay finite.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cxd(0.0, 0.0)) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cxd> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cxd& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cxd& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  ComplexMatrix adjoint() const;
  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix scaled(cxd factor) const;

  cxd trace() const;
  double frobenius_norm() const;
  bool is_hermitian(double tol) const;

  std::vector<cxd> col(std::size_t j) const;
  void set_col(std::size_t j, const std::vector<cxd>& v);

  const std::vector<cxd>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cxd> data_;
};

// Row-major dense real matrix, used for coupling systems and LP data.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static RealMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct EigResult {
  std::vector<double> values;  // sorted non-increasing
  ComplexMatrix vectors;       // one column per value
};

/// Full spectrum of a Hermitian matrix by cyclic Jacobi sweeps.
/// Eigenvalues sorted non-increasing, eigenvectors orthonormal.
EigResult hermitian_eig(const ComplexMatrix& a);

/// Top-m generalized eigenpairs of the Hermitian pencil (a, b), b positive
/// definite. Reduction: b = L L^H, standard problem on L^-1 a L^-H, vectors
/// back-transformed so that v_i^H b v_j = delta_ij.
EigResult hermitian_generalized_eig(const ComplexMatrix& a,
                                    const ComplexMatrix& b, std::size_t m);

struct DominantEigpair {
  double value = 0.0;
  std::vector<double> vector;  // nonnegative, last entry scaled to 1
};

/// Spectral-radius eigenpair of a nonnegative matrix by power iteration
/// (all-ones start). Residual guarantee ||Mv - lambda v||_inf <= 1e-10
/// ||v||_inf; throws NonConvergence past the iteration cap.
DominantEigpair dominant_nonneg_eigpair(const RealMatrix& m);

/// Solves a x = b with partially pivoted elimination. Throws SingularMatrix
/// when a pivot falls below 1e-12 times the largest initial row norm.
std::vector<double> solve_linear(const RealMatrix& a,
                                 const std::vector<double>& b);

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
};

/// min 1^T p  s.t.  aeq p = beq, p >= 0, by two-phase primal simplex with
/// Bland's rule (ties and entering choices resolved by lowest index).
/// Returns nullopt when phase one ends with a positive optimum.
std::optional<LpSolution> lp_min_sum(const RealMatrix& aeq,
                                     const std::vector<double>& beq);

}  // namespace mimobf
