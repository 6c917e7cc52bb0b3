#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace thermoporo {

/// y = Op(x). Used for matrix products, factorized solves and V-cycles alike.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<double> values);

  /// Duplicates are summed; explicit zeros are kept so the pattern stays symmetric.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
  static CsrMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Entry (i, j) or 0 when outside the pattern.
  double at(std::size_t i, std::size_t j) const;
  /// Pointer into the value array, nullptr when (i, j) is not stored.
  double* find(std::size_t i, std::size_t j);

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;
  /// y += alpha * A x
  void multiply_add(std::span<const double> x, std::span<double> y, double alpha = 1.0) const;

  CsrMatrix transpose() const;
  std::vector<double> diagonal() const;
  double max_abs() const;
  /// max |a_ij - a_ji|
  double symmetry_error() const;
  void scale(double s);

  /// Rows `keep_rows`, columns `keep_cols` (both ascending index lists).
  CsrMatrix submatrix(std::span<const std::size_t> keep_rows,
                      std::span<const std::size_t> keep_cols) const;

  LinearOperator as_operator() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// C = A * B (Gustavson).
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
/// alpha * A + beta * B, same shape.
CsrMatrix add(const CsrMatrix& a, double alpha, const CsrMatrix& b, double beta);
/// P^T A P, symmetrized to remove round-off asymmetry.
CsrMatrix galerkin_product(const CsrMatrix& p, const CsrMatrix& a);

/// Assembles a matrix from scaled sub-blocks placed at (row, col) offsets.
class BlockBuilder {
 public:
  BlockBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  void add(std::size_t row_offset, std::size_t col_offset, const CsrMatrix& block,
           double scale = 1.0, bool transpose = false);
  CsrMatrix build() &&;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Triplet> triplets_;
};

/// Coordinate-format Matrix Market export (general, real).
void write_matrix_market(std::ostream& out, const CsrMatrix& a);

class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularDeflation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FactorizationKind { Cholesky, Ldlt };

/// Exact sparse factorization with a fill-reducing ordering. The Cholesky path
/// reports NotPositiveDefinite on a non-positive pivot; the LDL^T path accepts
/// symmetric indefinite matrices.
class Factorization {
 public:
  Factorization(const CsrMatrix& a, FactorizationKind kind);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  std::size_t size() const { return n_; }
  FactorizationKind kind() const { return kind_; }
  void solve(std::span<const double> b, std::span<double> x) const;
  std::vector<double> solve(std::span<const double> b) const;
  LinearOperator as_operator() const;

 private:
  struct Impl;
  std::size_t n_ = 0;
  FactorizationKind kind_ = FactorizationKind::Cholesky;
  std::unique_ptr<Impl> impl_;
};

Factorization factorize(const CsrMatrix& a, FactorizationKind kind = FactorizationKind::Cholesky);

/// Applies (A - z z^T)^{-1} through the Sherman-Morrison-Woodbury identity
///   (A - z z^T)^{-1} b = A^{-1} b + (w^T b / s) w,  w = A^{-1} z,  s = 1 - z^T w,
/// with one base solve per application. `base` must be symmetric.
class DeflatedSolve {
 public:
  /// w is computed once with `base`.
  DeflatedSolve(LinearOperator base, std::vector<double> z);
  /// w supplied by the caller (for example an accurate solve when `base` is approximate).
  DeflatedSolve(LinearOperator base, std::vector<double> z, std::vector<double> w);

  double deflation_scalar() const { return s_; }
  const std::vector<double>& z() const { return z_; }
  const std::vector<double>& w() const { return w_; }
  void apply(std::span<const double> b, std::span<double> x) const;
  LinearOperator as_operator() const;

 private:
  void finish_setup();

  LinearOperator base_;
  std::vector<double> z_;
  std::vector<double> w_;
  double s_ = 1.0;
};

struct EigenEstimate {
  double lambda_min = 0.0;  // signed extremes
  double lambda_max = 0.0;
  double min_modulus = 0.0;
  double max_modulus = 0.0;
  bool has_negative = false;
  bool has_positive = false;
  double negative_min_modulus = 0.0;  // negative branch, |lambda|
  double negative_max_modulus = 0.0;
  double positive_min = 0.0;  // positive branch
  double positive_max = 0.0;
  int iterations = 0;
  int restarts = 0;
  bool converged = false;

  double condition() const { return max_modulus / min_modulus; }
};

/// Extreme eigenvalues of the generalized problem A x = lambda B x via Lanczos
/// on B^{-1}A in the B-inner product, with full reorthogonalization. A must be
/// symmetric and B^{-1} symmetric positive definite. Ritz values are accepted
/// when every tracked extreme has residual bound below tol * |theta|. On
/// breakdown the process continues from a fresh random vector (at most 3 times).
EigenEstimate lanczos_extreme_eigs(const LinearOperator& apply_a, const LinearOperator& apply_binv,
                                   std::size_t n, int max_iters, double tol,
                                   std::uint64_t seed = 12345);

// Small dense helpers shared by the solvers.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng);

}  // namespace thermoporo
