#include "thermoporo/sparse.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <variant>

namespace thermoporo {

// ---------------------------------------------------------------------------
// Dense helpers

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// ---------------------------------------------------------------------------
// CsrMatrix

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.back() != values_.size()) {
    throw std::invalid_argument("inconsistent CSR arrays");
  }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets) {
  // Counting sort by row, then sort each row by column and merge duplicates.
  std::vector<std::size_t> count(rows + 1, 0);
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw std::out_of_range("triplet outside matrix");
    ++count[t.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) count[i + 1] += count[i];
  std::vector<std::pair<std::size_t, double>> entries(triplets.size());
  {
    std::vector<std::size_t> next(count.begin(), count.end() - 1);
    for (const auto& t : triplets) entries[next[t.row]++] = {t.col, t.value};
  }
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  for (std::size_t i = 0; i < rows; ++i) {
    auto first = entries.begin() + static_cast<std::ptrdiff_t>(count[i]);
    auto last = entries.begin() + static_cast<std::ptrdiff_t>(count[i + 1]);
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!col_idx.empty() && col_idx.size() > row_ptr[i] && col_idx.back() == it->first) {
        values.back() += it->second;
      } else {
        col_idx.push_back(it->first);
        values.push_back(it->second);
      }
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<std::size_t> rp(n + 1), ci(n);
  std::iota(rp.begin(), rp.end(), std::size_t{0});
  std::iota(ci.begin(), ci.end(), std::size_t{0});
  return CsrMatrix(n, n, std::move(rp), std::move(ci), std::vector<double>(n, 1.0));
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

double* CsrMatrix::find(std::size_t i, std::size_t j) {
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return nullptr;
  return &values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

void CsrMatrix::multiply_add(std::span<const double> x, std::span<double> y, double alpha) const {
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] += alpha * s;
  }
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<std::size_t> rp(cols_ + 1, 0);
  for (auto c : col_idx_) ++rp[c + 1];
  for (std::size_t j = 0; j < cols_; ++j) rp[j + 1] += rp[j];
  std::vector<std::size_t> ci(nnz());
  std::vector<double> v(nnz());
  std::vector<std::size_t> next(rp.begin(), rp.end() - 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t pos = next[col_idx_[k]]++;
      ci[pos] = i;
      v[pos] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(rp), std::move(ci), std::move(v));
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::symmetry_error() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  const CsrMatrix t = transpose();
  return add(*this, 1.0, t, -1.0).max_abs();
}

void CsrMatrix::scale(double s) {
  for (auto& v : values_) v *= s;
}

CsrMatrix CsrMatrix::submatrix(std::span<const std::size_t> keep_rows,
                               std::span<const std::size_t> keep_cols) const {
  constexpr std::size_t kDropped = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> col_map(cols_, kDropped);
  for (std::size_t j = 0; j < keep_cols.size(); ++j) col_map[keep_cols[j]] = j;
  std::vector<std::size_t> rp{0};
  std::vector<std::size_t> ci;
  std::vector<double> v;
  for (auto i : keep_rows) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t j = col_map[col_idx_[k]];
      if (j == kDropped) continue;
      ci.push_back(j);
      v.push_back(values_[k]);
    }
    rp.push_back(ci.size());
  }
  // keep_cols ascending keeps each row sorted
  return CsrMatrix(keep_rows.size(), keep_cols.size(), std::move(rp), std::move(ci), std::move(v));
}

LinearOperator CsrMatrix::as_operator() const {
  return [this](std::span<const double> x, std::span<double> y) { multiply(x, y); };
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  const auto arp = a.row_ptr();
  const auto aci = a.col_idx();
  const auto av = a.values();
  const auto brp = b.row_ptr();
  const auto bci = b.col_idx();
  const auto bv = b.values();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> marker(b.cols(), kUnset);
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<std::size_t> rp{0};
  std::vector<std::size_t> ci;
  std::vector<double> v;
  std::vector<std::size_t> row_cols;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    row_cols.clear();
    for (std::size_t ka = arp[i]; ka < arp[i + 1]; ++ka) {
      const std::size_t k = aci[ka];
      const double aik = av[ka];
      for (std::size_t kb = brp[k]; kb < brp[k + 1]; ++kb) {
        const std::size_t j = bci[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          row_cols.push_back(j);
        }
        acc[j] += aik * bv[kb];
      }
    }
    std::sort(row_cols.begin(), row_cols.end());
    for (auto j : row_cols) {
      ci.push_back(j);
      v.push_back(acc[j]);
    }
    rp.push_back(ci.size());
  }
  return CsrMatrix(a.rows(), b.cols(), std::move(rp), std::move(ci), std::move(v));
}

CsrMatrix add(const CsrMatrix& a, double alpha, const CsrMatrix& b, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix sum shape mismatch");
  }
  std::vector<std::size_t> rp{0};
  std::vector<std::size_t> ci;
  std::vector<double> v;
  ci.reserve(a.nnz() + b.nnz());
  v.reserve(a.nnz() + b.nnz());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::size_t ka = a.row_ptr()[i], kb = b.row_ptr()[i];
    const std::size_t ea = a.row_ptr()[i + 1], eb = b.row_ptr()[i + 1];
    while (ka < ea || kb < eb) {
      const std::size_t ja = ka < ea ? a.col_idx()[ka] : std::numeric_limits<std::size_t>::max();
      const std::size_t jb = kb < eb ? b.col_idx()[kb] : std::numeric_limits<std::size_t>::max();
      if (ja == jb) {
        ci.push_back(ja);
        v.push_back(alpha * a.values()[ka++] + beta * b.values()[kb++]);
      } else if (ja < jb) {
        ci.push_back(ja);
        v.push_back(alpha * a.values()[ka++]);
      } else {
        ci.push_back(jb);
        v.push_back(beta * b.values()[kb++]);
      }
    }
    rp.push_back(ci.size());
  }
  return CsrMatrix(a.rows(), a.cols(), std::move(rp), std::move(ci), std::move(v));
}

CsrMatrix galerkin_product(const CsrMatrix& p, const CsrMatrix& a) {
  const CsrMatrix pt = p.transpose();
  CsrMatrix c = multiply(pt, multiply(a, p));
  return add(c, 0.5, c.transpose(), 0.5);
}

void BlockBuilder::add(std::size_t row_offset, std::size_t col_offset, const CsrMatrix& block,
                       double scale, bool transpose) {
  const std::size_t br = transpose ? block.cols() : block.rows();
  const std::size_t bc = transpose ? block.rows() : block.cols();
  if (row_offset + br > rows_ || col_offset + bc > cols_) {
    throw std::out_of_range("block does not fit");
  }
  for (std::size_t i = 0; i < block.rows(); ++i) {
    for (std::size_t k = block.row_ptr()[i]; k < block.row_ptr()[i + 1]; ++k) {
      const std::size_t j = block.col_idx()[k];
      const double v = scale * block.values()[k];
      if (transpose) {
        triplets_.push_back({row_offset + j, col_offset + i, v});
      } else {
        triplets_.push_back({row_offset + i, col_offset + j, v});
      }
    }
  }
}

CsrMatrix BlockBuilder::build() && {
  return CsrMatrix::from_triplets(rows_, cols_, std::move(triplets_));
}

void write_matrix_market(std::ostream& out, const CsrMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      out << i + 1 << ' ' << a.col_idx()[k] + 1 << ' ' << a.values()[k] << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Factorization

namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenSparse to_eigen(const CsrMatrix& a) {
  std::vector<Eigen::Triplet<double, int>> t;
  t.reserve(a.nnz());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      t.emplace_back(static_cast<int>(i), static_cast<int>(a.col_idx()[k]), a.values()[k]);
    }
  }
  EigenSparse m(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Simplicial: the supernodal path goes through BLAS, whose auto-selected kernels
// produced wrong factors on some CPUs.
using Cholesky = Eigen::CholmodSimplicialLLT<EigenSparse, Eigen::Lower>;
using Ldlt = Eigen::SimplicialLDLT<EigenSparse, Eigen::Lower, Eigen::AMDOrdering<int>>;
using Lu = Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>>;

}  // namespace

struct Factorization::Impl {
  std::variant<std::unique_ptr<Cholesky>, std::unique_ptr<Ldlt>, std::unique_ptr<Lu>> solver;
};

Factorization::Factorization(const CsrMatrix& a, FactorizationKind kind)
    : n_(a.rows()), kind_(kind), impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("factorization of a non-square matrix");
  const EigenSparse m = to_eigen(a);
  if (kind == FactorizationKind::Cholesky) {
    auto chol = std::make_unique<Cholesky>();
    chol->cholmod().print = 0;
    chol->compute(m);
    if (chol->info() != Eigen::Success) {
      throw NotPositiveDefinite("matrix is not SPD: Cholesky factorization hit a non-positive pivot");
    }
    impl_->solver = std::move(chol);
    return;
  }
  auto ldlt = std::make_unique<Ldlt>();
  ldlt->compute(m);
  bool ok = ldlt->info() == Eigen::Success;
  if (ok) {
    const auto d = ldlt->vectorD();
    const double scale = d.cwiseAbs().maxCoeff();
    ok = d.cwiseAbs().minCoeff() > 1e-13 * scale;
  }
  if (ok) {
    impl_->solver = std::move(ldlt);
    return;
  }
  // Without pivoting LDL^T can meet a tiny pivot on indefinite matrices.
  auto lu = std::make_unique<Lu>();
  lu->compute(m);
  if (lu->info() != Eigen::Success) {
    throw std::runtime_error("matrix is singular: " + lu->lastErrorMessage());
  }
  impl_->solver = std::move(lu);
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

void Factorization::solve(std::span<const double> b, std::span<double> x) const {
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::Map<Eigen::VectorXd> out(x.data(), static_cast<Eigen::Index>(x.size()));
  std::visit([&](const auto& s) { out = s->solve(rhs); }, impl_->solver);
}

std::vector<double> Factorization::solve(std::span<const double> b) const {
  std::vector<double> x(b.size());
  solve(b, x);
  return x;
}

LinearOperator Factorization::as_operator() const {
  return [this](std::span<const double> b, std::span<double> x) { solve(b, x); };
}

Factorization factorize(const CsrMatrix& a, FactorizationKind kind) {
  return Factorization(a, kind);
}

// ---------------------------------------------------------------------------
// DeflatedSolve

DeflatedSolve::DeflatedSolve(LinearOperator base, std::vector<double> z)
    : base_(std::move(base)), z_(std::move(z)), w_(z_.size()) {
  base_(z_, w_);
  finish_setup();
}

DeflatedSolve::DeflatedSolve(LinearOperator base, std::vector<double> z, std::vector<double> w)
    : base_(std::move(base)), z_(std::move(z)), w_(std::move(w)) {
  if (w_.size() != z_.size()) throw std::invalid_argument("deflation vectors differ in length");
  finish_setup();
}

void DeflatedSolve::finish_setup() {
  s_ = 1.0 - dot(z_, w_);
  if (!(s_ > 1e-14)) {
    throw SingularDeflation("deflated operator A - z z^T is not positive definite (1 - z^T A^{-1} z = " +
                            std::to_string(s_) + ")");
  }
}

void DeflatedSolve::apply(std::span<const double> b, std::span<double> x) const {
  base_(b, x);
  axpy(dot(w_, b) / s_, w_, x);
}

LinearOperator DeflatedSolve::as_operator() const {
  return [this](std::span<const double> b, std::span<double> x) { apply(b, x); };
}

// ---------------------------------------------------------------------------
// Lanczos

namespace {

struct RitzSummary {
  EigenEstimate est;
  double max_residual_ratio = std::numeric_limits<double>::infinity();
};

RitzSummary ritz_summary(const std::vector<double>& alpha, const std::vector<double>& beta,
                         double beta_next) {
  const auto k = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < k) {
      t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i + 1)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  const Eigen::VectorXd& theta = es.eigenvalues();
  const Eigen::MatrixXd& s = es.eigenvectors();

  RitzSummary out;
  EigenEstimate& e = out.est;
  std::vector<Eigen::Index> tracked;
  Eigen::Index neg_min = -1, neg_max = -1, pos_min = -1, pos_max = -1;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double th = theta(i);
    if (th < 0.0) {
      if (neg_max < 0 || -th > -theta(neg_max)) neg_max = i;
      if (neg_min < 0 || -th < -theta(neg_min)) neg_min = i;
    } else {
      if (pos_max < 0 || th > theta(pos_max)) pos_max = i;
      if (pos_min < 0 || th < theta(pos_min)) pos_min = i;
    }
  }
  e.lambda_min = theta(0);
  e.lambda_max = theta(k - 1);
  e.has_negative = neg_min >= 0;
  e.has_positive = pos_min >= 0;
  if (e.has_negative) {
    e.negative_min_modulus = -theta(neg_min);
    e.negative_max_modulus = -theta(neg_max);
    tracked.push_back(neg_min);
    tracked.push_back(neg_max);
  }
  if (e.has_positive) {
    e.positive_min = theta(pos_min);
    e.positive_max = theta(pos_max);
    tracked.push_back(pos_min);
    tracked.push_back(pos_max);
  }
  e.min_modulus = std::numeric_limits<double>::infinity();
  e.max_modulus = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    e.min_modulus = std::min(e.min_modulus, std::abs(theta(i)));
    e.max_modulus = std::max(e.max_modulus, std::abs(theta(i)));
  }
  double worst = 0.0;
  for (auto i : tracked) {
    const double res = std::abs(beta_next * s(k - 1, i));
    worst = std::max(worst, res / std::max(std::abs(theta(i)), 1e-300));
  }
  out.max_residual_ratio = worst;
  return out;
}

}  // namespace

EigenEstimate lanczos_extreme_eigs(const LinearOperator& apply_a, const LinearOperator& apply_binv,
                                   std::size_t n, int max_iters, double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int limit = std::min<int>(max_iters, static_cast<int>(n));
  // v: residual-space basis, q = B^{-1} v; (q_i, v_j) = delta_ij.
  std::vector<std::vector<double>> v_basis, q_basis;
  std::vector<double> alpha, beta{0.0};
  std::vector<double> w(n), zw(n), tmp(n);
  int restarts = 0;

  // Orthogonalize r against the basis in the B^{-1} inner product; returns
  // (r, B^{-1} r)^{1/2} and leaves B^{-1} r in zr.
  auto orthogonalize = [&](std::vector<double>& r, std::vector<double>& zr) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < v_basis.size(); ++i) {
        const double c = dot(q_basis[i], r);
        axpy(-c, v_basis[i], r);
      }
    }
    apply_binv(r, zr);
    return std::sqrt(std::max(dot(r, zr), 0.0));
  };

  auto start_vector = [&]() {
    std::vector<double> r = random_vector(n, rng);
    std::vector<double> zr(n);
    const double b = orthogonalize(r, zr);
    return std::make_tuple(std::move(r), std::move(zr), b);
  };

  auto [r0, z0, b0] = start_vector();
  if (b0 <= 0.0) throw std::runtime_error("Lanczos start vector has zero B^{-1} norm");
  for (auto& x : r0) x /= b0;
  for (auto& x : z0) x /= b0;
  v_basis.push_back(std::move(r0));
  q_basis.push_back(std::move(z0));

  EigenEstimate result;
  double beta_next = 0.0;
  for (int j = 0; j < limit; ++j) {
    const auto& q = q_basis.back();
    apply_a(q, w);
    const double a = dot(q, w);
    alpha.push_back(a);
    axpy(-a, v_basis.back(), w);
    if (v_basis.size() >= 2 && beta.back() != 0.0) {
      axpy(-beta.back(), v_basis[v_basis.size() - 2], w);
    }
    beta_next = orthogonalize(w, zw);

    const bool last = j + 1 == limit;
    double scale = 0.0;
    for (double x : alpha) scale = std::max(scale, std::abs(x));
    const bool breakdown = beta_next <= 1e-12 * std::max(scale, 1.0);
    if (breakdown && !last) {
      // Invariant subspace found: the Ritz values in it are exact.
      if (restarts >= 3) {
        beta_next = 0.0;
        result = ritz_summary(alpha, beta, 0.0).est;
        result.converged = true;
        result.iterations = j + 1;
        result.restarts = restarts;
        return result;
      }
      auto [r, zr, b] = start_vector();
      ++restarts;
      if (b <= 1e-12) {
        result = ritz_summary(alpha, beta, 0.0).est;
        result.converged = true;
        result.iterations = j + 1;
        result.restarts = restarts;
        return result;
      }
      for (auto& x : r) x /= b;
      for (auto& x : zr) x /= b;
      beta.push_back(0.0);
      v_basis.push_back(std::move(r));
      q_basis.push_back(std::move(zr));
      continue;
    }
    if ((j + 1) % 5 == 0 || last || breakdown) {
      const RitzSummary rs = ritz_summary(alpha, beta, breakdown ? 0.0 : beta_next);
      result = rs.est;
      result.iterations = j + 1;
      result.restarts = restarts;
      if (rs.max_residual_ratio < tol || breakdown) {
        result.converged = true;
        return result;
      }
      if (last) return result;
    }
    std::vector<double> vn(w), qn(zw);
    for (auto& x : vn) x /= beta_next;
    for (auto& x : qn) x /= beta_next;
    beta.push_back(beta_next);
    v_basis.push_back(std::move(vn));
    q_basis.push_back(std::move(qn));
  }
  return result;
}

}  // namespace thermoporo
