#include "thermoporo/amg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace thermoporo {

std::string to_string(SmootherKind k) {
  switch (k) {
    case SmootherKind::PointJacobi:
      return "point-jacobi";
    case SmootherKind::PointGaussSeidel:
      return "gauss-seidel";
    case SmootherKind::BlockJacobi:
      return "block-jacobi";
  }
  return "unknown";
}

std::vector<std::vector<std::size_t>> strength_graph(const CsrMatrix& A,
                                                     std::span<const std::size_t> node_ptr,
                                                     std::span<const int> field, double theta) {
  const std::size_t nn = node_ptr.size() - 1;
  std::vector<std::size_t> node_of(A.rows());
  for (std::size_t k = 0; k < nn; ++k) {
    for (std::size_t i = node_ptr[k]; i < node_ptr[k + 1]; ++i) node_of[i] = k;
  }
  // Squared Frobenius norms of the node blocks, row by row of the node graph.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(nn);
  std::vector<double> acc(nn, 0.0);
  std::vector<std::size_t> mark(nn, static_cast<std::size_t>(-1));
  std::vector<std::size_t> touched;
  const auto rp = A.row_ptr();
  const auto ci = A.col_idx();
  const auto v = A.values();
  for (std::size_t k = 0; k < nn; ++k) {
    touched.clear();
    for (std::size_t i = node_ptr[k]; i < node_ptr[k + 1]; ++i) {
      for (std::size_t e = rp[i]; e < rp[i + 1]; ++e) {
        const std::size_t m = node_of[ci[e]];
        if (mark[m] != k) {
          mark[m] = k;
          acc[m] = 0.0;
          touched.push_back(m);
        }
        acc[m] += v[e] * v[e];
      }
    }
    for (auto m : touched) rows[k].push_back({m, acc[m]});
  }
  std::vector<double> diag(nn, 0.0);
  for (std::size_t k = 0; k < nn; ++k) {
    for (const auto& [m, s] : rows[k]) {
      if (m == k) diag[k] = std::sqrt(s);
    }
  }
  std::vector<std::vector<std::size_t>> graph(nn);
  for (std::size_t k = 0; k < nn; ++k) {
    for (const auto& [m, s] : rows[k]) {
      if (m == k) continue;
      if (!field.empty() && field[m] != field[k]) continue;
      if (std::sqrt(s) > theta * std::sqrt(diag[k] * diag[m])) graph[k].push_back(m);
    }
    std::sort(graph[k].begin(), graph[k].end());
  }
  // Symmetrize: keep an edge when either direction is strong.
  for (std::size_t k = 0; k < nn; ++k) {
    for (auto m : graph[k]) {
      if (!std::binary_search(graph[m].begin(), graph[m].end(), k)) {
        graph[m].insert(std::lower_bound(graph[m].begin(), graph[m].end(), k), k);
      }
    }
  }
  return graph;
}

std::pair<std::vector<std::size_t>, std::size_t> standard_aggregation(
    const std::vector<std::vector<std::size_t>>& graph) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  const std::size_t n = graph.size();
  std::vector<std::size_t> agg(n, kNone);
  std::vector<char> root_phase(n, 0);
  std::size_t count = 0;

  // Phase 1: nodes whose whole neighbourhood is free seed an aggregate.
  for (std::size_t i = 0; i < n; ++i) {
    if (agg[i] != kNone || graph[i].empty()) continue;
    bool free = true;
    for (auto j : graph[i]) {
      if (agg[j] != kNone) {
        free = false;
        break;
      }
    }
    if (!free) continue;
    agg[i] = count;
    root_phase[i] = 1;
    for (auto j : graph[i]) {
      agg[j] = count;
      root_phase[j] = 1;
    }
    ++count;
  }
  // Phase 2: attach leftovers to a neighbouring phase-1 aggregate.
  std::vector<std::size_t> phase2(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    if (agg[i] != kNone) continue;
    for (auto j : graph[i]) {
      if (root_phase[j]) {
        phase2[i] = agg[j];
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (phase2[i] != kNone) agg[i] = phase2[i];
  }
  // Phase 3: remaining nodes group with their free neighbours.
  for (std::size_t i = 0; i < n; ++i) {
    if (agg[i] != kNone || graph[i].empty()) continue;
    agg[i] = count;
    for (auto j : graph[i]) {
      if (agg[j] == kNone) agg[j] = count;
    }
    ++count;
  }
  return {std::move(agg), count};
}

Eigen::MatrixXd rigid_body_modes(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * n, 3);
  for (Eigen::Index k = 0; k < n; ++k) {
    b(2 * k, 0) = 1.0;
    b(2 * k + 1, 1) = 1.0;
    b(2 * k, 2) = -y[static_cast<std::size_t>(k)];
    b(2 * k + 1, 2) = x[static_cast<std::size_t>(k)];
  }
  return b;
}

namespace {

constexpr std::size_t kUnaggregated = static_cast<std::size_t>(-1);

struct Tentative {
  CsrMatrix T;
  Eigen::MatrixXd B_coarse;
  std::vector<std::size_t> node_ptr;  // coarse nodes = aggregates
  std::vector<int> field;
};

/// Per-aggregate orthonormalization of the near-nullspace. Candidates that are
/// numerically dependent on an aggregate are dropped there, so coarse nodes
/// may carry fewer dofs than there are candidates.
Tentative tentative_prolongator(const AmgHierarchy::Level& lvl,
                                const std::vector<std::size_t>& agg, std::size_t num_agg) {
  const std::size_t nn = lvl.node_ptr.size() - 1;
  std::vector<std::vector<std::size_t>> members(num_agg);
  for (std::size_t k = 0; k < nn; ++k) {
    if (agg[k] != kUnaggregated) members[agg[k]].push_back(k);
  }
  const Eigen::Index kc = lvl.B.cols();

  Tentative out;
  out.node_ptr.push_back(0);
  std::vector<Triplet> trip;
  std::vector<Eigen::VectorXd> coarse_rows;  // rows of B_coarse
  std::size_t col = 0;
  for (std::size_t a = 0; a < num_agg; ++a) {
    std::vector<std::size_t> dofs;
    for (auto k : members[a]) {
      for (std::size_t i = lvl.node_ptr[k]; i < lvl.node_ptr[k + 1]; ++i) dofs.push_back(i);
    }
    const auto nd = static_cast<Eigen::Index>(dofs.size());
    Eigen::MatrixXd local(nd, kc);
    for (Eigen::Index r = 0; r < nd; ++r) local.row(r) = lvl.B.row(static_cast<Eigen::Index>(dofs[r]));
    // Modified Gram-Schmidt with dropping of dependent columns.
    std::vector<Eigen::VectorXd> q;
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(kc, kc);
    std::vector<Eigen::Index> kept;
    const double scale = std::max(local.norm(), 1e-300);
    for (Eigen::Index c = 0; c < kc; ++c) {
      Eigen::VectorXd v = local.col(c);
      for (std::size_t m = 0; m < q.size(); ++m) {
        const double h = q[m].dot(v);
        R(static_cast<Eigen::Index>(m), c) = h;
        v -= h * q[m];
      }
      for (std::size_t m = 0; m < q.size(); ++m) {
        const double h = q[m].dot(v);
        R(static_cast<Eigen::Index>(m), c) += h;
        v -= h * q[m];
      }
      const double nv = v.norm();
      if (nv > 1e-10 * scale) {
        R(static_cast<Eigen::Index>(q.size()), c) = nv;
        q.push_back(v / nv);
      }
    }
    if (q.empty()) {
      // Near-nullspace vanishes here; fall back to the first unit vector.
      Eigen::VectorXd e = Eigen::VectorXd::Zero(nd);
      e(0) = 1.0;
      q.push_back(e);
    }
    for (std::size_t m = 0; m < q.size(); ++m) {
      for (Eigen::Index r = 0; r < nd; ++r) {
        if (q[m](r) != 0.0) trip.push_back({dofs[r], col + m, q[m](r)});
      }
      coarse_rows.push_back(R.row(static_cast<Eigen::Index>(m)));
    }
    col += q.size();
    out.node_ptr.push_back(col);
    out.field.push_back(lvl.field.empty() ? 0 : lvl.field[members[a].front()]);
  }
  out.T = CsrMatrix::from_triplets(lvl.A.rows(), col, std::move(trip));
  out.B_coarse.resize(static_cast<Eigen::Index>(col), kc);
  for (std::size_t r = 0; r < col; ++r) out.B_coarse.row(static_cast<Eigen::Index>(r)) = coarse_rows[r];
  return out;
}

double dinv_a_spectral_radius(const CsrMatrix& A, const std::vector<double>& dinv, int iters) {
  const std::size_t n = A.rows();
  std::mt19937_64 rng(2024);
  std::vector<double> x = random_vector(n, rng), y(n);
  double rho = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double nx = norm2(x);
    for (auto& v : x) v /= nx;
    A.multiply(x, y);
    for (std::size_t i = 0; i < n; ++i) y[i] *= dinv[i];
    rho = norm2(y);
    std::swap(x, y);
  }
  return rho;
}

}  // namespace

AmgHierarchy::AmgHierarchy(const CsrMatrix& A, const Eigen::MatrixXd& near_nullspace,
                           int block_size, const AmgOptions& options, std::vector<int> field_ids)
    : options_(options) {
  if (A.rows() != A.cols()) throw std::invalid_argument("AMG needs a square matrix");
  if (options.sweeps < 1) throw std::invalid_argument("AMG needs at least one smoothing sweep");
  if (options.sweeps < 1) throw std::invalid_argument("AMG needs at least one smoothing sweep");
  if (block_size < 1 || A.rows() % static_cast<std::size_t>(block_size) != 0) {
    throw std::invalid_argument("matrix size is not a multiple of the block size");
  }
  if (static_cast<std::size_t>(near_nullspace.rows()) != A.rows()) {
    throw std::invalid_argument("near-nullspace rows do not match the matrix");
  }
  Level fine;
  fine.A = A;
  const std::size_t nn = A.rows() / static_cast<std::size_t>(block_size);
  for (std::size_t k = 0; k <= nn; ++k) fine.node_ptr.push_back(k * static_cast<std::size_t>(block_size));
  if (!field_ids.empty() && field_ids.size() != nn) {
    throw std::invalid_argument("one field id per node expected");
  }
  fine.field = std::move(field_ids);
  fine.B = near_nullspace;
  levels_.push_back(std::move(fine));

  while (levels_.back().A.rows() > options_.max_coarse_size &&
         static_cast<int>(levels_.size()) < options_.max_levels) {
    Level& lvl = levels_.back();
    const double theta = levels_.size() == 1 && options_.fine_strength_threshold >= 0.0
                             ? options_.fine_strength_threshold
                             : options_.strength_threshold;
    const auto graph = strength_graph(lvl.A, lvl.node_ptr, lvl.field, theta);
    auto [agg, num_agg] = standard_aggregation(graph);
    if (num_agg == 0 || num_agg + 1 >= lvl.node_ptr.size()) break;  // no coarsening progress
    lvl.num_aggregates = num_agg;
    Tentative t = tentative_prolongator(lvl, agg, num_agg);
    if (t.T.cols() >= lvl.A.rows()) break;

    std::vector<double> dinv = lvl.A.diagonal();
    for (auto& d : dinv) d = 1.0 / d;
    const double rho = dinv_a_spectral_radius(lvl.A, dinv, options_.spectral_radius_iterations);
    lvl.omega_prolongation = 4.0 / (3.0 * rho);
    // P = (I - omega D^{-1} A) T
    CsrMatrix dat = multiply(lvl.A, t.T);
    {
      auto vals = dat.values();
      const auto rp = dat.row_ptr();
      for (std::size_t i = 0; i < dat.rows(); ++i) {
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) vals[k] *= dinv[i];
      }
    }
    lvl.P = add(t.T, 1.0, dat, -lvl.omega_prolongation);

    Level coarse;
    coarse.A = galerkin_product(lvl.P, lvl.A);
    coarse.node_ptr = std::move(t.node_ptr);
    coarse.field = std::move(t.field);
    coarse.B = std::move(t.B_coarse);
    levels_.push_back(std::move(coarse));
  }

  for (std::size_t l = 0; l + 1 < levels_.size(); ++l) setup_smoother(levels_[l]);
  coarse_ = std::make_shared<const Factorization>(levels_.back().A, FactorizationKind::Cholesky);
}

void AmgHierarchy::setup_smoother(Level& lvl) const {
  const std::vector<double> d = lvl.A.diagonal();
  lvl.inv_diag.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw NotPositiveDefinite("non-positive diagonal in AMG level matrix");
    lvl.inv_diag[i] = 1.0 / d[i];
  }
  if (options_.smoother != SmootherKind::BlockJacobi) return;
  const std::size_t nn = lvl.node_ptr.size() - 1;
  lvl.inv_blocks.resize(nn);
  for (std::size_t k = 0; k < nn; ++k) {
    const std::size_t b0 = lvl.node_ptr[k];
    const auto m = static_cast<Eigen::Index>(lvl.node_ptr[k + 1] - b0);
    Eigen::MatrixXd blk(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        blk(i, j) = lvl.A.at(b0 + static_cast<std::size_t>(i), b0 + static_cast<std::size_t>(j));
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(blk);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite("singular or indefinite diagonal block in block Jacobi");
    }
    lvl.inv_blocks[k] = llt.solve(Eigen::MatrixXd::Identity(m, m));
  }
}

double AmgHierarchy::operator_complexity() const {
  double total = 0.0;
  for (const auto& l : levels_) total += static_cast<double>(l.A.nnz());
  return total / static_cast<double>(levels_.front().A.nnz());
}

void AmgHierarchy::smooth(const Level& lvl, std::span<const double> b, std::span<double> x,
                          bool pre) const {
  const CsrMatrix& A = lvl.A;
  const std::size_t n = A.rows();
  const auto rp = A.row_ptr();
  const auto ci = A.col_idx();
  const auto v = A.values();
  switch (options_.smoother) {
    case SmootherKind::PointJacobi: {
      std::vector<double> r(b.begin(), b.end());
      A.multiply_add(x, r, -1.0);
      for (std::size_t i = 0; i < n; ++i) x[i] += options_.jacobi_omega * lvl.inv_diag[i] * r[i];
      break;
    }
    case SmootherKind::BlockJacobi: {
      std::vector<double> r(b.begin(), b.end());
      A.multiply_add(x, r, -1.0);
      const std::size_t nn = lvl.node_ptr.size() - 1;
      for (std::size_t k = 0; k < nn; ++k) {
        const std::size_t b0 = lvl.node_ptr[k];
        const auto m = static_cast<Eigen::Index>(lvl.node_ptr[k + 1] - b0);
        const Eigen::Map<const Eigen::VectorXd> rk(r.data() + b0, m);
        Eigen::Map<Eigen::VectorXd> xk(x.data() + b0, m);
        xk += options_.jacobi_omega * (lvl.inv_blocks[k] * rk);
      }
      break;
    }
    case SmootherKind::PointGaussSeidel: {
      auto relax = [&](std::size_t i) {
        double s = b[i];
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
          if (ci[k] != i) s -= v[k] * x[ci[k]];
        }
        x[i] = s * lvl.inv_diag[i];
      };
      if (pre) {
        for (std::size_t i = 0; i < n; ++i) relax(i);
      } else {
        for (std::size_t i = n; i-- > 0;) relax(i);
      }
      break;
    }
  }
}

void AmgHierarchy::cycle(std::size_t l, std::span<const double> b, std::span<double> x) const {
  const Level& lvl = levels_[l];
  if (l + 1 == levels_.size()) {
    coarse_->solve(b, x);
    return;
  }
  std::fill(x.begin(), x.end(), 0.0);
  for (int k = 0; k < options_.sweeps; ++k) smooth(lvl, b, x, true);
  std::vector<double> r(b.begin(), b.end());
  lvl.A.multiply_add(x, r, -1.0);
  const CsrMatrix& P = lvl.P;
  std::vector<double> bc(P.cols(), 0.0);
  // bc = P^T r
  for (std::size_t i = 0; i < P.rows(); ++i) {
    for (std::size_t k = P.row_ptr()[i]; k < P.row_ptr()[i + 1]; ++k) {
      bc[P.col_idx()[k]] += P.values()[k] * r[i];
    }
  }
  std::vector<double> xc(P.cols(), 0.0);
  cycle(l + 1, bc, xc);
  P.multiply_add(xc, x, 1.0);
  for (int k = 0; k < options_.sweeps; ++k) smooth(lvl, b, x, false);
}

void AmgHierarchy::vcycle(std::span<const double> b, std::span<double> x) const {
  if (b.size() != size() || x.size() != size()) throw std::invalid_argument("V-cycle size mismatch");
  cycle(0, b, x);
}

LinearOperator AmgHierarchy::as_operator() const {
  return [this](std::span<const double> b, std::span<double> x) { vcycle(b, x); };
}

}  // namespace thermoporo
