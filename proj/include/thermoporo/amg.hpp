#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thermoporo/sparse.hpp"

namespace thermoporo {

enum class SmootherKind {
  PointJacobi,
  PointGaussSeidel,  // forward sweep before, backward sweep after the coarse correction
  BlockJacobi,       // nodal blocks
};

std::string to_string(SmootherKind k);

struct AmgOptions {
  double strength_threshold = 0.08;
  /// Finest-level threshold; negative means strength_threshold. A larger value
  /// keeps first-level aggregates small on wide stencils such as P2.
  double fine_strength_threshold = -1.0;
  std::size_t max_coarse_size = 64;
  int max_levels = 25;
  SmootherKind smoother = SmootherKind::PointJacobi;
  double jacobi_omega = 2.0 / 3.0;  // point and block Jacobi damping
  int sweeps = 1;                   // pre- and post-smoothing steps per level
  int spectral_radius_iterations = 10;
};

/// Smoothed-aggregation hierarchy. Unknowns are grouped into nodes of
/// contiguous dofs (block_size per node on the finest level); aggregation works
/// on the node graph whose edge weights are Frobenius norms of the node blocks.
class AmgHierarchy {
 public:
  struct Level {
    CsrMatrix A;
    std::vector<std::size_t> node_ptr;  // node k owns dofs [node_ptr[k], node_ptr[k+1])
    std::vector<int> field;             // per node; nodes of different fields never aggregate
    Eigen::MatrixXd B;                  // near-nullspace, rows = dofs
    CsrMatrix P;                        // prolongation to this level from the next (empty on coarsest)
    std::vector<double> inv_diag;
    std::vector<Eigen::MatrixXd> inv_blocks;
    double omega_prolongation = 0.0;
    std::size_t num_aggregates = 0;
  };

  /// A must be SPD. near_nullspace has one column per candidate vector.
  /// field_ids (one per node, optional) restricts aggregation to equal ids.
  AmgHierarchy(const CsrMatrix& A, const Eigen::MatrixXd& near_nullspace, int block_size,
               const AmgOptions& options = {}, std::vector<int> field_ids = {});

  std::size_t num_levels() const { return levels_.size(); }
  const Level& level(std::size_t l) const { return levels_[l]; }
  std::size_t size() const { return levels_.front().A.rows(); }
  const AmgOptions& options() const { return options_; }
  /// Sum of nonzeros over levels divided by the fine-level nonzeros.
  double operator_complexity() const;

  /// One V(s,s) cycle from a zero initial guess, s = options().sweeps.
  void vcycle(std::span<const double> b, std::span<double> x) const;
  LinearOperator as_operator() const;

 private:
  void setup_smoother(Level& lvl) const;
  void smooth(const Level& lvl, std::span<const double> b, std::span<double> x, bool pre) const;
  void cycle(std::size_t l, std::span<const double> b, std::span<double> x) const;

  AmgOptions options_;
  std::vector<Level> levels_;
  std::shared_ptr<const Factorization> coarse_;
};

/// Node graph strength of connection: node pair (I, J) is strong when
/// ||A_IJ||_F > theta * sqrt(||A_II||_F ||A_JJ||_F). Returned as adjacency lists
/// without self loops; nodes of different fields are never connected.
std::vector<std::vector<std::size_t>> strength_graph(const CsrMatrix& A,
                                                     std::span<const std::size_t> node_ptr,
                                                     std::span<const int> field, double theta);

/// Three-phase standard aggregation. Returns the aggregate id of each node and
/// the number of aggregates. Isolated nodes get id size_t(-1) and stay out of
/// the coarse space; only the smoother acts on them.
std::pair<std::vector<std::size_t>, std::size_t> standard_aggregation(
    const std::vector<std::vector<std::size_t>>& graph);

/// Rigid body modes (two translations, one rotation) for interleaved 2D vector
/// dofs at the given node coordinates.
Eigen::MatrixXd rigid_body_modes(std::span<const double> x, std::span<const double> y);

}  // namespace thermoporo
