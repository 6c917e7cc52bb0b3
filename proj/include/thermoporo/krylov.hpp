#pragma once

#include <span>
#include <vector>

#include "thermoporo/sparse.hpp"

namespace thermoporo {

struct MinresConfig {
  double rtol = 1e-12;  // on the preconditioned residual norm, relative to the initial one
  int max_iterations = 2000;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  /// Relative preconditioned residual norms; entry 0 is the initial residual (1.0).
  std::vector<double> history;
  double final_relres = 1.0;
  /// ||b - A x||_2 / ||b||_2 after the last iteration.
  double true_relres = 0.0;
  double seconds = 0.0;
};

/// Preconditioned MinRes (Paige-Saunders recurrences) from a zero initial
/// guess. A must be symmetric and binv symmetric positive definite. The
/// iterate is written to x.
SolveReport minres(const LinearOperator& apply_a, const LinearOperator& apply_binv,
                   std::span<const double> b, std::span<double> x, const MinresConfig& config = {});

/// Preconditioned conjugate gradients for SPD systems, zero initial guess,
/// stopping on the relative preconditioned residual.
SolveReport pcg(const LinearOperator& apply_a, const LinearOperator& apply_binv,
                std::span<const double> b, std::span<double> x, double rtol, int max_iterations);

}  // namespace thermoporo
