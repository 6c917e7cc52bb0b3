#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thermoporo/amg.hpp"
#include "thermoporo/assembly.hpp"
#include "thermoporo/sparse.hpp"

namespace thermoporo {

enum class PrecondKind { B1, B2 };
enum class Realization { Exact, Amg };

std::string to_string(PrecondKind k);
std::string to_string(Realization r);

/// AMG settings for the preconditioner blocks: V(2,2) with symmetric
/// Gauss-Seidel and a stronger finest-level threshold for the P2 stencils.
inline AmgOptions block_amg_options() {
  AmgOptions o;
  o.smoother = SmootherKind::PointGaussSeidel;
  o.sweeps = 2;
  o.fine_strength_threshold = 0.15;
  return o;
}

struct PrecondOptions {
  AmgOptions amg = block_amg_options();
  /// AMG realization only: compute w = A^{-1} z in setup by PCG with the
  /// V-cycle (true) or take w = V(z) from a single cycle (false).
  bool accurate_deflation_vector = true;
  /// xi block (1/(2 mu) + 1/lambda) M with mean-value weight 1/(2 max mu).
  /// When false the unit weight (1 + 1/lambda) M is used regardless of mu.
  bool scale_xi_by_mu = true;
};

/// Riesz-map preconditioner on the (u, xi, p, T) system. B1 couples
/// (xi, p, T) into one block; B2 is block diagonal. Both carry the rank-one
/// mean-value term on xi, handled with a Woodbury correction. Dirichlet dofs
/// are mapped by the identity, matching the constrained operator.
class BlockPreconditioner {
 public:
  BlockPreconditioner(const SystemSpaces& spaces, const ParameterSet& params, PrecondKind kind,
                      Realization realization, const PrecondOptions& options = {});
  ~BlockPreconditioner();
  BlockPreconditioner(BlockPreconditioner&&) noexcept;
  BlockPreconditioner& operator=(BlockPreconditioner&&) noexcept;

  PrecondKind kind() const { return kind_; }
  Realization realization() const { return realization_; }
  std::size_t size() const { return offsets_.total; }

  /// z = B^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;
  LinearOperator as_operator() const;

  /// y = B v using the assembled blocks and the rank-one term.
  void multiply(std::span<const double> v, std::span<double> y) const;
  /// Sparse part of B (without the rank-one term), total x total.
  const CsrMatrix& sparse_part() const { return sparse_; }
  /// Rank-one vector: B = sparse_part() - y y^T.
  const std::vector<double>& rank_one_vector() const { return y_; }

  /// 1 - z^T A^{-1} z of the Woodbury correction.
  double deflation_scalar() const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Number of levels of each AMG hierarchy (empty for the exact realization).
  std::vector<std::size_t> amg_levels() const;

 private:
  struct Impl;
  PrecondKind kind_;
  Realization realization_;
  BlockOffsets offsets_;
  CsrMatrix sparse_;
  std::vector<double> y_;
  std::vector<std::string> warnings_;
  std::unique_ptr<Impl> impl_;
};

/// sqrt(v^T B v) for the preconditioner's own B.
double norm_b(const BlockPreconditioner& b, std::span<const double> v);
/// As norm_b, checking that the preconditioner is of the named kind.
double norm_b1(const BlockPreconditioner& b, std::span<const double> v);
double norm_b2(const BlockPreconditioner& b, std::span<const double> v);

}  // namespace thermoporo
