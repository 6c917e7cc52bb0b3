#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thermoporo/fem.hpp"
#include "thermoporo/mesh.hpp"
#include "thermoporo/sparse.hpp"

namespace thermoporo {

/// Scalar coefficient that is either constant or piecewise constant on the
/// 4x4 partition of the unit square. Grid rows are listed top to bottom, so
/// rows[0] covers 0.75 < y < 1 and rows[3] covers 0 < y < 0.25.
class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(double value) : values_{} { values_.fill(value); }  // NOLINT: implicit on purpose
  static CoefficientField grid(const std::array<std::array<double, 4>, 4>& rows);

  bool is_constant() const { return constant_; }
  double at(const Point& x) const;
  /// Value on subdomain (col i, row j) with j counted from the bottom.
  double subdomain(int i, int j) const { return values_[static_cast<std::size_t>(4 * j + i)]; }
  double min() const;
  double max() const;

  /// Pointwise combinations; the result is constant iff every operand is.
  static CoefficientField apply(const CoefficientField& a, const std::function<double(double)>& f);
  static CoefficientField apply(const CoefficientField& a, const CoefficientField& b,
                                const std::function<double(double, double)>& f);

 private:
  bool constant_ = true;
  std::array<double, 16> values_{};  // index 4*j + i, j from the bottom
};

struct ParameterSet {
  CoefficientField lambda = 1.0;
  CoefficientField mu = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double a0 = 1.0;
  double b0 = 1.0;
  double c0 = 1.0;
  CoefficientField K = 1.0;
  CoefficientField theta = 1.0;
  double dt = 0.01;
};

struct DerivedCoefficients {
  CoefficientField t_K;          // dt K
  CoefficientField t_theta;      // dt theta
  CoefficientField c_alpha;      // c0 + alpha^2 / lambda
  CoefficientField c_alphabeta;  // alpha beta / lambda - b0
  CoefficientField c_beta;       // a0 + beta^2 / lambda
  CoefficientField inv_lambda;
  CoefficientField alpha_over_lambda;
  CoefficientField beta_over_lambda;
  double C_p = 0.0;  // c0 - b0
  double C_T = 0.0;  // a0 - b0
};

/// Throws std::invalid_argument when lambda or dt is not positive.
DerivedCoefficients derive_coefficients(const ParameterSet& p);

/// Lame parameters from Young's modulus and Poisson ratio.
/// Throws std::invalid_argument unless E > 0 and 0 <= nu < 0.5.
std::array<double, 2> lame_from_young_poisson(double E, double nu);

/// Human-readable notes for parameters outside the positivity and storage
/// assumptions of the model. Empty when everything is in range.
std::vector<std::string> parameter_warnings(const ParameterSet& p);

/// Taylor-Hood spaces on one mesh: V vector P2, Q scalar P1, W scalar P2.
struct SystemSpaces {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const FunctionSpace> V;
  std::shared_ptr<const FunctionSpace> Q;
  std::shared_ptr<const FunctionSpace> W;
};
SystemSpaces build_system_spaces(int level, Diagonal diagonal = Diagonal::Right);

/// Offsets of the (u, xi, p, T) blocks in the monolithic vector.
struct BlockOffsets {
  std::size_t u = 0;
  std::size_t xi = 0;
  std::size_t p = 0;
  std::size_t T = 0;
  std::size_t total = 0;

  std::size_t size_u() const { return xi - u; }
  std::size_t size_xi() const { return p - xi; }
  std::size_t size_p() const { return T - p; }
  std::size_t size_T() const { return total - T; }
};
BlockOffsets block_offsets(const SystemSpaces& s);

// Weighted bilinear forms, coefficients evaluated at cell centroids.
CsrMatrix assemble_mass(const FunctionSpace& rows, const FunctionSpace& cols,
                        const CoefficientField& c);
CsrMatrix assemble_mass(const FunctionSpace& space, const CoefficientField& c);
CsrMatrix assemble_stiffness(const FunctionSpace& space, const CoefficientField& c);
/// (2 mu eps(u), eps(v)) on a vector space.
CsrMatrix assemble_elasticity(const FunctionSpace& V, const CoefficientField& mu);
/// Rows Q, columns V: entry (i, j) = (div phi_j, psi_i).
CsrMatrix assemble_divergence(const FunctionSpace& Q, const FunctionSpace& V);
/// z_i = integral of psi_i.
std::vector<double> assemble_integrals(const FunctionSpace& space);

struct BlockSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  BlockOffsets offsets;
  /// Global indices of the Dirichlet dofs (u, p and T boundary dofs), sorted.
  std::vector<std::size_t> dirichlet_dofs;
  /// Columns of the unconstrained matrix at the Dirichlet dofs (total x nb),
  /// kept to lift boundary data into later right-hand sides.
  CsrMatrix lifting;
  bool constrained = false;
};

/// Monolithic symmetric indefinite operator in (u, xi, p, T) ordering.
BlockSystem assemble_operator(const SystemSpaces& s, const ParameterSet& p);

/// Data of one backward Euler step: sources at t_n and the state at t_{n-1}.
struct StepData {
  VectorField f;
  ScalarField g;
  ScalarField H;
  std::span<const double> xi_prev;  // Q coefficients; empty means zero
  std::span<const double> p_prev;   // W coefficients
  std::span<const double> T_prev;   // W coefficients
};

/// Load vector (f, v), 0, -dt (g, q) - (prev, q), -dt (H, S) - (prev, S)
/// with previous-step terms integrated as finite element functions.
std::vector<double> assemble_rhs(const SystemSpaces& s, const ParameterSet& p,
                                 const StepData& step);

/// Boundary data for u, p and T (coefficient vectors on V, W, W; only the
/// boundary entries are read).
struct BoundaryValues {
  std::span<const double> u;
  std::span<const double> p;
  std::span<const double> T;
};

/// Symmetric elimination of the Dirichlet dofs. The first call replaces the
/// boundary rows and columns of the matrix by identity and records the lifting
/// columns; later calls leave the matrix alone. The right-hand side is lifted
/// and its boundary entries set to the boundary values. Empty spans mean zero.
void apply_dirichlet(BlockSystem& system, const SystemSpaces& s, const BoundaryValues& bc);

/// Same as above for a separately assembled right-hand side.
void apply_dirichlet_rhs(const BlockSystem& system, const SystemSpaces& s,
                         const BoundaryValues& bc, std::span<double> rhs);

/// L2 projection of a closed-form field onto a space.
std::vector<double> l2_project(const FunctionSpace& space, const ScalarField& field);

}  // namespace thermoporo
