#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "thermoporo/mesh.hpp"

namespace thermoporo {

/// Symmetric quadrature on the reference triangle (0,0),(1,0),(0,1).
struct QuadratureRule {
  int degree = 0;
  std::vector<Point> points;
  std::vector<double> weights;  // sum to 1/2

  std::size_t size() const { return points.size(); }
};

/// Smallest tabulated rule exact for polynomials of total degree min_degree.
/// Rules exist up to degree 6; higher requests throw std::out_of_range.
QuadratureRule quadrature(int min_degree);

/// Lagrange shape functions on the reference triangle. Local numbering is
/// vertices 0..2, then (P2) edge midpoints in Mesh::kEdgeVertices order.
int local_basis_size(int degree);
void reference_basis(int degree, const Point& ref, std::span<double> values,
                     std::span<std::array<double, 2>> gradients);

/// Basis values and gradients tabulated at the points of a quadrature rule.
struct Tabulation {
  int degree = 0;
  int num_basis = 0;
  std::vector<std::vector<double>> values;                     // [q][i]
  std::vector<std::vector<std::array<double, 2>>> gradients;   // [q][i], reference
};
Tabulation tabulate(int degree, const QuadratureRule& rule);

inline std::array<double, 2> map_gradient(const CellGeometry& g,
                                          const std::array<double, 2>& ref_grad) {
  const auto& it = g.inverse_transpose;
  return {it[0][0] * ref_grad[0] + it[0][1] * ref_grad[1],
          it[1][0] * ref_grad[0] + it[1][1] * ref_grad[1]};
}

inline Point map_point(const CellGeometry& g, const Point& ref) {
  return {g.jacobian[0][0] * ref.x + g.jacobian[0][1] * ref.y + g.offset[0],
          g.jacobian[1][0] * ref.x + g.jacobian[1][1] * ref.y + g.offset[1]};
}

/// Continuous Lagrange space of degree 1 or 2 with 1 or 2 components.
/// Nodes are the mesh vertices followed (P2) by edge midpoints; vector dofs
/// interleave components per node: dof = components * node + component.
class FunctionSpace {
 public:
  FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree, int components);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int components() const { return components_; }
  std::size_t num_nodes() const { return node_coords_.size(); }
  std::size_t num_dofs() const { return num_nodes() * static_cast<std::size_t>(components_); }
  int nodes_per_cell() const { return local_basis_size(degree_); }

  const Point& node_coordinate(std::size_t node) const { return node_coords_[node]; }
  const Point& dof_coordinate(std::size_t dof) const {
    return node_coords_[dof / static_cast<std::size_t>(components_)];
  }
  /// Scalar node ids of a cell in local basis order.
  std::span<const std::size_t> cell_nodes(std::size_t cell) const {
    const auto k = static_cast<std::size_t>(nodes_per_cell());
    return {cell_nodes_.data() + cell * k, k};
  }
  std::size_t dof(std::size_t node, int component) const {
    return node * static_cast<std::size_t>(components_) + static_cast<std::size_t>(component);
  }

  /// Sorted dofs whose node lies on the boundary of the unit square.
  const std::vector<std::size_t>& boundary_dofs() const { return boundary_dofs_; }
  bool is_boundary_dof(std::size_t dof) const { return boundary_flag_[dof]; }

  bool same_mesh(const FunctionSpace& other) const { return mesh_ == other.mesh_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  int components_;
  std::vector<Point> node_coords_;
  std::vector<std::size_t> cell_nodes_;
  std::vector<std::size_t> boundary_dofs_;
  std::vector<bool> boundary_flag_;
};

/// Throws std::invalid_argument for degree outside {1,2} or components outside {1,2}.
FunctionSpace build_space(std::shared_ptr<const Mesh> mesh, int degree, int components);

struct BasisEvaluation {
  std::vector<double> values;
  std::vector<std::array<double, 2>> gradients;  // physical
};
BasisEvaluation evaluate_basis(const FunctionSpace& space, std::size_t cell, const Point& ref);

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<std::array<double, 2>(const Point&)>;

/// A finite element function: one coefficient per dof of its space.
struct FieldFunction {
  std::shared_ptr<const FunctionSpace> space;
  std::vector<double> coefficients;

  explicit FieldFunction(std::shared_ptr<const FunctionSpace> s)
      : space(std::move(s)), coefficients(space->num_dofs(), 0.0) {}
  FieldFunction(std::shared_ptr<const FunctionSpace> s, std::vector<double> c);

  /// Value of component `comp` at reference point `ref` of `cell`.
  double value(std::size_t cell, const Point& ref, int comp = 0) const;
};

FieldFunction interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarField& field);
FieldFunction interpolate(std::shared_ptr<const FunctionSpace> space, const VectorField& field);

/// Dofs on the boundary; identical to space.boundary_dofs(). Whether they are
/// eliminated is decided by the caller (the L2 pressure space never is).
const std::vector<std::size_t>& boundary_dofs(const FunctionSpace& space);

}  // namespace thermoporo
