#include "thermoporo/fem.hpp"

#include <stdexcept>
#include <string>

namespace thermoporo {

namespace {

QuadratureRule make_rule(int degree, std::initializer_list<std::array<double, 3>> rows) {
  QuadratureRule rule;
  rule.degree = degree;
  for (const auto& r : rows) {
    rule.points.push_back({r[0], r[1]});
    rule.weights.push_back(r[2]);
  }
  return rule;
}

// Dunavant rules, weights scaled to the reference area 1/2.
const QuadratureRule& rule_deg1() {
  static const QuadratureRule r = make_rule(1, {{1.0 / 3.0, 1.0 / 3.0, 0.5}});
  return r;
}

const QuadratureRule& rule_deg2() {
  static const QuadratureRule r = make_rule(2, {{1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0},
                                                {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                                                {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}});
  return r;
}

const QuadratureRule& rule_deg4() {
  static const QuadratureRule r = make_rule(
      4, {{0.44594849091596488632, 0.10810301816807022736, 0.11169079483900573285},
          {0.10810301816807022736, 0.44594849091596488632, 0.11169079483900573285},
          {0.44594849091596488632, 0.44594849091596488632, 0.11169079483900573285},
          {0.09157621350977074346, 0.81684757298045851308, 0.054975871827660933819},
          {0.81684757298045851308, 0.09157621350977074346, 0.054975871827660933819},
          {0.09157621350977074346, 0.09157621350977074346, 0.054975871827660933819}});
  return r;
}

const QuadratureRule& rule_deg5() {
  static const QuadratureRule r = make_rule(
      5, {{1.0 / 3.0, 1.0 / 3.0, 0.1125},
          {0.47014206410511508977, 0.059715871789769820459, 0.066197076394253090369},
          {0.059715871789769820459, 0.47014206410511508977, 0.066197076394253090369},
          {0.47014206410511508977, 0.47014206410511508977, 0.066197076394253090369},
          {0.1012865073234563388, 0.7974269853530873224, 0.062969590272413576298},
          {0.7974269853530873224, 0.1012865073234563388, 0.062969590272413576298},
          {0.1012865073234563388, 0.1012865073234563388, 0.062969590272413576298}});
  return r;
}

const QuadratureRule& rule_deg6() {
  static const QuadratureRule r = make_rule(
      6, {{0.24928674517091042129, 0.50142650965817915742, 0.058393137863189683013},
          {0.50142650965817915742, 0.24928674517091042129, 0.058393137863189683013},
          {0.24928674517091042129, 0.24928674517091042129, 0.058393137863189683013},
          {0.06308901449150222834, 0.87382197101699554332, 0.02542245318510340846},
          {0.87382197101699554332, 0.06308901449150222834, 0.02542245318510340846},
          {0.06308901449150222834, 0.06308901449150222834, 0.02542245318510340846},
          {0.053145049844816947353, 0.63650249912139864723, 0.041425537809186787597},
          {0.63650249912139864723, 0.053145049844816947353, 0.041425537809186787597},
          {0.31035245103378440542, 0.63650249912139864723, 0.041425537809186787597},
          {0.63650249912139864723, 0.31035245103378440542, 0.041425537809186787597},
          {0.31035245103378440542, 0.053145049844816947353, 0.041425537809186787597},
          {0.053145049844816947353, 0.31035245103378440542, 0.041425537809186787597}});
  return r;
}

}  // namespace

QuadratureRule quadrature(int min_degree) {
  if (min_degree <= 1) return rule_deg1();
  if (min_degree == 2) return rule_deg2();
  if (min_degree <= 4) return rule_deg4();
  if (min_degree == 5) return rule_deg5();
  if (min_degree == 6) return rule_deg6();
  throw std::out_of_range("no quadrature rule of degree " + std::to_string(min_degree));
}

int local_basis_size(int degree) { return degree == 1 ? 3 : 6; }

void reference_basis(int degree, const Point& ref, std::span<double> values,
                     std::span<std::array<double, 2>> gradients) {
  const std::array<double, 3> lam{1.0 - ref.x - ref.y, ref.x, ref.y};
  constexpr std::array<std::array<double, 2>, 3> dlam{{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
  if (degree == 1) {
    for (int i = 0; i < 3; ++i) {
      values[i] = lam[i];
      gradients[i] = dlam[i];
    }
    return;
  }
  for (int i = 0; i < 3; ++i) {
    values[i] = lam[i] * (2.0 * lam[i] - 1.0);
    const double s = 4.0 * lam[i] - 1.0;
    gradients[i] = {s * dlam[i][0], s * dlam[i][1]};
  }
  for (int k = 0; k < 3; ++k) {
    const int a = Mesh::kEdgeVertices[k][0];
    const int b = Mesh::kEdgeVertices[k][1];
    values[3 + k] = 4.0 * lam[a] * lam[b];
    gradients[3 + k] = {4.0 * (dlam[a][0] * lam[b] + lam[a] * dlam[b][0]),
                        4.0 * (dlam[a][1] * lam[b] + lam[a] * dlam[b][1])};
  }
}

Tabulation tabulate(int degree, const QuadratureRule& rule) {
  Tabulation t;
  t.degree = degree;
  t.num_basis = local_basis_size(degree);
  t.values.assign(rule.size(), std::vector<double>(t.num_basis));
  t.gradients.assign(rule.size(), std::vector<std::array<double, 2>>(t.num_basis));
  for (std::size_t q = 0; q < rule.size(); ++q) {
    reference_basis(degree, rule.points[q], t.values[q], t.gradients[q]);
  }
  return t;
}

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree, int components)
    : mesh_(std::move(mesh)), degree_(degree), components_(components) {
  if (degree != 1 && degree != 2) {
    throw std::invalid_argument("unsupported polynomial degree " + std::to_string(degree));
  }
  if (components != 1 && components != 2) {
    throw std::invalid_argument("unsupported component count " + std::to_string(components));
  }
  const Mesh& m = *mesh_;
  const std::size_t nv = m.num_vertices();
  std::vector<bool> node_boundary;
  for (std::size_t v = 0; v < nv; ++v) {
    node_coords_.push_back(m.vertex(v));
    node_boundary.push_back(m.vertex_on_boundary(v));
  }
  if (degree == 2) {
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      const auto& ed = m.edge(e);
      const Point& a = m.vertex(ed[0]);
      const Point& b = m.vertex(ed[1]);
      node_coords_.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
      node_boundary.push_back(m.edge_on_boundary(e));
    }
  }
  const int k = nodes_per_cell();
  cell_nodes_.reserve(m.num_cells() * static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    for (auto v : m.cell(c)) cell_nodes_.push_back(v);
    if (degree == 2) {
      for (auto e : m.cell_edges(c)) cell_nodes_.push_back(nv + e);
    }
  }
  boundary_flag_.assign(num_dofs(), false);
  for (std::size_t node = 0; node < node_coords_.size(); ++node) {
    if (!node_boundary[node]) continue;
    for (int comp = 0; comp < components_; ++comp) {
      boundary_dofs_.push_back(dof(node, comp));
      boundary_flag_[dof(node, comp)] = true;
    }
  }
}

FunctionSpace build_space(std::shared_ptr<const Mesh> mesh, int degree, int components) {
  return FunctionSpace(std::move(mesh), degree, components);
}

BasisEvaluation evaluate_basis(const FunctionSpace& space, std::size_t cell, const Point& ref) {
  const int k = space.nodes_per_cell();
  BasisEvaluation out;
  out.values.resize(k);
  out.gradients.resize(k);
  reference_basis(space.degree(), ref, out.values, out.gradients);
  const CellGeometry g = space.mesh().cell_geometry(cell);
  for (auto& grad : out.gradients) grad = map_gradient(g, grad);
  return out;
}

FieldFunction::FieldFunction(std::shared_ptr<const FunctionSpace> s, std::vector<double> c)
    : space(std::move(s)), coefficients(std::move(c)) {
  if (coefficients.size() != space->num_dofs()) {
    throw std::invalid_argument("coefficient vector does not match space dimension");
  }
}

double FieldFunction::value(std::size_t cell, const Point& ref, int comp) const {
  std::array<double, 6> phi{};
  std::array<std::array<double, 2>, 6> dphi{};
  const int k = space->nodes_per_cell();
  reference_basis(space->degree(), ref, std::span(phi).first(k), std::span(dphi).first(k));
  const auto nodes = space->cell_nodes(cell);
  double v = 0.0;
  for (int i = 0; i < k; ++i) v += phi[i] * coefficients[space->dof(nodes[i], comp)];
  return v;
}

FieldFunction interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarField& field) {
  if (space->components() != 1) {
    throw std::invalid_argument("scalar field interpolated into a vector space");
  }
  FieldFunction f(space);
  for (std::size_t i = 0; i < space->num_dofs(); ++i) {
    f.coefficients[i] = field(space->dof_coordinate(i));
  }
  return f;
}

FieldFunction interpolate(std::shared_ptr<const FunctionSpace> space, const VectorField& field) {
  if (space->components() != 2) {
    throw std::invalid_argument("vector field interpolated into a scalar space");
  }
  FieldFunction f(space);
  for (std::size_t node = 0; node < space->num_nodes(); ++node) {
    const auto v = field(space->node_coordinate(node));
    f.coefficients[space->dof(node, 0)] = v[0];
    f.coefficients[space->dof(node, 1)] = v[1];
  }
  return f;
}

const std::vector<std::size_t>& boundary_dofs(const FunctionSpace& space) {
  return space.boundary_dofs();
}

}  // namespace thermoporo
