#include "thermoporo/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace thermoporo {

// ---------------------------------------------------------------------------
// Coefficients

CoefficientField CoefficientField::grid(const std::array<std::array<double, 4>, 4>& rows) {
  CoefficientField f;
  f.constant_ = false;
  for (int r = 0; r < 4; ++r) {
    const int j = 3 - r;
    for (int i = 0; i < 4; ++i) f.values_[static_cast<std::size_t>(4 * j + i)] = rows[r][i];
  }
  return f;
}

double CoefficientField::at(const Point& x) const {
  if (constant_) return values_[0];
  const int i = std::clamp(static_cast<int>(std::floor(4.0 * x.x)), 0, 3);
  const int j = std::clamp(static_cast<int>(std::floor(4.0 * x.y)), 0, 3);
  return subdomain(i, j);
}

double CoefficientField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double CoefficientField::max() const { return *std::max_element(values_.begin(), values_.end()); }

CoefficientField CoefficientField::apply(const CoefficientField& a,
                                         const std::function<double(double)>& f) {
  CoefficientField out;
  out.constant_ = a.constant_;
  for (std::size_t k = 0; k < 16; ++k) out.values_[k] = f(a.values_[k]);
  return out;
}

CoefficientField CoefficientField::apply(const CoefficientField& a, const CoefficientField& b,
                                         const std::function<double(double, double)>& f) {
  CoefficientField out;
  out.constant_ = a.constant_ && b.constant_;
  for (std::size_t k = 0; k < 16; ++k) out.values_[k] = f(a.values_[k], b.values_[k]);
  return out;
}

DerivedCoefficients derive_coefficients(const ParameterSet& p) {
  if (!(p.lambda.min() > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(p.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  DerivedCoefficients d;
  const double dt = p.dt;
  const double alpha = p.alpha, beta = p.beta;
  d.t_K = CoefficientField::apply(p.K, [dt](double k) { return dt * k; });
  d.t_theta = CoefficientField::apply(p.theta, [dt](double t) { return dt * t; });
  d.c_alpha = CoefficientField::apply(
      p.lambda, [&](double l) { return p.c0 + alpha * alpha / l; });
  d.c_alphabeta = CoefficientField::apply(
      p.lambda, [&](double l) { return alpha * beta / l - p.b0; });
  d.c_beta = CoefficientField::apply(p.lambda, [&](double l) { return p.a0 + beta * beta / l; });
  d.inv_lambda = CoefficientField::apply(p.lambda, [](double l) { return 1.0 / l; });
  d.alpha_over_lambda = CoefficientField::apply(p.lambda, [alpha](double l) { return alpha / l; });
  d.beta_over_lambda = CoefficientField::apply(p.lambda, [beta](double l) { return beta / l; });
  d.C_p = p.c0 - p.b0;
  d.C_T = p.a0 - p.b0;
  return d;
}

std::array<double, 2> lame_from_young_poisson(double E, double nu) {
  if (!(E > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("Poisson ratio must lie in [0, 0.5)");
  return {E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))};
}

std::vector<std::string> parameter_warnings(const ParameterSet& p) {
  std::vector<std::string> out;
  auto positive = [&](const char* name, const CoefficientField& c) {
    if (!(c.min() > 0.0)) out.push_back(std::string(name) + " should be strictly positive");
  };
  positive("lambda", p.lambda);
  positive("mu", p.mu);
  positive("K", p.K);
  positive("theta", p.theta);
  const std::pair<const char*, double> nonneg[] = {
      {"alpha", p.alpha}, {"beta", p.beta}, {"a0", p.a0}, {"b0", p.b0}, {"c0", p.c0}};
  for (const auto& [name, v] : nonneg) {
    if (v < 0.0) out.push_back(std::string(name) + " should be non-negative");
  }
  if (p.a0 < p.b0) out.push_back("a0 < b0: the temperature storage term is indefinite");
  if (p.c0 < p.b0) out.push_back("c0 < b0: the pressure storage term is indefinite");
  return out;
}

// ---------------------------------------------------------------------------
// Spaces

SystemSpaces build_system_spaces(int level, Diagonal diagonal) {
  SystemSpaces s;
  s.mesh = std::make_shared<const Mesh>(build_unit_square_mesh(level, diagonal));
  s.V = std::make_shared<const FunctionSpace>(s.mesh, 2, 2);
  s.Q = std::make_shared<const FunctionSpace>(s.mesh, 1, 1);
  s.W = std::make_shared<const FunctionSpace>(s.mesh, 2, 1);
  return s;
}

BlockOffsets block_offsets(const SystemSpaces& s) {
  BlockOffsets o;
  o.u = 0;
  o.xi = s.V->num_dofs();
  o.p = o.xi + s.Q->num_dofs();
  o.T = o.p + s.W->num_dofs();
  o.total = o.T + s.W->num_dofs();
  return o;
}

// ---------------------------------------------------------------------------
// Cell kernels

namespace {

constexpr int kAssemblyDegree = 4;

const QuadratureRule& assembly_rule() {
  static const QuadratureRule rule = quadrature(kAssemblyDegree);
  return rule;
}

const Tabulation& assembly_tabulation(int degree) {
  static const Tabulation p1 = tabulate(1, assembly_rule());
  static const Tabulation p2 = tabulate(2, assembly_rule());
  return degree == 1 ? p1 : p2;
}

/// Physical basis gradients of one space on one cell at every quadrature point.
struct CellBasis {
  const Tabulation* tab = nullptr;
  std::vector<std::vector<std::array<double, 2>>> grads;  // [q][i]

  void reset(const Tabulation& t, const CellGeometry& g) {
    tab = &t;
    grads.resize(t.gradients.size());
    for (std::size_t q = 0; q < t.gradients.size(); ++q) {
      grads[q].resize(static_cast<std::size_t>(t.num_basis));
      for (int i = 0; i < t.num_basis; ++i) grads[q][i] = map_gradient(g, t.gradients[q][i]);
    }
  }
  double value(std::size_t q, int i) const { return tab->values[q][static_cast<std::size_t>(i)]; }
};

void check_same_mesh(const FunctionSpace& a, const FunctionSpace& b) {
  if (!a.same_mesh(b)) throw std::invalid_argument("function spaces live on different meshes");
}

}  // namespace

CsrMatrix assemble_mass(const FunctionSpace& rows, const FunctionSpace& cols,
                        const CoefficientField& c) {
  check_same_mesh(rows, cols);
  if (rows.components() != 1 || cols.components() != 1) {
    throw std::invalid_argument("mass matrices are assembled on scalar spaces");
  }
  const Mesh& mesh = rows.mesh();
  const QuadratureRule& rule = assembly_rule();
  const Tabulation& tr = assembly_tabulation(rows.degree());
  const Tabulation& tc = assembly_tabulation(cols.degree());
  const int nr = tr.num_basis, nc = tc.num_basis;
  std::vector<Triplet> t;
  t.reserve(mesh.num_cells() * static_cast<std::size_t>(nr * nc));
  std::vector<double> local(static_cast<std::size_t>(nr * nc));
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    const double coef = c.at(mesh.centroid(cell)) * g.det;
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = coef * rule.weights[q];
      for (int i = 0; i < nr; ++i) {
        const double vi = tr.values[q][i];
        for (int j = 0; j < nc; ++j) local[i * nc + j] += w * (vi * tc.values[q][j]);
      }
    }
    const auto rn = rows.cell_nodes(cell);
    const auto cn = cols.cell_nodes(cell);
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nc; ++j) t.push_back({rn[i], cn[j], local[i * nc + j]});
    }
  }
  return CsrMatrix::from_triplets(rows.num_dofs(), cols.num_dofs(), std::move(t));
}

CsrMatrix assemble_mass(const FunctionSpace& space, const CoefficientField& c) {
  return assemble_mass(space, space, c);
}

CsrMatrix assemble_stiffness(const FunctionSpace& space, const CoefficientField& c) {
  if (space.components() != 1) throw std::invalid_argument("stiffness needs a scalar space");
  const Mesh& mesh = space.mesh();
  const QuadratureRule& rule = assembly_rule();
  const Tabulation& tab = assembly_tabulation(space.degree());
  const int n = tab.num_basis;
  std::vector<Triplet> t;
  t.reserve(mesh.num_cells() * static_cast<std::size_t>(n * n));
  std::vector<double> local(static_cast<std::size_t>(n * n));
  CellBasis basis;
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    basis.reset(tab, g);
    const double coef = c.at(mesh.centroid(cell)) * g.det;
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = coef * rule.weights[q];
      const auto& gr = basis.grads[q];
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          local[i * n + j] += w * (gr[i][0] * gr[j][0] + gr[i][1] * gr[j][1]);
        }
      }
    }
    const auto nodes = space.cell_nodes(cell);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) t.push_back({nodes[i], nodes[j], local[i * n + j]});
    }
  }
  return CsrMatrix::from_triplets(space.num_dofs(), space.num_dofs(), std::move(t));
}

CsrMatrix assemble_elasticity(const FunctionSpace& V, const CoefficientField& mu) {
  if (V.components() != 2) throw std::invalid_argument("elasticity needs a vector space");
  const Mesh& mesh = V.mesh();
  const QuadratureRule& rule = assembly_rule();
  const Tabulation& tab = assembly_tabulation(V.degree());
  const int n = tab.num_basis;
  const int m = 2 * n;  // local index 2*i + a
  std::vector<Triplet> t;
  t.reserve(mesh.num_cells() * static_cast<std::size_t>(m * m));
  std::vector<double> local(static_cast<std::size_t>(m * m));
  CellBasis basis;
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    basis.reset(tab, g);
    const double coef = 2.0 * mu.at(mesh.centroid(cell)) * g.det;
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = coef * rule.weights[q];
      const auto& gr = basis.grads[q];
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double gg = gr[i][0] * gr[j][0] + gr[i][1] * gr[j][1];
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              // eps(phi_i e_a) : eps(phi_j e_b)
              const double e = 0.5 * ((a == b ? gg : 0.0) + gr[i][b] * gr[j][a]);
              local[(2 * i + a) * m + 2 * j + b] += w * e;
            }
          }
        }
      }
    }
    const auto nodes = V.cell_nodes(cell);
    for (int i = 0; i < m; ++i) {
      const std::size_t gi = V.dof(nodes[i / 2], i % 2);
      for (int j = 0; j < m; ++j) {
        t.push_back({gi, V.dof(nodes[j / 2], j % 2), local[i * m + j]});
      }
    }
  }
  return CsrMatrix::from_triplets(V.num_dofs(), V.num_dofs(), std::move(t));
}

CsrMatrix assemble_divergence(const FunctionSpace& Q, const FunctionSpace& V) {
  check_same_mesh(Q, V);
  if (Q.components() != 1 || V.components() != 2) {
    throw std::invalid_argument("divergence maps a vector space to a scalar space");
  }
  const Mesh& mesh = V.mesh();
  const QuadratureRule& rule = assembly_rule();
  const Tabulation& tq = assembly_tabulation(Q.degree());
  const Tabulation& tv = assembly_tabulation(V.degree());
  const int nq = tq.num_basis, nv = tv.num_basis;
  std::vector<Triplet> t;
  t.reserve(mesh.num_cells() * static_cast<std::size_t>(nq * 2 * nv));
  std::vector<double> local(static_cast<std::size_t>(nq * 2 * nv));
  CellBasis basis;
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    basis.reset(tv, g);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = g.det * rule.weights[q];
      const auto& gr = basis.grads[q];
      for (int i = 0; i < nq; ++i) {
        const double wi = w * tq.values[q][i];
        for (int j = 0; j < nv; ++j) {
          local[i * 2 * nv + 2 * j] += wi * gr[j][0];
          local[i * 2 * nv + 2 * j + 1] += wi * gr[j][1];
        }
      }
    }
    const auto qn = Q.cell_nodes(cell);
    const auto vn = V.cell_nodes(cell);
    for (int i = 0; i < nq; ++i) {
      for (int j = 0; j < 2 * nv; ++j) {
        t.push_back({qn[i], V.dof(vn[j / 2], j % 2), local[i * 2 * nv + j]});
      }
    }
  }
  return CsrMatrix::from_triplets(Q.num_dofs(), V.num_dofs(), std::move(t));
}

std::vector<double> assemble_integrals(const FunctionSpace& space) {
  if (space.components() != 1) throw std::invalid_argument("integrals need a scalar space");
  const Mesh& mesh = space.mesh();
  const QuadratureRule& rule = assembly_rule();
  const Tabulation& tab = assembly_tabulation(space.degree());
  std::vector<double> z(space.num_dofs(), 0.0);
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    const auto nodes = space.cell_nodes(cell);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      for (int i = 0; i < tab.num_basis; ++i) {
        z[nodes[i]] += g.det * rule.weights[q] * tab.values[q][i];
      }
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// Monolithic system

BlockSystem assemble_operator(const SystemSpaces& s, const ParameterSet& p) {
  check_same_mesh(*s.V, *s.Q);
  check_same_mesh(*s.V, *s.W);
  const DerivedCoefficients d = derive_coefficients(p);
  BlockSystem sys;
  sys.offsets = block_offsets(s);
  const BlockOffsets& o = sys.offsets;

  const CsrMatrix auu = assemble_elasticity(*s.V, p.mu);
  const CsrMatrix div = assemble_divergence(*s.Q, *s.V);
  const CsrMatrix mxx = assemble_mass(*s.Q, d.inv_lambda);
  const CsrMatrix mxp = assemble_mass(*s.Q, *s.W, d.alpha_over_lambda);
  const CsrMatrix mxt = assemble_mass(*s.Q, *s.W, d.beta_over_lambda);
  const CsrMatrix app = add(assemble_mass(*s.W, d.c_alpha), 1.0, assemble_stiffness(*s.W, d.t_K), 1.0);
  const CsrMatrix apt = assemble_mass(*s.W, d.c_alphabeta);
  const CsrMatrix att =
      add(assemble_mass(*s.W, d.c_beta), 1.0, assemble_stiffness(*s.W, d.t_theta), 1.0);

  BlockBuilder b(o.total, o.total);
  b.add(o.u, o.u, auu);
  b.add(o.xi, o.u, div, -1.0);
  b.add(o.u, o.xi, div, -1.0, true);
  b.add(o.xi, o.xi, mxx, -1.0);
  b.add(o.xi, o.p, mxp);
  b.add(o.p, o.xi, mxp, 1.0, true);
  b.add(o.xi, o.T, mxt);
  b.add(o.T, o.xi, mxt, 1.0, true);
  b.add(o.p, o.p, app, -1.0);
  b.add(o.p, o.T, apt, -1.0);
  b.add(o.T, o.p, apt, -1.0, true);
  b.add(o.T, o.T, att, -1.0);
  sys.matrix = std::move(b).build();
  sys.rhs.assign(o.total, 0.0);

  for (auto dof : s.V->boundary_dofs()) sys.dirichlet_dofs.push_back(o.u + dof);
  for (auto dof : s.W->boundary_dofs()) sys.dirichlet_dofs.push_back(o.p + dof);
  for (auto dof : s.W->boundary_dofs()) sys.dirichlet_dofs.push_back(o.T + dof);
  return sys;
}

std::vector<double> assemble_rhs(const SystemSpaces& s, const ParameterSet& p,
                                 const StepData& step) {
  const BlockOffsets o = block_offsets(s);
  const DerivedCoefficients d = derive_coefficients(p);
  const Mesh& mesh = *s.mesh;
  const QuadratureRule& rule = assembly_rule();
  const Tabulation& t1 = assembly_tabulation(1);
  const Tabulation& t2 = assembly_tabulation(2);
  const FunctionSpace& V = *s.V;
  const FunctionSpace& Q = *s.Q;
  const FunctionSpace& W = *s.W;
  const bool have_xi = !step.xi_prev.empty();
  const bool have_p = !step.p_prev.empty();
  const bool have_T = !step.T_prev.empty();
  if ((have_xi && step.xi_prev.size() != Q.num_dofs()) ||
      (have_p && step.p_prev.size() != W.num_dofs()) ||
      (have_T && step.T_prev.size() != W.num_dofs())) {
    throw std::invalid_argument("previous state does not match the spaces");
  }

  std::vector<double> rhs(o.total, 0.0);
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    const Point c = mesh.centroid(cell);
    const double ca = d.c_alpha.at(c), cab = d.c_alphabeta.at(c), cb = d.c_beta.at(c);
    const double al = d.alpha_over_lambda.at(c), bl = d.beta_over_lambda.at(c);
    const auto qn = Q.cell_nodes(cell);
    const auto wn = W.cell_nodes(cell);
    const auto vn = V.cell_nodes(cell);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double w = g.det * rule.weights[k];
      const Point x = map_point(g, rule.points[k]);
      double xi = 0.0, pp = 0.0, tp = 0.0;
      if (have_xi) {
        for (int i = 0; i < 3; ++i) xi += t1.values[k][i] * step.xi_prev[qn[i]];
      }
      for (int i = 0; i < 6; ++i) {
        if (have_p) pp += t2.values[k][i] * step.p_prev[wn[i]];
        if (have_T) tp += t2.values[k][i] * step.T_prev[wn[i]];
      }
      const double gp = -p.dt * (step.g ? step.g(x) : 0.0) + al * xi - ca * pp - cab * tp;
      const double gT = -p.dt * (step.H ? step.H(x) : 0.0) + bl * xi - cab * pp - cb * tp;
      std::array<double, 2> f{0.0, 0.0};
      if (step.f) f = step.f(x);
      for (int i = 0; i < 6; ++i) {
        const double phi = w * t2.values[k][i];
        rhs[o.u + V.dof(vn[i], 0)] += phi * f[0];
        rhs[o.u + V.dof(vn[i], 1)] += phi * f[1];
        rhs[o.p + wn[i]] += phi * gp;
        rhs[o.T + wn[i]] += phi * gT;
      }
    }
  }
  return rhs;
}

// ---------------------------------------------------------------------------
// Dirichlet elimination

namespace {

std::vector<double> boundary_vector(const BlockSystem& system, const SystemSpaces& s,
                                    const BoundaryValues& bc) {
  const BlockOffsets& o = system.offsets;
  if ((!bc.u.empty() && bc.u.size() != s.V->num_dofs()) ||
      (!bc.p.empty() && bc.p.size() != s.W->num_dofs()) ||
      (!bc.T.empty() && bc.T.size() != s.W->num_dofs())) {
    throw std::invalid_argument("boundary values do not match the spaces");
  }
  std::vector<double> g;
  g.reserve(system.dirichlet_dofs.size());
  for (auto dof : system.dirichlet_dofs) {
    if (dof < o.xi) {
      g.push_back(bc.u.empty() ? 0.0 : bc.u[dof - o.u]);
    } else if (dof < o.T) {
      g.push_back(bc.p.empty() ? 0.0 : bc.p[dof - o.p]);
    } else {
      g.push_back(bc.T.empty() ? 0.0 : bc.T[dof - o.T]);
    }
  }
  return g;
}

}  // namespace

void apply_dirichlet_rhs(const BlockSystem& system, const SystemSpaces& s,
                         const BoundaryValues& bc, std::span<double> rhs) {
  if (!system.constrained) throw std::logic_error("matrix has not been constrained yet");
  if (rhs.size() != system.offsets.total) throw std::invalid_argument("rhs has wrong size");
  const std::vector<double> g = boundary_vector(system, s, bc);
  system.lifting.multiply_add(g, rhs, -1.0);
  for (std::size_t k = 0; k < g.size(); ++k) rhs[system.dirichlet_dofs[k]] = g[k];
}

void apply_dirichlet(BlockSystem& system, const SystemSpaces& s, const BoundaryValues& bc) {
  if (!system.constrained) {
    CsrMatrix& a = system.matrix;
    std::vector<std::size_t> all(a.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    system.lifting = a.submatrix(all, system.dirichlet_dofs);
    std::vector<char> fixed(a.rows(), 0);
    for (auto dof : system.dirichlet_dofs) fixed[dof] = 1;
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    auto vals = a.values();
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
        if (fixed[i] || fixed[ci[k]]) vals[k] = (i == ci[k]) ? 1.0 : 0.0;
      }
    }
    for (auto dof : system.dirichlet_dofs) {
      if (a.find(dof, dof) == nullptr) throw std::logic_error("boundary dof without diagonal entry");
    }
    system.constrained = true;
  }
  apply_dirichlet_rhs(system, s, bc, system.rhs);
}

std::vector<double> l2_project(const FunctionSpace& space, const ScalarField& field) {
  if (space.components() != 1) throw std::invalid_argument("projection needs a scalar space");
  const Mesh& mesh = space.mesh();
  const QuadratureRule rule = quadrature(6);
  const Tabulation tab = tabulate(space.degree(), rule);
  std::vector<double> b(space.num_dofs(), 0.0);
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    const auto nodes = space.cell_nodes(cell);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double fw = field(map_point(g, rule.points[q])) * g.det * rule.weights[q];
      for (int i = 0; i < tab.num_basis; ++i) b[nodes[i]] += fw * tab.values[q][i];
    }
  }
  const Factorization m = factorize(assemble_mass(space, 1.0));
  return m.solve(b);
}

}  // namespace thermoporo
