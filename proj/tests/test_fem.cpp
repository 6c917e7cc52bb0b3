#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "thermoporo/fem.hpp"

using namespace thermoporo;

namespace {

std::shared_ptr<const Mesh> mesh(int level) {
  return std::make_shared<const Mesh>(build_unit_square_mesh(level));
}

double integrate_ref(const QuadratureRule& q, double (*f)(double, double)) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * f(q.points[i].x, q.points[i].y);
  return s;
}

// Integral of x^a y^b over the reference triangle: a! b! / (a + b + 2)!
double monomial_integral(int a, int b) {
  return std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 3);
}

}  // namespace

TEST(Fem, DofCountsLevelOne) {
  const auto m = mesh(1);
  EXPECT_EQ(build_space(m, 2, 1).num_dofs(), 25u);
  EXPECT_EQ(build_space(m, 1, 1).num_dofs(), 9u);
  EXPECT_EQ(build_space(m, 2, 2).num_dofs(), 50u);
}

TEST(Fem, BoundaryDofsLevelOne) {
  const auto m = mesh(1);
  EXPECT_EQ(build_space(m, 1, 1).boundary_dofs().size(), 8u);
  EXPECT_EQ(build_space(m, 2, 1).boundary_dofs().size(), 16u);
  EXPECT_EQ(build_space(m, 2, 2).boundary_dofs().size(), 32u);
}

TEST(Fem, BoundaryFlagsMatchCoordinates) {
  const auto m = mesh(3);
  for (int deg : {1, 2}) {
    const FunctionSpace s = build_space(m, deg, 2);
    for (std::size_t d = 0; d < s.num_dofs(); ++d) {
      const Point& p = s.dof_coordinate(d);
      const bool on = p.x == 0.0 || p.y == 0.0 || p.x == 1.0 || p.y == 1.0;
      EXPECT_EQ(s.is_boundary_dof(d), on);
    }
  }
}

TEST(Fem, P2BoundaryContainsP1Boundary) {
  const auto m = mesh(2);
  const FunctionSpace p1 = build_space(m, 1, 1), p2 = build_space(m, 2, 1);
  std::set<std::pair<double, double>> b2;
  for (std::size_t d : p2.boundary_dofs()) b2.insert({p2.dof_coordinate(d).x, p2.dof_coordinate(d).y});
  for (std::size_t d : p1.boundary_dofs()) {
    EXPECT_TRUE(b2.count({p1.dof_coordinate(d).x, p1.dof_coordinate(d).y}));
  }
}

TEST(Fem, CellMapCoversAllDofs) {
  const auto m = mesh(2);
  const FunctionSpace s = build_space(m, 2, 1);
  std::vector<int> seen(s.num_nodes(), 0);
  for (std::size_t c = 0; c < m->num_cells(); ++c)
    for (std::size_t n : s.cell_nodes(c)) seen[n] = 1;
  for (int v : seen) EXPECT_EQ(v, 1);
}

TEST(Fem, RejectsUnsupportedSpaces) {
  const auto m = mesh(1);
  EXPECT_THROW(build_space(m, 3, 1), std::invalid_argument);
  EXPECT_THROW(build_space(m, 1, 3), std::invalid_argument);
}

TEST(Fem, QuadratureWeightsAndExactness) {
  for (int deg = 0; deg <= 6; ++deg) {
    const QuadratureRule q = quadrature(deg);
    double sum = 0.0;
    for (double w : q.weights) {
      EXPECT_GT(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 0.5, 1e-15);
    for (int a = 0; a <= q.degree; ++a) {
      for (int b = 0; a + b <= q.degree; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
          s += q.weights[i] * std::pow(q.points[i].x, a) * std::pow(q.points[i].y, b);
        EXPECT_NEAR(s, monomial_integral(a, b), 1e-15) << "degree " << deg << " x^" << a << " y^" << b;
      }
    }
  }
  EXPECT_THROW(quadrature(7), std::out_of_range);
}

TEST(Fem, OnePointRule) {
  const QuadratureRule q = quadrature(1);
  ASSERT_EQ(q.size(), 1u);
  EXPECT_DOUBLE_EQ(q.weights[0], 0.5);
  EXPECT_NEAR(q.points[0].x, 1.0 / 3, 1e-15);
  EXPECT_NEAR(q.points[0].y, 1.0 / 3, 1e-15);
}

TEST(Fem, DegreeFourRuleOnX2Y2) {
  EXPECT_NEAR(integrate_ref(quadrature(4), [](double x, double y) { return x * x * y * y; }),
              1.0 / 180, 1e-15);
}

TEST(Fem, PartitionOfUnityAndLagrangeProperty) {
  const auto m = mesh(2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int deg : {1, 2}) {
    const FunctionSpace s = build_space(m, deg, 1);
    for (std::size_t c = 0; c < m->num_cells(); ++c) {
      for (int k = 0; k < 20; ++k) {
        double a = u(rng), b = u(rng);
        if (a + b > 1.0) a = 1.0 - a, b = 1.0 - b;
        const BasisEvaluation e = evaluate_basis(s, c, {a, b});
        double sum = 0.0, gx = 0.0, gy = 0.0;
        for (std::size_t i = 0; i < e.values.size(); ++i) {
          sum += e.values[i];
          gx += e.gradients[i][0];
          gy += e.gradients[i][1];
        }
        EXPECT_NEAR(sum, 1.0, 1e-13);
        EXPECT_NEAR(gx, 0.0, 1e-11);
        EXPECT_NEAR(gy, 0.0, 1e-11);
        if (deg == 1) {
          EXPECT_NEAR(e.values[0], 1.0 - a - b, 1e-14);
          EXPECT_NEAR(e.values[1], a, 1e-14);
          EXPECT_NEAR(e.values[2], b, 1e-14);
        }
      }
    }
    const Point verts[3] = {{0, 0}, {1, 0}, {0, 1}};
    for (int v = 0; v < 3; ++v) {
      const BasisEvaluation e = evaluate_basis(s, 0, verts[v]);
      for (std::size_t i = 0; i < e.values.size(); ++i)
        EXPECT_NEAR(e.values[i], i == static_cast<std::size_t>(v) ? 1.0 : 0.0, 1e-15);
    }
  }
}

TEST(Fem, InterpolationExamples) {
  const auto m = mesh(1);
  auto W = std::make_shared<const FunctionSpace>(build_space(m, 2, 1));
  for (double c : interpolate(W, [](const Point&) { return 1.0; }).coefficients) EXPECT_EQ(c, 1.0);

  const double pi = std::numbers::pi;
  const FieldFunction p =
      interpolate(W, [&](const Point& x) { return 3.0 * std::sin(pi * x.x) * std::cos(pi * x.y); });
  bool found = false;
  for (std::size_t d = 0; d < W->num_dofs(); ++d) {
    if (W->dof_coordinate(d).x == 0.5 && W->dof_coordinate(d).y == 0.0) {
      EXPECT_NEAR(p.coefficients[d], 3.0, 1e-15);
      found = true;
    }
  }
  EXPECT_TRUE(found);

  auto V = std::make_shared<const FunctionSpace>(build_space(m, 2, 2));
  const FieldFunction u = interpolate(V, [&](const Point& x) {
    const double v = std::sin(pi * x.x) * std::sin(pi * x.y);
    return std::array<double, 2>{v, v};
  });
  for (std::size_t d : V->boundary_dofs()) EXPECT_NEAR(u.coefficients[d], 0.0, 1e-15);
}

TEST(Fem, QuadraticInterpolationIsExact) {
  const auto m = mesh(2);
  auto W = std::make_shared<const FunctionSpace>(build_space(m, 2, 1));
  auto f = [](const Point& x) { return 1.0 + 2.0 * x.x - x.y + 3.0 * x.x * x.y - x.y * x.y; };
  const FieldFunction fh = interpolate(W, f);
  const QuadratureRule q = quadrature(4);
  for (std::size_t c = 0; c < m->num_cells(); ++c) {
    const CellGeometry g = m->cell_geometry(c);
    for (const Point& r : q.points) EXPECT_NEAR(fh.value(c, r), f(map_point(g, r)), 1e-13);
  }
}
