#include <gtest/gtest.h>

#include <random>

#include "thermoporo/experiments.hpp"
#include "thermoporo/krylov.hpp"

using namespace thermoporo;

namespace {

CsrMatrix diag(std::vector<double> d) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  return CsrMatrix::from_triplets(d.size(), d.size(), t);
}

void expect_monotone(const SolveReport& r) {
  for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_LE(r.history[k], r.history[k - 1] * (1 + 1e-12));
}

}  // namespace

TEST(Krylov, TwoEigenvalues) {
  const CsrMatrix a = diag({2.0, -1.0});
  std::vector<double> x(2);
  const SolveReport r = minres(a.as_operator(), CsrMatrix::identity(2).as_operator(),
                               std::vector<double>{2.0, -1.0}, x);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 2);
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_NEAR(x[1], 1.0, 1e-12);
  EXPECT_EQ(r.history.front(), 1.0);
}

TEST(Krylov, ExactPreconditionerOneIteration) {
  const CsrMatrix a = diag({1.0, 3.0, 7.0, 20.0});
  const Factorization f(a, FactorizationKind::Cholesky);
  std::vector<double> x(4);
  const SolveReport r = minres(a.as_operator(), f.as_operator(), std::vector<double>{1, 1, 1, 1}, x);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
}

TEST(Krylov, ZeroRightHandSide) {
  const CsrMatrix a = diag({1.0, -2.0});
  std::vector<double> x{5.0, 5.0};
  const SolveReport r = minres(a.as_operator(), CsrMatrix::identity(2).as_operator(),
                               std::vector<double>{0.0, 0.0}, x);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(x[0], 0.0);
}

TEST(Krylov, NonConvergenceReportsBestIterate) {
  std::vector<double> d(50);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (i % 2 ? -1.0 : 1.0) * (1.0 + static_cast<double>(i));
  const CsrMatrix a = diag(d);
  std::vector<double> b(50, 1.0), x(50);
  MinresConfig c;
  c.max_iterations = 5;
  const SolveReport r = minres(a.as_operator(), CsrMatrix::identity(50).as_operator(), b, x, c);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_LT(r.final_relres, 1.0);
  expect_monotone(r);
}

TEST(Krylov, FourFieldSolveIsMonotoneAndAccurate) {
  PointSpec spec;
  spec.level = 2;
  spec.params = example1_parameters();
  spec.forcing = mms_coefficients(spec.params);
  spec.solution = MmsSolution::for_coefficients(spec.forcing);
  for (PrecondKind kind : {PrecondKind::B1, PrecondKind::B2}) {
    spec.precond = kind;
    const PointResult res = solve_point(spec);
    ASSERT_TRUE(res.error.empty()) << res.error;
    EXPECT_TRUE(res.report.converged);
    EXPECT_LE(res.report.final_relres, 1e-12);
    EXPECT_LE(res.report.true_relres, 1e-8);
    expect_monotone(res.report);
  }
}

TEST(Krylov, ScalingInvariance) {
  const SystemSpaces s = build_system_spaces(2);
  const ParameterSet p = example1_parameters();
  BlockSystem sys = assemble_operator(s, p);
  apply_dirichlet(sys, s, {});
  const BlockPreconditioner b(s, p, PrecondKind::B1, Realization::Exact);
  std::mt19937_64 rng(12);
  const auto rhs = random_vector(sys.offsets.total, rng);
  std::vector<double> x(rhs.size());
  const SolveReport r1 = minres(sys.matrix.as_operator(), b.as_operator(), rhs, x);

  const double c = 1e3;
  CsrMatrix a2 = sys.matrix;
  a2.scale(c);
  auto binv = b.as_operator();
  LinearOperator binv2 = [&](std::span<const double> in, std::span<double> out) {
    binv(in, out);
    for (double& v : out) v /= c;
  };
  std::vector<double> rhs2 = rhs;
  for (double& v : rhs2) v *= c;
  const SolveReport r2 = minres(a2.as_operator(), binv2, rhs2, x);
  EXPECT_EQ(r1.iterations, r2.iterations);
}

TEST(Krylov, PcgOnSpdSystem) {
  const SystemSpaces s = build_system_spaces(3);
  const CsrMatrix a = add(assemble_stiffness(*s.W, 1.0), 1.0, assemble_mass(*s.W, 1.0), 1.0);
  std::mt19937_64 rng(2);
  const auto b = random_vector(a.rows(), rng);
  std::vector<double> x(b.size());
  const SolveReport r = pcg(a.as_operator(), CsrMatrix::identity(a.rows()).as_operator(), b, x, 1e-10, 2000);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.true_relres, 1e-8);
}
