#include <gtest/gtest.h>

#include <cmath>

#include "thermoporo/experiments.hpp"
#include "thermoporo/mms.hpp"

using namespace thermoporo;

namespace {

struct Frozen {
  double x, y, t;
  double f0, f1, g, H;
};

// Symbolic differentiation of the closed-form solution (sympy, 20 digits),
// mu=0.5, lambda=3, alpha=3, beta=2, a0=4, b0=0.1, c0=0.3, K=1, theta=2.
constexpr Frozen kFrozen[] = {
    {0.3, 0.7, 0.01, 28.888282095868535394, 21.199115351485744672, -27.432204651261613716,
     8.2103214824584921713},
    {0.125, 0.9, 0.0, 10.389181745227424775, 29.500268107426706606, -20.471174162859655192,
     5.4482330928581943473},
    {0.61, 0.23, 0.1, 24.677467431104896654, 16.305930530123561104, 33.123313042999070399,
     -6.1429441138649075184},
};

}  // namespace

TEST(Mms, ForcingMatchesSymbolicOracle) {
  const MmsCoefficients c;
  const MmsSolution s = MmsSolution::for_coefficients(c);
  for (const Frozen& r : kFrozen) {
    const MmsForcing f = mms_forcing(s, c, r.t, {r.x, r.y});
    EXPECT_NEAR(f.f[0], r.f0, 1e-10 * std::abs(r.f0));
    EXPECT_NEAR(f.f[1], r.f1, 1e-10 * std::abs(r.f1));
    EXPECT_NEAR(f.g, r.g, 1e-10 * std::abs(r.g));
    EXPECT_NEAR(f.H, r.H, 1e-10 * std::abs(r.H));
  }
}

TEST(Mms, GradientsMatchCentralDifferences) {
  const MmsSolution s{3.0, 0.5};
  const double h = 1e-6;
  for (const Frozen& r : kFrozen) {
    const Point x{r.x, r.y};
    const Point xp{r.x + h, r.y}, xm{r.x - h, r.y}, yp{r.x, r.y + h}, ym{r.x, r.y - h};
    const auto gp = s.grad_p(x, r.t), gT = s.grad_T(x, r.t);
    EXPECT_NEAR(gp[0], (s.p(xp, r.t) - s.p(xm, r.t)) / (2 * h), 1e-8);
    EXPECT_NEAR(gp[1], (s.p(yp, r.t) - s.p(ym, r.t)) / (2 * h), 1e-8);
    EXPECT_NEAR(gT[0], (s.T(xp, r.t) - s.T(xm, r.t)) / (2 * h), 1e-8);
    EXPECT_NEAR(gT[1], (s.T(yp, r.t) - s.T(ym, r.t)) / (2 * h), 1e-8);
    const auto gu = s.grad_u(x, r.t);
    EXPECT_NEAR(gu[0][0] + gu[1][1], s.div_u(x, r.t), 1e-14);
  }
}

TEST(Mms, DisplacementVanishesOnBoundary) {
  const MmsSolution s;
  for (double v : {0.0, 0.25, 0.5, 1.0}) {
    for (const Point& x : {Point{v, 0.0}, Point{v, 1.0}, Point{0.0, v}, Point{1.0, v}}) {
      EXPECT_NEAR(s.u(x, 0.0)[0], 0.0, 1e-15);
      EXPECT_NEAR(s.u(x, 0.0)[1], 0.0, 1e-15);
    }
  }
  EXPECT_NEAR(s.p({0.5, 0.0}, 0.0), 3.0, 1e-15);
}

TEST(Mms, PseudoTotalPressureDefinition) {
  const MmsCoefficients c;
  const MmsSolution s = MmsSolution::for_coefficients(c);
  const Point x{0.3, 0.4};
  EXPECT_NEAR(s.xi(x, 0.02, c), -3.0 * s.div_u(x, 0.02) + 3.0 * s.p(x, 0.02) + 2.0 * s.T(x, 0.02), 1e-14);
}

TEST(Mms, ErrorsDecreaseUnderRefinement) {
  RunSpec spec;
  spec.dt = 0.01;
  spec.tf = 0.02;
  const auto rows = convergence_study(1, 3, spec, example1_parameters());
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].converged);
    EXPECT_LT(rows[i].err.u_h1, rows[i - 1].err.u_h1);
    EXPECT_LT(rows[i].err.xi_l2, rows[i - 1].err.xi_l2);
    EXPECT_LT(rows[i].err.p_h1, rows[i - 1].err.p_h1);
    EXPECT_LT(rows[i].err.T_h1, rows[i - 1].err.T_h1);
  }
  EXPECT_GT(rows[2].rate.u_h1, 1.5);
  EXPECT_GT(rows[2].rate.xi_l2, 1.5);
}
