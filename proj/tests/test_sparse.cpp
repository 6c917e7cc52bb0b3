#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>
#include <sstream>

#include "thermoporo/assembly.hpp"
#include "thermoporo/experiments.hpp"
#include "thermoporo/precond.hpp"
#include "thermoporo/sparse.hpp"

using namespace thermoporo;

namespace {

Eigen::MatrixXd dense(const CsrMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) d(i, a.col_idx()[k]) = a.values()[k];
  return d;
}

CsrMatrix diag(std::vector<double> d) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  return CsrMatrix::from_triplets(d.size(), d.size(), t);
}

Eigen::VectorXd as_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST(Sparse, TripletsSumDuplicatesAndSort) {
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{1, 1, 1.0}, {0, 1, 2.0}, {1, 1, 3.0}, {0, 0, 5.0}});
  EXPECT_EQ(a.nnz(), 3u);
  EXPECT_EQ(a.at(1, 1), 4.0);
  EXPECT_EQ(a.at(0, 1), 2.0);
  EXPECT_EQ(a.at(1, 0), 0.0);
  EXPECT_EQ(a.col_idx()[0], 0u);
  EXPECT_GT(a.symmetry_error(), 0.0);
}

TEST(Sparse, ProductsMatchDense) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Triplet> ta, tp;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j)
      if ((i * 7 + j * 3) % 5 == 0) ta.push_back({i, j, u(rng)});
  for (std::size_t i = 0; i < 12; ++i) tp.push_back({i, i % 4, u(rng)});
  const CsrMatrix a = CsrMatrix::from_triplets(12, 12, ta), p = CsrMatrix::from_triplets(12, 4, tp);
  EXPECT_NEAR((dense(multiply(a, p)) - dense(a) * dense(p)).norm(), 0.0, 1e-13);
  EXPECT_NEAR((dense(add(a, 2.0, a.transpose(), -1.0)) - (2.0 * dense(a) - dense(a).transpose())).norm(),
              0.0, 1e-13);
  const CsrMatrix sym = add(a, 1.0, a.transpose(), 1.0);
  EXPECT_NEAR((dense(galerkin_product(p, sym)) - dense(p).transpose() * dense(sym) * dense(p)).norm(), 0.0,
              1e-13);
}

TEST(Sparse, IdentitySolve) {
  const Factorization f = factorize(CsrMatrix::identity(5));
  const std::vector<double> b{1, 2, 3, 4, 5};
  EXPECT_EQ(f.solve(b), b);
}

TEST(Sparse, TwoByTwoSolve) {
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}});
  for (auto kind : {FactorizationKind::Cholesky, FactorizationKind::Ldlt}) {
    const auto x = factorize(a, kind).solve(std::vector<double>{3, 3});
    EXPECT_NEAR(x[0], 1.0, 1e-14);
    EXPECT_NEAR(x[1], 1.0, 1e-14);
  }
}

TEST(Sparse, CholeskyRejectsIndefinite) {
  EXPECT_THROW(factorize(diag({1.0, -1.0})), NotPositiveDefinite);
  const auto x = factorize(diag({2.0, -1.0}), FactorizationKind::Ldlt).solve(std::vector<double>{2, -1});
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 1.0, 1e-14);
}

TEST(Sparse, FactorizationRoundTripOnOperator) {
  const SystemSpaces s = build_system_spaces(2);
  const CsrMatrix m = assemble_stiffness(*s.W, 1.0);
  const CsrMatrix a = add(m, 1.0, assemble_mass(*s.W, 1.0), 1.0);
  const Factorization f(a, FactorizationKind::Cholesky);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const auto b = random_vector(a.rows(), rng);
    const auto x = f.solve(b);
    std::vector<double> r(b.size());
    a.multiply(x, r);
    axpy(-1.0, b, r);
    EXPECT_LE(norm2(r) / norm2(b), 1e-10);
  }
  // The full operator is indefinite; the LDL^T path still solves it.
  BlockSystem sys = assemble_operator(s, example1_parameters());
  apply_dirichlet(sys, s, {});
  const Factorization g(sys.matrix, FactorizationKind::Ldlt);
  const auto b = random_vector(sys.matrix.rows(), rng);
  std::vector<double> r(b.size());
  sys.matrix.multiply(g.solve(b), r);
  axpy(-1.0, b, r);
  EXPECT_LE(norm2(r) / norm2(b), 1e-10);
}

TEST(Sparse, WoodburyHandExample) {
  const Factorization f = factorize(CsrMatrix::identity(2));
  const DeflatedSolve d(f.as_operator(), {0.5, 0.0});
  EXPECT_NEAR(d.deflation_scalar(), 0.75, 1e-15);
  std::vector<double> x(2);
  d.apply(std::vector<double>{1.0, 0.0}, x);
  EXPECT_NEAR(x[0], 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(x[1], 0.0, 1e-15);
}

TEST(Sparse, WoodburyZeroVectorIsPlainSolve) {
  const CsrMatrix a = diag({2.0, 4.0, 8.0});
  const Factorization f = factorize(a);
  const DeflatedSolve d(f.as_operator(), {0.0, 0.0, 0.0});
  std::vector<double> x(3);
  d.apply(std::vector<double>{2.0, 4.0, 8.0}, x);
  for (double v : x) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Sparse, WoodburySingularDeflation) {
  const Factorization f = factorize(CsrMatrix::identity(2));
  EXPECT_THROW(DeflatedSolve(f.as_operator(), {1.0, 0.0}), SingularDeflation);
}

TEST(Sparse, WoodburyMatchesDenseOnMeanValueBlock) {
  // (1 + 1/lambda) M on the level-1 P1 space minus z z^T, z_i = integral of phi_i.
  for (int level : {1, 2, 3}) {
    const SystemSpaces s = build_system_spaces(level);
    const CsrMatrix a = assemble_mass(*s.Q, 1.0 + 1.0 / 3.0);
    const auto z = assemble_integrals(*s.Q);
    const Factorization f(a, FactorizationKind::Cholesky);
    const DeflatedSolve d(f.as_operator(), z);
    const Eigen::MatrixXd full = dense(a) - as_eigen(z) * as_eigen(z).transpose();
    std::mt19937_64 rng(5);
    const auto b = random_vector(a.rows(), rng);
    const Eigen::VectorXd ref = full.ldlt().solve(as_eigen(b));
    std::vector<double> x(b.size());
    d.apply(b, x);
    EXPECT_LE((as_eigen(x) - ref).norm() / ref.norm(), 1e-10) << "level " << level;
  }
}

TEST(Sparse, WoodburyRecoversInput) {
  const SystemSpaces s = build_system_spaces(3);
  const CsrMatrix a = assemble_mass(*s.Q, 1.5);
  const auto z = assemble_integrals(*s.Q);
  const Factorization f(a, FactorizationKind::Cholesky);
  const DeflatedSolve d(f.as_operator(), z);
  std::mt19937_64 rng(9);
  const auto b = random_vector(a.rows(), rng);
  std::vector<double> x(b.size()), y(b.size());
  d.apply(b, x);
  a.multiply(x, y);
  axpy(-dot(z, x), z, y);
  axpy(-1.0, b, y);
  EXPECT_LE(norm2(y) / norm2(b), 1e-10);
}

TEST(Sparse, LanczosTrivialCases) {
  const CsrMatrix a = diag({1.0, 2.0, 5.0});
  const auto e = lanczos_extreme_eigs(a.as_operator(), CsrMatrix::identity(3).as_operator(), 3, 50, 1e-10);
  EXPECT_TRUE(e.converged);
  EXPECT_NEAR(e.lambda_min, 1.0, 1e-8);
  EXPECT_NEAR(e.lambda_max, 5.0, 1e-8);

  const SystemSpaces s = build_system_spaces(2);
  const CsrMatrix k = add(assemble_stiffness(*s.W, 1.0), 1.0, assemble_mass(*s.W, 1.0), 1.0);
  const Factorization f(k, FactorizationKind::Cholesky);
  const auto g = lanczos_extreme_eigs(k.as_operator(), f.as_operator(), k.rows(), 50, 1e-10);
  EXPECT_NEAR(g.min_modulus, 1.0, 1e-8);
  EXPECT_NEAR(g.max_modulus, 1.0, 1e-8);
}

TEST(Sparse, LanczosIndefiniteBranches) {
  const CsrMatrix a = diag({-4.0, -0.5, 0.25, 1.0, 3.0});
  const auto e = lanczos_extreme_eigs(a.as_operator(), CsrMatrix::identity(5).as_operator(), 5, 50, 1e-10);
  EXPECT_TRUE(e.has_negative);
  EXPECT_TRUE(e.has_positive);
  EXPECT_NEAR(e.lambda_min, -4.0, 1e-8);
  EXPECT_NEAR(e.lambda_max, 3.0, 1e-8);
  EXPECT_NEAR(e.min_modulus, 0.25, 1e-8);
  EXPECT_NEAR(e.max_modulus, 4.0, 1e-8);
  EXPECT_NEAR(e.negative_min_modulus, 0.5, 1e-8);
}

TEST(Sparse, LanczosMatchesDenseGeneralizedEigensolve) {
  const SystemSpaces s = build_system_spaces(2);
  const ParameterSet p = example1_parameters();
  for (PrecondKind kind : {PrecondKind::B1, PrecondKind::B2}) {
    BlockSystem sys = assemble_operator(s, p);
    apply_dirichlet(sys, s, {});
    const BlockPreconditioner b(s, p, kind, Realization::Exact);
    std::vector<std::size_t> free;
    for (std::size_t i = 0, k = 0; i < sys.offsets.total; ++i) {
      if (k < sys.dirichlet_dofs.size() && sys.dirichlet_dofs[k] == i) {
        ++k;
        continue;
      }
      free.push_back(i);
    }
    ASSERT_LE(free.size(), 500u);
    const Eigen::MatrixXd a = dense(sys.matrix.submatrix(free, free));
    const Eigen::VectorXd y = as_eigen(b.rank_one_vector());
    Eigen::VectorXd yf(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) yf[i] = y[free[i]];
    const Eigen::MatrixXd bm = dense(b.sparse_part().submatrix(free, free)) - yf * yf.transpose();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(a, bm);
    const Eigen::VectorXd ev = ges.eigenvalues().cwiseAbs();
    const EigenEstimate e = spectral_estimate(s, p, kind, Realization::Exact, {}, 400, 1e-10);
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.min_modulus / ev.minCoeff(), 1.0, 1e-6);
    EXPECT_NEAR(e.max_modulus / ev.maxCoeff(), 1.0, 1e-6);
  }
}

TEST(Sparse, MatrixMarketHeader) {
  std::ostringstream out;
  write_matrix_market(out, CsrMatrix::identity(3));
  std::istringstream in(out.str());
  std::string banner;
  std::getline(in, banner);
  EXPECT_EQ(banner.rfind("%%MatrixMarket matrix coordinate real general", 0), 0u);
  std::size_t r = 0, c = 0, nz = 0;
  in >> r >> c >> nz;
  EXPECT_EQ(r, 3u);
  EXPECT_EQ(nz, 3u);
}
