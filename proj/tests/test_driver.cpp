#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <sstream>

#include "thermoporo/experiments.hpp"

using namespace thermoporo;

TEST(Driver, ParseGrid) {
  std::istringstream in(
      "# comment\n"
      "case = mine\n"
      "levels = 2..4\n"
      "lambda = 1, 1e3  # trailing\n"
      "K = 1e-9\n"
      "mu = 0.5\n");
  const SweepGrid g = parse_grid(in);
  EXPECT_EQ(g.case_name, "mine");
  EXPECT_EQ(g.levels, (std::vector<int>{2, 3, 4}));
  ASSERT_EQ(g.axes.size(), 3u);
  EXPECT_EQ(g.axes[0].first, "lambda");
  const auto ps = expand(g);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].lambda.max(), 1.0);
  EXPECT_EQ(ps[1].lambda.max(), 1e3);
  EXPECT_EQ(ps[1].K.max(), 1e-9);
}

TEST(Driver, ParseGridErrors) {
  std::istringstream no_eq("lambda 1\n");
  EXPECT_THROW(parse_grid(no_eq), std::invalid_argument);
  std::istringstream bad_key("gamma = 1\n");
  EXPECT_ANY_THROW(parse_grid(bad_key));
  std::istringstream bad_value("lambda = x\n");
  EXPECT_ANY_THROW(parse_grid(bad_value));
}

TEST(Driver, PresetsAndOverrides) {
  std::istringstream in("preset = robust\nlevels = 1\nbeta = 1\n");
  const SweepGrid g = parse_grid(in);
  EXPECT_EQ(g.levels, std::vector<int>{1});
  EXPECT_EQ(expand(g).size(), 36u);
  EXPECT_EQ(expand(sweep_preset("robust")).size(), 108u);
  EXPECT_EQ(expand(sweep_preset("storage")).size(), 9u);
  EXPECT_THROW(sweep_preset("nope"), std::invalid_argument);
}

TEST(Driver, CsvOutput) {
  std::ostringstream out;
  CsvRecord r;
  r.case_name = "x";
  r.params.lambda = heterogeneous_parameters("checkerboard").lambda;
  write_csv(out, {r, r});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find("het"), std::string::npos);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), std::count(kCsvHeader, kCsvHeader + std::strlen(kCsvHeader), ','));
  }
  EXPECT_EQ(rows, 2);
}

TEST(Driver, HeterogeneousCases) {
  EXPECT_THROW(heterogeneous_parameters("other"), std::invalid_argument);
  const ParameterSet p = heterogeneous_parameters("central-jump:0.4");
  EXPECT_FALSE(p.lambda.is_constant());
  EXPECT_THROW(heterogeneous_point("checkerboard", 1, PrecondKind::B1, Realization::Exact),
               std::invalid_argument);
  const auto recs = heterogeneous_case("central-jump:0.4", {2}, PrecondKind::B1, Realization::Exact);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_TRUE(recs[0].converged);
}

TEST(Driver, ZeroDataGivesZeroState) {
  PointSpec spec;
  spec.level = 2;
  spec.params = example1_parameters();
  spec.forcing = mms_coefficients(spec.params);
  spec.solution = MmsSolution::for_coefficients(spec.forcing);
  spec.source_time = spec.boundary_time = 1e3;  // e^{-t} underflows: sources and boundary data vanish
  const PointResult r = solve_point(spec);
  EXPECT_TRUE(r.error.empty());
  EXPECT_TRUE(r.record.converged);
  EXPECT_LE(r.report.iterations, 1);
}

TEST(Driver, SweepRecordsCarryParameters) {
  SweepGrid g;
  g.levels = {1};
  g.axes = {{"lambda", {1.0, 1e6}}};
  const auto recs = robustness_sweep(g, PrecondKind::B2, Realization::Exact);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[1].params.lambda.max(), 1e6);
  EXPECT_EQ(recs[0].precond, "B2");
  EXPECT_TRUE(all_converged(recs));
}
