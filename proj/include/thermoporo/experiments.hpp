#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "thermoporo/assembly.hpp"
#include "thermoporo/krylov.hpp"
#include "thermoporo/mms.hpp"
#include "thermoporo/precond.hpp"

namespace thermoporo {

/// One CSV row. Coefficient columns of heterogeneous fields print as "het".
struct CsvRecord {
  std::string case_name;
  int level = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  ParameterSet params;
  std::string precond;
  std::string realization;
  int iters = 0;
  bool converged = false;
  double final_relres = 0.0;
  double lmin_est = 0.0;  // 0 when no spectral estimate was computed
  double lmax_est = 0.0;
  double seconds = 0.0;
};

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<CsvRecord>& records);
/// Aligned plain-text table of the main columns.
void print_table(std::ostream& out, const std::vector<CsvRecord>& records);
bool all_converged(const std::vector<CsvRecord>& records);

ParameterSet example1_parameters();
MmsCoefficients mms_coefficients(const ParameterSet& p);

// ---------------------------------------------------------------------------
// Time stepping and convergence

struct RunSpec {
  int level = 1;
  double dt = 0.01;
  double tf = 0.1;
  PrecondKind precond = PrecondKind::B1;
  Realization realization = Realization::Exact;
  MinresConfig minres;
};

struct RunResult {
  SystemSpaces spaces;
  std::vector<double> u, xi, p, T;  // final state
  std::vector<SolveReport> reports;
  bool ok = true;
  std::string diagnostic;
};

/// Backward Euler on the manufactured solution from its exact initial state.
/// Operator and preconditioner are built once. A failed solve stops the run.
RunResult backward_euler_run(const RunSpec& spec, const ParameterSet& params,
                             const MmsSolution& solution);

struct ErrorNorms {
  double u_h1 = 0.0;
  double xi_l2 = 0.0;
  double p_h1 = 0.0;
  double T_h1 = 0.0;
};
/// Full H1 and L2 errors against the closed forms at time t (degree-6 rule).
ErrorNorms compute_errors(const RunResult& run, const MmsSolution& s, const MmsCoefficients& c,
                          double t);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  ErrorNorms err;
  ErrorNorms rate;  // log2 ratio to the previous level; zero on the first row
  int max_iters = 0;
  bool converged = true;
  double seconds = 0.0;
};
std::vector<ConvergenceRow> convergence_study(int level_min, int level_max, const RunSpec& base,
                                              const ParameterSet& params);
void print_convergence(std::ostream& out, const std::vector<ConvergenceRow>& rows);

// ---------------------------------------------------------------------------
// Single static solves

struct PointSpec {
  std::string case_name;
  int level = 1;
  ParameterSet params;
  MmsSolution solution;
  MmsCoefficients forcing;  // coefficients used to build the sources
  double source_time = 0.01;
  double boundary_time = 0.01;
  PrecondKind precond = PrecondKind::B1;
  Realization realization = Realization::Exact;
  PrecondOptions options;
  MinresConfig minres;
  bool estimate_spectrum = false;
};

struct PointResult {
  CsvRecord record;
  SolveReport report;
  EigenEstimate spectrum;
  std::string error;  // non-empty when setup or solve threw
};

/// One MinRes solve of the static system with zero previous state.
PointResult solve_point(const PointSpec& spec);

// ---------------------------------------------------------------------------
// Sweeps

/// Cartesian product over the listed values; the first axis varies slowest.
/// Keys: case, levels, and any of lambda mu alpha beta a0 b0 c0 K theta dt.
struct SweepGrid {
  std::string case_name = "sweep";
  std::vector<int> levels{1};
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  ParameterSet base;
};

/// Plain key=value text, '#' comments. Values are comma separated; levels
/// also accepts a range "3..6". "preset=<name>" starts from a preset.
SweepGrid parse_grid(std::istream& in);
SweepGrid load_grid(const std::string& path);
/// "robust" (beta, lambda, theta, K with mu=0.5, c0=a0=2, b0=alpha=1),
/// "storage" (a0, c0 with unit remaining), "storage-free" (a0=b0=c0=0, lambda).
SweepGrid sweep_preset(const std::string& name);
std::vector<ParameterSet> expand(const SweepGrid& grid);

std::vector<CsvRecord> robustness_sweep(const SweepGrid& grid, PrecondKind kind,
                                        Realization realization, const PrecondOptions& options = {});

// ---------------------------------------------------------------------------
// Heterogeneous coefficients

/// "central-jump:<nu>" or "checkerboard". Throws std::invalid_argument otherwise.
ParameterSet heterogeneous_parameters(const std::string& name);
PointSpec heterogeneous_point(const std::string& name, int level, PrecondKind kind,
                              Realization realization);
std::vector<CsvRecord> heterogeneous_case(const std::string& name, const std::vector<int>& levels,
                                          PrecondKind kind, Realization realization,
                                          const PrecondOptions& options = {});

// ---------------------------------------------------------------------------
// Smoother study on the equal-order coupled block

struct SmootherStudyRow {
  double theta = 0.0;
  double K = 0.0;
  int level = 0;
  SmootherKind smoother = SmootherKind::PointJacobi;
  double kappa = 0.0;
  double lmin = 0.0;
  double lmax = 0.0;
  std::size_t dofs = 0;
  std::size_t amg_levels = 0;
  bool converged = false;
};

/// Parameters of the coupling block (mu unused): mu=0.5, c0=a0=2, b0=alpha=1, lambda=beta=1.
ParameterSet smoother_study_parameters();

/// P1 x P1 x P1 inner-product matrix, dofs interleaved as 3*vertex + {xi, p, T}.
/// Dirichlet p and T dofs are replaced by identity rows.
CsrMatrix equal_order_block(int level, const ParameterSet& params);

SmootherStudyRow smoother_study_point(int level, double theta, double K, SmootherKind smoother,
                                      const ParameterSet& base);
std::vector<SmootherStudyRow> smoother_study(const std::vector<double>& thetas,
                                             const std::vector<double>& Ks,
                                             const std::vector<int>& levels,
                                             const std::vector<SmootherKind>& smoothers,
                                             const ParameterSet& base);
void print_smoother_study(std::ostream& out, const std::vector<SmootherStudyRow>& rows);
std::vector<CsvRecord> smoother_records(const std::vector<SmootherStudyRow>& rows,
                                        const ParameterSet& base);

// ---------------------------------------------------------------------------
// Spectral report

/// Extreme eigenvalues of B^{-1} A restricted to the free dofs (the identity
/// rows of the Dirichlet dofs are left out).
EigenEstimate spectral_estimate(const SystemSpaces& s, const ParameterSet& params,
                                PrecondKind kind, Realization realization,
                                const PrecondOptions& options = {}, int max_iters = 400,
                                double tol = 1e-8);

}  // namespace thermoporo
