// Command line driver for the thermo-poroelasticity experiments.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "thermoporo/experiments.hpp"

using namespace thermoporo;

namespace {

PrecondKind parse_kind(const std::string& s) {
  if (s == "b1") return PrecondKind::B1;
  if (s == "b2") return PrecondKind::B2;
  throw CLI::ValidationError("--precond", "expected b1 or b2");
}

Realization parse_realization(const std::string& s) {
  if (s == "exact") return Realization::Exact;
  if (s == "amg") return Realization::Amg;
  throw CLI::ValidationError("--realization", "expected exact or amg");
}

std::vector<int> parse_level_range(const std::string& s) {
  std::istringstream in("levels=" + s);
  return parse_grid(in).levels;
}

void emit(const std::vector<CsvRecord>& records, const std::string& out, bool no_timing) {
  std::vector<CsvRecord> copy = records;
  if (no_timing) {
    for (auto& r : copy) r.seconds = 0.0;
  }
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    write_csv(f, copy);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermo-poroelasticity solver and preconditioner lab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out;
  bool no_timing = false;
  app.add_option("--out", out, "CSV output path");
  app.add_flag("--no-timing", no_timing, "write 0 in the seconds column");

  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  std::string mms_levels = "1..6";
  double dt = 0.01, tf = 0.1;
  std::string mms_precond = "b1";
  mms->add_option("--levels", mms_levels, "level range L1..L2 or list")->capture_default_str();
  mms->add_option("--dt", dt, "time step")->capture_default_str();
  mms->add_option("--tf", tf, "final time")->capture_default_str();
  mms->add_option("--precond", mms_precond, "b1 or b2")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "parameter robustness sweep");
  std::string grid_path, sweep_preset_name, sweep_precond = "b1", sweep_real = "exact";
  auto* grid_opt = sweep->add_option("--grid", grid_path, "key=value grid file");
  sweep->add_option("--preset", sweep_preset_name, "robust, storage or storage-free")
      ->excludes(grid_opt);
  sweep->add_option("--precond", sweep_precond, "b1 or b2")->capture_default_str();
  sweep->add_option("--realization", sweep_real, "exact or amg")->capture_default_str();

  auto* het = app.add_subcommand("heterog", "heterogeneous coefficient cases");
  std::string het_case = "central-jump:0.4", het_levels = "2..8", het_precond = "b1",
              het_real = "exact";
  het->add_option("--case", het_case, "central-jump:<nu> or checkerboard")->capture_default_str();
  het->add_option("--levels", het_levels, "level range or list")->capture_default_str();
  het->add_option("--precond", het_precond, "b1 or b2")->capture_default_str();
  het->add_option("--realization", het_real, "exact or amg")->capture_default_str();

  auto* study = app.add_subcommand("amg-study", "AMG smoother study on the equal-order block");
  std::string study_levels = "3..5";
  study->add_option("--levels", study_levels, "level range or list")->capture_default_str();

  auto* eig = app.add_subcommand("eig", "extreme eigenvalues of the preconditioned operator");
  int eig_level = 2;
  std::string eig_real = "exact";
  eig->add_option("--level", eig_level, "mesh level")->capture_default_str();
  eig->add_option("--realization", eig_real, "exact or amg")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (mms->parsed()) {
      const auto levels = parse_level_range(mms_levels);
      RunSpec spec;
      spec.dt = dt;
      spec.tf = tf;
      spec.precond = parse_kind(mms_precond);
      const ParameterSet params = example1_parameters();
      const auto rows = convergence_study(levels.front(), levels.back(), spec, params);
      print_convergence(std::cout, rows);
      std::vector<CsvRecord> records;
      bool ok = true;
      for (const auto& r : rows) {
        CsvRecord c;
        c.case_name = "mms";
        c.level = r.level;
        c.h = r.h;
        c.dofs = r.dofs;
        c.params = params;
        c.params.dt = dt;
        c.precond = mms_precond == "b1" ? "B1" : "B2";
        c.realization = "exact";
        c.iters = r.max_iters;
        c.converged = r.converged;
        c.seconds = r.seconds;
        ok = ok && r.converged;
        records.push_back(c);
      }
      emit(records, out, no_timing);
      return ok ? 0 : 1;
    }
    if (sweep->parsed()) {
      SweepGrid grid;
      if (!grid_path.empty()) {
        grid = load_grid(grid_path);
      } else if (!sweep_preset_name.empty()) {
        grid = sweep_preset(sweep_preset_name);
      } else {
        throw std::invalid_argument("sweep needs --grid or --preset");
      }
      const auto records =
          robustness_sweep(grid, parse_kind(sweep_precond), parse_realization(sweep_real));
      print_table(std::cout, records);
      emit(records, out, no_timing);
      return all_converged(records) ? 0 : 1;
    }
    if (het->parsed()) {
      const auto records = heterogeneous_case(het_case, parse_level_range(het_levels),
                                              parse_kind(het_precond), parse_realization(het_real));
      print_table(std::cout, records);
      emit(records, out, no_timing);
      return all_converged(records) ? 0 : 1;
    }
    if (study->parsed()) {
      const ParameterSet base = smoother_study_parameters();
      const auto rows = smoother_study({1e-6, 1e-3, 1.0}, {1e-9, 1e-6, 1e-3, 1.0},
                                       parse_level_range(study_levels),
                                       {SmootherKind::PointJacobi, SmootherKind::BlockJacobi}, base);
      print_smoother_study(std::cout, rows);
      const auto records = smoother_records(rows, base);
      emit(records, out, no_timing);
      return all_converged(records) ? 0 : 1;
    }
    if (eig->parsed()) {
      const Realization real = parse_realization(eig_real);
      const SystemSpaces spaces = build_system_spaces(eig_level);
      std::vector<CsvRecord> records;
      ParameterSet base;
      base.mu = 0.5;
      base.a0 = base.c0 = 2.0;
      base.b0 = base.alpha = base.beta = 1.0;
      std::cout << "extreme |eigenvalues| of B^-1 A on the free dofs, level " << eig_level << "\n";
      for (PrecondKind kind : {PrecondKind::B1, PrecondKind::B2}) {
        for (double lambda : {1.0, 1e6}) {
          for (double theta : {1e-6, 1.0}) {
            for (double K : {1e-9, 1.0}) {
              ParameterSet p = base;
              p.lambda = lambda;
              p.theta = theta;
              p.K = K;
              CsvRecord c;
              c.case_name = "eig";
              c.level = eig_level;
              c.h = spaces.mesh->h_max();
              c.dofs = block_offsets(spaces).total;
              c.params = p;
              c.precond = to_string(kind);
              c.realization = to_string(real);
              const EigenEstimate e = spectral_estimate(spaces, p, kind, real);
              c.converged = e.converged;
              c.lmin_est = e.min_modulus;
              c.lmax_est = e.max_modulus;
              std::cout << to_string(kind) << "  lambda=" << lambda << " theta=" << theta
                        << " K=" << K << "  min=" << e.min_modulus << " max=" << e.max_modulus
                        << " cond=" << e.condition() << (e.converged ? "" : " (not converged)")
                        << "\n";
              records.push_back(c);
            }
          }
        }
      }
      emit(records, out, no_timing);
      return all_converged(records) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
