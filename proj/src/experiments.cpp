#include "thermoporo/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace thermoporo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt(const CoefficientField& c) {
  return c.is_constant() ? fmt(c.max()) : std::string("het");
}

double constant_value(const CoefficientField& c, const char* name) {
  if (!c.is_constant()) {
    throw std::invalid_argument(std::string("coefficient ") + name + " must be constant here");
  }
  return c.max();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const int a = std::stoi(s.substr(0, dots));
    const int b = std::stoi(s.substr(dots + 2));
    if (b < a) throw std::invalid_argument("empty level range: " + s);
    for (int l = a; l <= b; ++l) out.push_back(l);
    return out;
  }
  for (const auto& item : split(s, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw std::invalid_argument("no levels given");
  return out;
}

void set_parameter(ParameterSet& p, const std::string& key, double v) {
  if (key == "lambda") p.lambda = v;
  else if (key == "mu") p.mu = v;
  else if (key == "alpha") p.alpha = v;
  else if (key == "beta") p.beta = v;
  else if (key == "a0") p.a0 = v;
  else if (key == "b0") p.b0 = v;
  else if (key == "c0") p.c0 = v;
  else if (key == "K") p.K = v;
  else if (key == "theta") p.theta = v;
  else if (key == "dt") p.dt = v;
  else throw std::invalid_argument("unknown parameter: " + key);
}

std::vector<double> slice(std::span<const double> x, std::size_t off, std::size_t n) {
  return {x.begin() + static_cast<std::ptrdiff_t>(off),
          x.begin() + static_cast<std::ptrdiff_t>(off + n)};
}

/// Static-system pieces shared by single solves and time stepping.
struct Problem {
  SystemSpaces spaces;
  BlockSystem system;
};

Problem build_problem(int level, const ParameterSet& params) {
  Problem pr{build_system_spaces(level), {}};
  pr.system = assemble_operator(pr.spaces, params);
  return pr;
}

/// Sets system.rhs to the step load with Dirichlet data of the manufactured
/// solution at time tb.
void load_step(Problem& pr, const ParameterSet& params, const MmsSolution& sol,
               const MmsCoefficients& forcing, double ts, double tb,
               std::span<const double> xi_prev, std::span<const double> p_prev,
               std::span<const double> T_prev) {
  StepData step;
  step.f = [&](const Point& x) { return mms_forcing(sol, forcing, ts, x).f; };
  step.g = [&](const Point& x) { return mms_forcing(sol, forcing, ts, x).g; };
  step.H = [&](const Point& x) { return mms_forcing(sol, forcing, ts, x).H; };
  step.xi_prev = xi_prev;
  step.p_prev = p_prev;
  step.T_prev = T_prev;
  pr.system.rhs = assemble_rhs(pr.spaces, params, step);
  const auto ub = interpolate(pr.spaces.V, VectorField([&](const Point& x) { return sol.u(x, tb); }));
  const auto pb = interpolate(pr.spaces.W, ScalarField([&](const Point& x) { return sol.p(x, tb); }));
  const auto Tb = interpolate(pr.spaces.W, ScalarField([&](const Point& x) { return sol.T(x, tb); }));
  apply_dirichlet(pr.system, pr.spaces, {ub.coefficients, pb.coefficients, Tb.coefficients});
}

/// Dofs that are not Dirichlet constrained.
std::vector<std::size_t> free_dofs(const BlockSystem& sys) {
  std::vector<char> fixed(sys.offsets.total, 0);
  for (auto d : sys.dirichlet_dofs) fixed[d] = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (!fixed[i]) out.push_back(i);
  }
  return out;
}

EigenEstimate reduced_spectrum(const BlockSystem& sys, const BlockPreconditioner& b, int max_iters,
                               double tol) {
  const auto dofs = free_dofs(sys);
  const CsrMatrix a = sys.matrix.submatrix(dofs, dofs);
  const std::size_t n = sys.offsets.total;
  auto binv = [&](std::span<const double> r, std::span<double> z) {
    std::vector<double> rf(n, 0.0), zf(n);
    for (std::size_t i = 0; i < dofs.size(); ++i) rf[dofs[i]] = r[i];
    b.apply(rf, zf);
    for (std::size_t i = 0; i < dofs.size(); ++i) z[i] = zf[dofs[i]];
  };
  return lanczos_extreme_eigs(a.as_operator(), binv, dofs.size(), max_iters, tol);
}

CsvRecord base_record(const std::string& name, const SystemSpaces& s, const ParameterSet& p) {
  CsvRecord r;
  r.case_name = name;
  r.level = static_cast<int>(s.mesh->level());
  r.h = s.mesh->h_max();
  r.dofs = block_offsets(s).total;
  r.params = p;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

const char* const kCsvHeader =
    "case,level,h,dofs,lambda,mu,alpha,beta,a0,b0,c0,K,theta,dt,precond,realization,iters,"
    "converged,final_relres,lmin_est,lmax_est,seconds";

void write_csv(std::ostream& out, const std::vector<CsvRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    const ParameterSet& p = r.params;
    out << r.case_name << ',' << r.level << ',' << fmt(r.h) << ',' << r.dofs << ',' << fmt(p.lambda)
        << ',' << fmt(p.mu) << ',' << fmt(p.alpha) << ',' << fmt(p.beta) << ',' << fmt(p.a0) << ','
        << fmt(p.b0) << ',' << fmt(p.c0) << ',' << fmt(p.K) << ',' << fmt(p.theta) << ','
        << fmt(p.dt) << ',' << r.precond << ',' << r.realization << ',' << r.iters << ','
        << (r.converged ? 1 : 0) << ',' << fmt(r.final_relres, "%.3e") << ','
        << fmt(r.lmin_est) << ',' << fmt(r.lmax_est) << ',' << fmt(r.seconds, "%.3f") << '\n';
  }
}

void print_table(std::ostream& out, const std::vector<CsvRecord>& records) {
  out << std::left << std::setw(22) << "case" << std::right << std::setw(4) << "l" << std::setw(9)
      << "dofs" << std::setw(9) << "lambda" << std::setw(8) << "beta" << std::setw(8) << "theta"
      << std::setw(8) << "K" << std::setw(7) << "a0" << std::setw(7) << "c0" << std::setw(5) << "B"
      << std::setw(7) << "real" << std::setw(7) << "iters" << std::setw(11) << "relres"
      << std::setw(9) << "sec" << '\n';
  for (const auto& r : records) {
    out << std::left << std::setw(22) << r.case_name << std::right << std::setw(4) << r.level
        << std::setw(9) << r.dofs << std::setw(9) << fmt(r.params.lambda) << std::setw(8)
        << fmt(r.params.beta) << std::setw(8) << fmt(r.params.theta) << std::setw(8)
        << fmt(r.params.K) << std::setw(7) << fmt(r.params.a0) << std::setw(7) << fmt(r.params.c0)
        << std::setw(5) << r.precond << std::setw(7) << r.realization << std::setw(7)
        << (r.converged ? std::to_string(r.iters) : std::string("FAIL")) << std::setw(11)
        << fmt(r.final_relres, "%.2e") << std::setw(9) << fmt(r.seconds, "%.2f") << '\n';
  }
}

bool all_converged(const std::vector<CsvRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const CsvRecord& r) { return r.converged; });
}

ParameterSet example1_parameters() {
  ParameterSet p;
  p.mu = 0.5;
  p.lambda = 3.0;
  p.alpha = 3.0;
  p.beta = 2.0;
  p.a0 = 4.0;
  p.b0 = 0.1;
  p.c0 = 0.3;
  p.K = 1.0;
  p.theta = 2.0;
  p.dt = 0.01;
  return p;
}

MmsCoefficients mms_coefficients(const ParameterSet& p) {
  MmsCoefficients c;
  c.mu = constant_value(p.mu, "mu");
  c.lambda = constant_value(p.lambda, "lambda");
  c.alpha = p.alpha;
  c.beta = p.beta;
  c.a0 = p.a0;
  c.b0 = p.b0;
  c.c0 = p.c0;
  c.K = constant_value(p.K, "K");
  c.theta = constant_value(p.theta, "theta");
  return c;
}

// ---------------------------------------------------------------------------

RunResult backward_euler_run(const RunSpec& spec, const ParameterSet& params,
                             const MmsSolution& solution) {
  if (!(spec.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const double steps_real = spec.tf / spec.dt;
  const long steps = std::lround(steps_real);
  if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real) {
    throw std::invalid_argument("final time must be a positive multiple of the time step");
  }
  ParameterSet p = params;
  p.dt = spec.dt;
  const MmsCoefficients c = mms_coefficients(p);

  Problem pr = build_problem(spec.level, p);
  const BlockOffsets o = pr.system.offsets;
  const BlockPreconditioner b(pr.spaces, p, spec.precond, spec.realization);

  RunResult run;
  run.spaces = pr.spaces;
  run.u = interpolate(pr.spaces.V, VectorField([&](const Point& x) { return solution.u(x, 0.0); }))
              .coefficients;
  run.xi = l2_project(*pr.spaces.Q, [&](const Point& x) { return solution.xi(x, 0.0, c); });
  run.p = interpolate(pr.spaces.W, ScalarField([&](const Point& x) { return solution.p(x, 0.0); }))
              .coefficients;
  run.T = interpolate(pr.spaces.W, ScalarField([&](const Point& x) { return solution.T(x, 0.0); }))
              .coefficients;

  std::vector<double> x(o.total);
  for (long n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * spec.dt;
    load_step(pr, p, solution, c, t, t, run.xi, run.p, run.T);
    SolveReport rep = minres(pr.system.matrix.as_operator(), b.as_operator(), pr.system.rhs, x,
                             spec.minres);
    const bool ok = rep.converged;
    run.reports.push_back(std::move(rep));
    if (!ok) {
      run.ok = false;
      run.diagnostic = "MinRes did not converge at step " + std::to_string(n) + " (t = " +
                       fmt(t) + ", relres " + fmt(run.reports.back().final_relres, "%.3e") + ")";
      break;
    }
    run.u = slice(x, o.u, o.size_u());
    run.xi = slice(x, o.xi, o.size_xi());
    run.p = slice(x, o.p, o.size_p());
    run.T = slice(x, o.T, o.size_T());
  }
  return run;
}

ErrorNorms compute_errors(const RunResult& run, const MmsSolution& s, const MmsCoefficients& c,
                          double t) {
  const FunctionSpace& V = *run.spaces.V;
  const FunctionSpace& Q = *run.spaces.Q;
  const FunctionSpace& W = *run.spaces.W;
  const Mesh& mesh = *run.spaces.mesh;
  const QuadratureRule rule = quadrature(6);
  const Tabulation t2 = tabulate(2, rule);
  const Tabulation t1 = tabulate(1, rule);

  double eu = 0.0, exi = 0.0, ep = 0.0, eT = 0.0;
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    const auto vn = V.cell_nodes(cell);
    const auto qn = Q.cell_nodes(cell);
    const auto wn = W.cell_nodes(cell);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point x = map_point(g, rule.points[q]);
      const double w = g.det * rule.weights[q];
      double uh[2] = {0.0, 0.0}, guh[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
      double ph = 0.0, gph[2] = {0.0, 0.0}, Th = 0.0, gTh[2] = {0.0, 0.0};
      for (int i = 0; i < t2.num_basis; ++i) {
        const double phi = t2.values[q][i];
        const auto gr = map_gradient(g, t2.gradients[q][i]);
        for (int a = 0; a < 2; ++a) {
          const double cu = run.u[V.dof(vn[i], a)];
          uh[a] += cu * phi;
          guh[a][0] += cu * gr[0];
          guh[a][1] += cu * gr[1];
        }
        const double cp = run.p[wn[i]], cT = run.T[wn[i]];
        ph += cp * phi;
        Th += cT * phi;
        for (int d = 0; d < 2; ++d) {
          gph[d] += cp * gr[d];
          gTh[d] += cT * gr[d];
        }
      }
      double xih = 0.0;
      for (int i = 0; i < t1.num_basis; ++i) xih += run.xi[qn[i]] * t1.values[q][i];

      const auto ue = s.u(x, t);
      const auto gue = s.grad_u(x, t);
      const auto gpe = s.grad_p(x, t);
      const auto gTe = s.grad_T(x, t);
      double du = 0.0;
      for (int a = 0; a < 2; ++a) {
        du += std::pow(ue[a] - uh[a], 2);
        for (int d = 0; d < 2; ++d) du += std::pow(gue[a][d] - guh[a][d], 2);
      }
      double dp = std::pow(s.p(x, t) - ph, 2), dT = std::pow(s.T(x, t) - Th, 2);
      for (int d = 0; d < 2; ++d) {
        dp += std::pow(gpe[d] - gph[d], 2);
        dT += std::pow(gTe[d] - gTh[d], 2);
      }
      eu += w * du;
      ep += w * dp;
      eT += w * dT;
      exi += w * std::pow(s.xi(x, t, c) - xih, 2);
    }
  }
  return {std::sqrt(eu), std::sqrt(exi), std::sqrt(ep), std::sqrt(eT)};
}

std::vector<ConvergenceRow> convergence_study(int level_min, int level_max, const RunSpec& base,
                                              const ParameterSet& params) {
  const MmsCoefficients c = mms_coefficients(params);
  const MmsSolution sol = MmsSolution::for_coefficients(c);
  std::vector<ConvergenceRow> rows;
  for (int l = level_min; l <= level_max; ++l) {
    const auto t0 = Clock::now();
    RunSpec spec = base;
    spec.level = l;
    const RunResult run = backward_euler_run(spec, params, sol);
    ConvergenceRow row;
    row.level = l;
    row.h = run.spaces.mesh->h_max();
    row.dofs = block_offsets(run.spaces).total;
    row.converged = run.ok;
    for (const auto& r : run.reports) row.max_iters = std::max(row.max_iters, r.iterations);
    row.err = compute_errors(run, sol, c, spec.tf);
    if (!rows.empty()) {
      const ErrorNorms& e0 = rows.back().err;
      row.rate = {std::log2(e0.u_h1 / row.err.u_h1), std::log2(e0.xi_l2 / row.err.xi_l2),
                  std::log2(e0.p_h1 / row.err.p_h1), std::log2(e0.T_h1 / row.err.T_h1)};
    }
    row.seconds = seconds_since(t0);
    rows.push_back(row);
  }
  return rows;
}

void print_convergence(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << std::setw(3) << "l" << std::setw(11) << "h" << std::setw(9) << "dofs" << std::setw(18)
      << "|u-uh|_1" << std::setw(18) << "|xi-xih|_0" << std::setw(18) << "|p-ph|_1" << std::setw(18)
      << "|T-Th|_1" << std::setw(7) << "iters" << std::setw(9) << "sec" << '\n';
  auto cell = [](double e, double r, bool first) {
    return fmt(e, "%.5g") + (first ? std::string("       ") : " (" + fmt(r, "%.2f") + ")");
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool first = i == 0;
    out << std::setw(3) << r.level << std::setw(11) << fmt(r.h) << std::setw(9) << r.dofs
        << std::setw(18) << cell(r.err.u_h1, r.rate.u_h1, first) << std::setw(18)
        << cell(r.err.xi_l2, r.rate.xi_l2, first) << std::setw(18)
        << cell(r.err.p_h1, r.rate.p_h1, first) << std::setw(18)
        << cell(r.err.T_h1, r.rate.T_h1, first) << std::setw(7)
        << (r.converged ? std::to_string(r.max_iters) : std::string("FAIL")) << std::setw(9)
        << fmt(r.seconds, "%.2f") << '\n';
  }
}

// ---------------------------------------------------------------------------

PointResult solve_point(const PointSpec& spec) {
  PointResult res;
  const auto t0 = Clock::now();
  try {
    Problem pr = build_problem(spec.level, spec.params);
    res.record = base_record(spec.case_name, pr.spaces, spec.params);
    res.record.precond = to_string(spec.precond);
    res.record.realization = to_string(spec.realization);
    load_step(pr, spec.params, spec.solution, spec.forcing, spec.source_time, spec.boundary_time,
              {}, {}, {});
    const BlockPreconditioner b(pr.spaces, spec.params, spec.precond, spec.realization,
                                spec.options);
    std::vector<double> x(pr.system.offsets.total);
    res.report = minres(pr.system.matrix.as_operator(), b.as_operator(), pr.system.rhs, x,
                        spec.minres);
    res.record.iters = res.report.iterations;
    res.record.converged = res.report.converged;
    res.record.final_relres = res.report.final_relres;
    if (spec.estimate_spectrum) {
      res.spectrum = reduced_spectrum(pr.system, b, 400, 1e-8);
      res.record.lmin_est = res.spectrum.min_modulus;
      res.record.lmax_est = res.spectrum.max_modulus;
    }
  } catch (const std::exception& e) {
    res.error = e.what();
    res.record.case_name = spec.case_name;
    res.record.level = spec.level;
    res.record.params = spec.params;
    res.record.precond = to_string(spec.precond);
    res.record.realization = to_string(spec.realization);
    res.record.converged = false;
  }
  res.record.seconds = seconds_since(t0);
  return res;
}

// ---------------------------------------------------------------------------

SweepGrid sweep_preset(const std::string& name) {
  SweepGrid g;
  g.case_name = name;
  if (name == "robust") {
    g.base.mu = 0.5;
    g.base.c0 = 2.0;
    g.base.a0 = 2.0;
    g.base.b0 = 1.0;
    g.base.alpha = 1.0;
    g.levels = {1, 4};
    g.axes = {{"beta", {1e-4, 1e-2, 1.0}},
              {"lambda", {1.0, 1e3, 1e6}},
              {"theta", {1e-6, 1e-3, 1.0}},
              {"K", {1e-9, 1e-6, 1e-3, 1.0}}};
  } else if (name == "storage") {
    g.levels = {3, 4, 5, 6};
    g.axes = {{"a0", {1e1, 1e3, 1e9}}, {"c0", {1e1, 1e3, 1e9}}};
  } else if (name == "storage-free") {
    g.base.a0 = 0.0;
    g.base.b0 = 0.0;
    g.base.c0 = 0.0;
    g.levels = {3, 4, 5, 6};
    g.axes = {{"lambda", {1e6, 1e3, 1.0}}};
  } else {
    throw std::invalid_argument("unknown sweep preset: " + name);
  }
  return g;
}

SweepGrid parse_grid(std::istream& in) {
  SweepGrid g;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "preset") {
      const std::string name = g.case_name;
      g = sweep_preset(value);
      if (name != "sweep") g.case_name = name;
    } else if (key == "case") {
      g.case_name = value;
    } else if (key == "levels") {
      g.levels = parse_levels(value);
    } else {
      std::vector<double> values;
      for (const auto& item : split(value, ',')) values.push_back(parse_double(item));
      if (values.empty()) throw std::invalid_argument("no values for " + key);
      ParameterSet probe;
      set_parameter(probe, key, values.front());  // validates the key
      auto it = std::find_if(g.axes.begin(), g.axes.end(),
                             [&](const auto& a) { return a.first == key; });
      if (it != g.axes.end()) {
        it->second = std::move(values);
      } else {
        g.axes.emplace_back(key, std::move(values));
      }
    }
  }
  return g;
}

SweepGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid file " + path);
  return parse_grid(in);
}

std::vector<ParameterSet> expand(const SweepGrid& grid) {
  std::vector<ParameterSet> out{grid.base};
  for (const auto& [key, values] : grid.axes) {
    std::vector<ParameterSet> next;
    for (const auto& p : out) {
      for (double v : values) {
        ParameterSet q = p;
        set_parameter(q, key, v);
        next.push_back(q);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<CsvRecord> robustness_sweep(const SweepGrid& grid, PrecondKind kind,
                                        Realization realization, const PrecondOptions& options) {
  std::vector<CsvRecord> out;
  for (const auto& p : expand(grid)) {
    const MmsCoefficients c = mms_coefficients(p);
    for (int level : grid.levels) {
      PointSpec spec;
      spec.case_name = grid.case_name;
      spec.level = level;
      spec.params = p;
      spec.solution = MmsSolution::for_coefficients(c);
      spec.forcing = c;
      spec.source_time = p.dt;
      spec.boundary_time = p.dt;
      spec.precond = kind;
      spec.realization = realization;
      spec.options = options;
      out.push_back(solve_point(spec).record);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ParameterSet heterogeneous_parameters(const std::string& name) {
  using Rows = std::array<std::array<double, 4>, 4>;
  constexpr double kE = 6000.0;
  Rows nu{};
  ParameterSet p;
  p.alpha = 3.0;
  p.c0 = 0.3;
  p.beta = 2.0;
  p.a0 = 4.0;
  p.b0 = 0.1;
  p.dt = 0.01;
  const std::string prefix = "central-jump:";
  if (name.rfind(prefix, 0) == 0) {
    const double nui = parse_double(name.substr(prefix.size()));
    for (auto& row : nu) row.fill(0.3);
    for (int r = 1; r <= 2; ++r) {
      for (int col = 1; col <= 2; ++col) nu[r][col] = nui;
    }
    p.K = 1.0;
    p.theta = 1.0;
  } else if (name == "checkerboard") {
    nu = Rows{{{0.49999, 0.37, 0.499, 0.41},
               {0.3, 0.49999, 0.33, 0.4999},
               {0.49999, 0.29, 0.499, 0.3},
               {0.2, 0.4999, 0.31, 0.499}}};
    p.K = CoefficientField::grid(Rows{{{100, 0.1, 1, 0.001},
                                       {0.01, 1, 10000, 0.1},
                                       {0.09, 0.29, 1000, 0.3},
                                       {0.001, 0.9, 0.1, 0.01}}});
    p.theta = CoefficientField::grid(Rows{{{10, 0.01, 0.1, 10},
                                           {0.1, 10000, 10, 0.1},
                                           {0.9, 0.09, 10, 0.3},
                                           {0.1, 0.09, 10, 200}}});
  } else {
    throw std::invalid_argument("unknown heterogeneous case: " + name);
  }
  Rows lam{}, mu{};
  for (int r = 0; r < 4; ++r) {
    for (int col = 0; col < 4; ++col) {
      const auto lm = lame_from_young_poisson(kE, nu[r][col]);
      lam[r][col] = lm[0];
      mu[r][col] = lm[1];
    }
  }
  p.lambda = CoefficientField::grid(lam);
  p.mu = CoefficientField::grid(mu);
  return p;
}

PointSpec heterogeneous_point(const std::string& name, int level, PrecondKind kind,
                              Realization realization) {
  if (level < 2) throw std::invalid_argument("heterogeneous cases need level >= 2");
  PointSpec spec;
  spec.case_name = name;
  spec.level = level;
  spec.params = heterogeneous_parameters(name);
  MmsCoefficients c;
  c.mu = c.lambda = c.K = c.theta = 1.0;
  c.alpha = spec.params.alpha;
  c.beta = spec.params.beta;
  c.a0 = spec.params.a0;
  c.b0 = spec.params.b0;
  c.c0 = spec.params.c0;
  spec.forcing = c;
  spec.solution = MmsSolution::for_coefficients(c);
  spec.source_time = 0.0;
  spec.boundary_time = 0.0;
  spec.precond = kind;
  spec.realization = realization;
  return spec;
}

std::vector<CsvRecord> heterogeneous_case(const std::string& name, const std::vector<int>& levels,
                                          PrecondKind kind, Realization realization,
                                          const PrecondOptions& options) {
  std::vector<CsvRecord> out;
  for (int level : levels) {
    PointSpec spec = heterogeneous_point(name, level, kind, realization);
    spec.options = options;
    out.push_back(solve_point(spec).record);
  }
  return out;
}

// ---------------------------------------------------------------------------

ParameterSet smoother_study_parameters() {
  ParameterSet p;
  p.mu = 0.5;
  p.c0 = 2.0;
  p.a0 = 2.0;
  p.b0 = 1.0;
  p.alpha = 1.0;
  p.lambda = 1.0;
  p.beta = 1.0;
  p.dt = 0.01;
  return p;
}

CsrMatrix equal_order_block(int level, const ParameterSet& params) {
  const auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(level));
  const FunctionSpace S(mesh, 1, 1);
  const DerivedCoefficients d = derive_coefficients(params);
  const CoefficientField xi_c = CoefficientField::apply(
      d.inv_lambda, params.mu, [](double il, double m) { return 0.5 / m + il; });
  const CsrMatrix blocks[3][3] = {
      {assemble_mass(S, xi_c), assemble_mass(S, d.alpha_over_lambda),
       assemble_mass(S, d.beta_over_lambda)},
      {CsrMatrix{}, add(assemble_mass(S, d.c_alpha), 1.0, assemble_stiffness(S, d.t_K), 1.0),
       assemble_mass(S, d.c_alphabeta)},
      {CsrMatrix{}, CsrMatrix{},
       add(assemble_mass(S, d.c_beta), 1.0, assemble_stiffness(S, d.t_theta), 1.0)}};
  const double sign[3][3] = {{1, -1, -1}, {-1, 1, 1}, {-1, 1, 1}};
  const std::size_t n = S.num_dofs();
  std::vector<char> fixed(3 * n, 0);
  for (auto v : S.boundary_dofs()) {
    fixed[3 * v + 1] = 1;
    fixed[3 * v + 2] = 1;
  }
  std::vector<Triplet> t;
  for (int a = 0; a < 3; ++a) {
    for (int b = a; b < 3; ++b) {
      const CsrMatrix& m = blocks[a][b];
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
          const std::size_t r = 3 * i + static_cast<std::size_t>(a);
          const std::size_t c = 3 * m.col_idx()[k] + static_cast<std::size_t>(b);
          if (fixed[r] || fixed[c]) continue;
          const double v = sign[a][b] * m.values()[k];
          t.push_back({r, c, v});
          if (a != b) t.push_back({c, r, v});
        }
      }
    }
  }
  for (std::size_t i = 0; i < 3 * n; ++i) {
    if (fixed[i]) t.push_back({i, i, 1.0});
  }
  return CsrMatrix::from_triplets(3 * n, 3 * n, std::move(t));
}

SmootherStudyRow smoother_study_point(int level, double theta, double K, SmootherKind smoother,
                                      const ParameterSet& base) {
  ParameterSet p = base;
  p.theta = theta;
  p.K = K;
  const CsrMatrix a = equal_order_block(level, p);
  const std::size_t n = a.rows();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i % 3)) = 1.0;
  AmgOptions opt;
  opt.smoother = smoother;
  const AmgHierarchy amg(a, B, 3, opt);
  const EigenEstimate e = lanczos_extreme_eigs(a.as_operator(), amg.as_operator(), n, 500, 1e-4);
  SmootherStudyRow row;
  row.theta = theta;
  row.K = K;
  row.level = level;
  row.smoother = smoother;
  row.lmin = e.lambda_min;
  row.lmax = e.lambda_max;
  row.kappa = e.lambda_max / e.lambda_min;
  row.dofs = n;
  row.amg_levels = amg.num_levels();
  row.converged = e.converged && e.lambda_min > 0.0;
  return row;
}

std::vector<SmootherStudyRow> smoother_study(const std::vector<double>& thetas,
                                             const std::vector<double>& Ks,
                                             const std::vector<int>& levels,
                                             const std::vector<SmootherKind>& smoothers,
                                             const ParameterSet& base) {
  std::vector<SmootherStudyRow> rows;
  for (double theta : thetas) {
    for (double K : Ks) {
      for (auto sm : smoothers) {
        for (int l : levels) rows.push_back(smoother_study_point(l, theta, K, sm, base));
      }
    }
  }
  return rows;
}

void print_smoother_study(std::ostream& out, const std::vector<SmootherStudyRow>& rows) {
  out << std::setw(9) << "theta" << std::setw(9) << "K" << std::setw(20) << "smoother"
      << std::setw(4) << "l" << std::setw(9) << "dofs" << std::setw(7) << "lev" << std::setw(11)
      << "lmin" << std::setw(11) << "lmax" << std::setw(9) << "kappa" << '\n';
  for (const auto& r : rows) {
    out << std::setw(9) << fmt(r.theta) << std::setw(9) << fmt(r.K) << std::setw(20)
        << to_string(r.smoother) << std::setw(4) << r.level << std::setw(9) << r.dofs
        << std::setw(7) << r.amg_levels << std::setw(11) << fmt(r.lmin, "%.4f") << std::setw(11)
        << fmt(r.lmax, "%.4f") << std::setw(9) << fmt(r.kappa, "%.2f")
        << (r.converged ? "" : "  (not converged)") << '\n';
  }
}

std::vector<CsvRecord> smoother_records(const std::vector<SmootherStudyRow>& rows,
                                        const ParameterSet& base) {
  std::vector<CsvRecord> out;
  for (const auto& r : rows) {
    CsvRecord c;
    c.case_name = "amg3x3";
    c.level = r.level;
    c.h = std::sqrt(2.0) / std::pow(2.0, r.level);
    c.dofs = r.dofs;
    c.params = base;
    c.params.theta = r.theta;
    c.params.K = r.K;
    c.precond = to_string(r.smoother);
    c.realization = "amg";
    c.converged = r.converged;
    c.lmin_est = r.lmin;
    c.lmax_est = r.lmax;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------

EigenEstimate spectral_estimate(const SystemSpaces& s, const ParameterSet& params, PrecondKind kind,
                                Realization realization, const PrecondOptions& options,
                                int max_iters, double tol) {
  BlockSystem sys = assemble_operator(s, params);
  sys.rhs.assign(sys.offsets.total, 0.0);
  apply_dirichlet(sys, s, {});
  const BlockPreconditioner b(s, params, kind, realization, options);
  return reduced_spectrum(sys, b, max_iters, tol);
}

}  // namespace thermoporo
