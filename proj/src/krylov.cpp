#include "thermoporo/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace thermoporo {

namespace {

double true_relative_residual(const LinearOperator& apply_a, std::span<const double> b,
                              std::span<const double> x) {
  std::vector<double> r(b.size());
  apply_a(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const double nb = norm2(b);
  return nb > 0.0 ? norm2(r) / nb : norm2(r);
}

}  // namespace

SolveReport minres(const LinearOperator& apply_a, const LinearOperator& apply_binv,
                   std::span<const double> b, std::span<double> x, const MinresConfig& config) {
  if (!(config.rtol > 0.0)) throw std::invalid_argument("MinRes tolerance must be positive");
  if (x.size() != b.size()) throw std::invalid_argument("MinRes vector size mismatch");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  SolveReport rep;
  std::fill(x.begin(), x.end(), 0.0);

  std::vector<double> r1(b.begin(), b.end()), r2(r1), y(n), v(n), w(n, 0.0), w1(n), w2(n, 0.0);
  apply_binv(r1, y);
  const double beta1_sq = dot(r1, y);
  if (beta1_sq < 0.0) throw NotPositiveDefinite("preconditioner is not positive definite");
  const double beta1 = std::sqrt(beta1_sq);
  rep.history.push_back(1.0);
  if (beta1 == 0.0) {
    rep.converged = true;
    rep.final_relres = 0.0;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
  }

  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  constexpr double kTiny = std::numeric_limits<double>::epsilon();
  for (int itn = 1; itn <= config.max_iterations; ++itn) {
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
    apply_a(v, y);
    if (itn >= 2) axpy(-beta / oldb, r1, y);
    const double alfa = dot(v, y);
    axpy(-alfa / beta, r2, y);
    std::swap(r1, r2);
    r2.assign(y.begin(), y.end());
    apply_binv(r2, y);
    oldb = beta;
    const double beta_sq = dot(r2, y);
    if (beta_sq < 0.0) throw NotPositiveDefinite("preconditioner is not positive definite");
    beta = std::sqrt(beta_sq);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), kTiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    std::swap(w1, w2);
    std::swap(w2, w);
    for (std::size_t i = 0; i < n; ++i) w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
    axpy(phi, w, x);

    const double rel = std::abs(phibar) / beta1;
    rep.history.push_back(rel);
    rep.iterations = itn;
    rep.final_relres = rel;
    if (rel < config.rtol || beta == 0.0) {
      rep.converged = true;
      break;
    }
  }
  rep.true_relres = true_relative_residual(apply_a, b, x);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SolveReport pcg(const LinearOperator& apply_a, const LinearOperator& apply_binv,
                std::span<const double> b, std::span<double> x, double rtol, int max_iterations) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  SolveReport rep;
  std::fill(x.begin(), x.end(), 0.0);
  std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
  apply_binv(r, z);
  double rz = dot(r, z);
  const double rz0 = rz;
  rep.history.push_back(1.0);
  if (rz0 <= 0.0) {
    rep.converged = rz0 == 0.0;
    rep.final_relres = 0.0;
    return rep;
  }
  p = z;
  for (int it = 1; it <= max_iterations; ++it) {
    apply_a(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw NotPositiveDefinite("CG met a non-positive curvature direction");
    const double a = rz / pq;
    axpy(a, p, x);
    axpy(-a, q, r);
    apply_binv(r, z);
    const double rz_new = dot(r, z);
    const double rel = std::sqrt(std::max(rz_new, 0.0) / rz0);
    rep.history.push_back(rel);
    rep.iterations = it;
    rep.final_relres = rel;
    if (rel < rtol) {
      rep.converged = true;
      break;
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  rep.true_relres = true_relative_residual(apply_a, b, x);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace thermoporo
