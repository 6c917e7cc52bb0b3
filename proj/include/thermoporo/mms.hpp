#pragma once

#include <array>

#include "thermoporo/mesh.hpp"

namespace thermoporo {

/// Constant coefficients entering the manufactured forcing.
struct MmsCoefficients {
  double mu = 0.5;
  double lambda = 3.0;
  double alpha = 3.0;
  double beta = 2.0;
  double a0 = 4.0;
  double b0 = 0.1;
  double c0 = 0.3;
  double K = 1.0;
  double theta = 2.0;
};

/// u = e^{-t} (sin(pi x) sin(pi y), sin(pi x) sin(pi y)),
/// p = P e^{-t} sin(pi x) cos(pi y), T = S e^{-t} cos(pi x) sin(pi y).
/// The reference setup uses P = lambda and S = mu.
struct MmsSolution {
  double p_amplitude = 3.0;
  double T_amplitude = 0.5;

  static MmsSolution for_coefficients(const MmsCoefficients& c) { return {c.lambda, c.mu}; }

  std::array<double, 2> u(const Point& x, double t) const;
  /// grad_u[i][j] = d u_i / d x_j
  std::array<std::array<double, 2>, 2> grad_u(const Point& x, double t) const;
  double div_u(const Point& x, double t) const;
  double p(const Point& x, double t) const;
  std::array<double, 2> grad_p(const Point& x, double t) const;
  double T(const Point& x, double t) const;
  std::array<double, 2> grad_T(const Point& x, double t) const;
  /// xi = -lambda div u + alpha p + beta T
  double xi(const Point& x, double t, const MmsCoefficients& c) const;
};

struct MmsForcing {
  std::array<double, 2> f{};
  double g = 0.0;
  double H = 0.0;
};

/// f = -div(2 mu eps(u) + lambda div(u) I) + alpha grad p + beta grad T,
/// g = d/dt(c0 p - b0 T + alpha div u) - div(K grad p),
/// H = d/dt(a0 T - b0 p + beta div u) - div(theta grad T).
MmsForcing mms_forcing(const MmsSolution& s, const MmsCoefficients& c, double t, const Point& x);

}  // namespace thermoporo
