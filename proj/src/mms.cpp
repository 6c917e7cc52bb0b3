#include "thermoporo/mms.hpp"

#include <cmath>
#include <numbers>

namespace thermoporo {

namespace {

constexpr double kPi = std::numbers::pi;

struct Trig {
  double sx, cx, sy, cy, e;
  Trig(const Point& p, double t)
      : sx(std::sin(kPi * p.x)),
        cx(std::cos(kPi * p.x)),
        sy(std::sin(kPi * p.y)),
        cy(std::cos(kPi * p.y)),
        e(std::exp(-t)) {}
};

}  // namespace

std::array<double, 2> MmsSolution::u(const Point& x, double t) const {
  const Trig s(x, t);
  const double v = s.e * s.sx * s.sy;
  return {v, v};
}

std::array<std::array<double, 2>, 2> MmsSolution::grad_u(const Point& x, double t) const {
  const Trig s(x, t);
  const double dx = s.e * kPi * s.cx * s.sy;
  const double dy = s.e * kPi * s.sx * s.cy;
  return {{{dx, dy}, {dx, dy}}};
}

double MmsSolution::div_u(const Point& x, double t) const {
  const Trig s(x, t);
  return s.e * kPi * (s.cx * s.sy + s.sx * s.cy);
}

double MmsSolution::p(const Point& x, double t) const {
  const Trig s(x, t);
  return p_amplitude * s.e * s.sx * s.cy;
}

std::array<double, 2> MmsSolution::grad_p(const Point& x, double t) const {
  const Trig s(x, t);
  return {p_amplitude * s.e * kPi * s.cx * s.cy, -p_amplitude * s.e * kPi * s.sx * s.sy};
}

double MmsSolution::T(const Point& x, double t) const {
  const Trig s(x, t);
  return T_amplitude * s.e * s.cx * s.sy;
}

std::array<double, 2> MmsSolution::grad_T(const Point& x, double t) const {
  const Trig s(x, t);
  return {-T_amplitude * s.e * kPi * s.sx * s.sy, T_amplitude * s.e * kPi * s.cx * s.cy};
}

double MmsSolution::xi(const Point& x, double t, const MmsCoefficients& c) const {
  return -c.lambda * div_u(x, t) + c.alpha * p(x, t) + c.beta * T(x, t);
}

MmsForcing mms_forcing(const MmsSolution& sol, const MmsCoefficients& c, double t,
                       const Point& x) {
  const Trig s(x, t);
  const double pi2 = kPi * kPi;
  // Both displacement components equal phi = e^{-t} sin(pi x) sin(pi y).
  const double lap_u = -2.0 * pi2 * s.e * s.sx * s.sy;
  const double grad_div = pi2 * s.e * (s.cx * s.cy - s.sx * s.sy);  // same in x and y
  const auto gp = sol.grad_p(x, t);
  const auto gT = sol.grad_T(x, t);
  MmsForcing out;
  for (int i = 0; i < 2; ++i) {
    // div(2 mu eps(u)) = mu (lap u + grad div u)
    out.f[i] = -c.mu * (lap_u + grad_div) - c.lambda * grad_div + c.alpha * gp[i] + c.beta * gT[i];
  }
  const double p = sol.p(x, t), T = sol.T(x, t), div = sol.div_u(x, t);
  // Every field carries e^{-t}, so d/dt is multiplication by -1; lap p = -2 pi^2 p.
  out.g = -(c.c0 * p - c.b0 * T + c.alpha * div) + 2.0 * pi2 * c.K * p;
  out.H = -(c.a0 * T - c.b0 * p + c.beta * div) + 2.0 * pi2 * c.theta * T;
  return out;
}

}  // namespace thermoporo
