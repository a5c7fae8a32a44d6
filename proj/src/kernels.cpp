#include <cmath>

#include "hypwave/evolve.hpp"

namespace hypwave::kernels {

namespace {

inline double origin_acceleration(const EvolutionProblem& p, std::span<const double> f) {
  if (parity_of(formulation_of(p.equation())) == Parity::odd) return 0.0;
  const double h = p.grid().dr();
  const double u = f[0];
  // f_rr + (3/r) f_r -> 4 f_rr(0); even ghost node gives f_rr(0) = 2 (f_1 - f_0)/h^2.
  const double radial = 8.0 * (f[1] - u) / (h * h);
  const double lam = p.lambda();
  switch (p.equation()) {
    case Equation::nonlinear4d:
      return radial + 2.0 * u - 2.0 * lam * lam * u + nonlinearity_N4d_origin(lam, u);
    case Equation::linear4d:
      return radial + 2.0 * u - 2.0 * lam * lam * u;
    case Equation::linear4d_free:
      return radial + 2.0 * u;
    case Equation::euclidean4d:
      return radial - (2.0 / 3.0) * u * u * u;
    default:
      return 0.0;
  }
}

inline double node_acceleration(const EvolutionProblem& p, std::span<const double> f, std::size_t i) {
  const double h = p.grid().dr();
  const double lap = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
  const double grad = (f[i + 1] - f[i - 1]) / (2.0 * h);
  const double radial = lap + p.first_order()[i] * grad;
  const double v = f[i];
  const Background& bg = p.backgrounds()[i];
  switch (p.equation()) {
    case Equation::wm2d:
      return radial - p.geometry().g_gprime(v) * p.inv_sinh2()[i];
    case Equation::perturbed2d:
      return radial + nonlinearity_F(bg, v);
    case Equation::nonlinear4d:
      return radial + 2.0 * v - bg.U * v + nonlinearity_N4d(bg, v);
    case Equation::linear4d:
      return radial + 2.0 * v - bg.U * v;
    case Equation::linear4d_free:
      return radial + 2.0 * v;
    case Equation::euclidean4d:
      return radial + nonlinearity_euclidean(bg.r, v);
  }
  return 0.0;
}

}  // namespace

void acceleration_serial(const EvolutionProblem& problem, std::span<const double> f,
                         std::span<double> out) {
  const std::size_t n = static_cast<std::size_t>(problem.grid().n());
  out[0] = origin_acceleration(problem, f);
  for (std::size_t i = 1; i < n; ++i) out[i] = node_acceleration(problem, f, i);
  out[n] = 0.0;
}

void acceleration_parallel(const EvolutionProblem& problem, std::span<const double> f,
                           std::span<double> out) {
  const long n = problem.grid().n();
  out[0] = origin_acceleration(problem, f);
#pragma omp parallel for schedule(static)
  for (long i = 1; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = node_acceleration(problem, f, static_cast<std::size_t>(i));
  }
  out[static_cast<std::size_t>(n)] = 0.0;
}

}  // namespace hypwave::kernels
