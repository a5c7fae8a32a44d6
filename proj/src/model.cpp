#include "hypwave/model.hpp"

#include <cmath>
#include <string>

#include "hypwave/errors.hpp"

namespace hypwave {

double TargetGeometry::g(double psi) const {
  return kind_ == TargetKind::hyperbolic ? std::sinh(psi) : std::sin(psi);
}

double TargetGeometry::g_prime(double psi) const {
  return kind_ == TargetKind::hyperbolic ? std::cosh(psi) : std::cos(psi);
}

double TargetGeometry::g_gprime(double psi) const {
  return kind_ == TargetKind::hyperbolic ? 0.5 * std::sinh(2.0 * psi) : 0.5 * std::sin(2.0 * psi);
}

double cosh_m1(double x) {
  const double s = std::sinh(0.5 * x);
  return 2.0 * s * s;
}

double sinh_minus_id(double x) {
  if (std::fabs(x) >= 1.0) return std::sinh(x) - x;
  // Odd Taylor tail x^3/3! + x^5/5! + ...; converges to full precision in < 12 terms.
  const double x2 = x * x;
  double term = x * x2 / 6.0;
  double sum = term;
  for (int k = 2; k < 16; ++k) {
    term *= x2 / static_cast<double>((2 * k) * (2 * k + 1));
    sum += term;
    if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

double stable_atanh(double x) { return 0.5 * std::log1p(2.0 * x / (1.0 - x)); }

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw InvalidArgument("lambda must lie in [0, 1), got " + std::to_string(lambda));
  }
}

double p_lambda(double lambda, double r) {
  require_lambda(lambda);
  if (r < 0.0) throw InvalidArgument("p_lambda: r must be nonnegative");
  return 2.0 * stable_atanh(lambda * std::tanh(0.5 * r));
}

double dp_lambda(double lambda, double r) {
  require_lambda(lambda);
  const double t = std::tanh(0.5 * r);
  const double c = std::cosh(0.5 * r);
  return lambda / (c * c) / (1.0 - lambda * lambda * t * t);
}

double p_lambda_endpoint(double lambda) {
  require_lambda(lambda);
  return 2.0 * stable_atanh(lambda);
}

double harmonic_map_energy(double lambda) {
  require_lambda(lambda);
  return 2.0 * lambda * lambda / (1.0 - lambda * lambda);
}

double potential_U(double lambda, double r) {
  require_lambda(lambda);
  if (r < 0.0) throw InvalidArgument("potential_U: r must be nonnegative");
  if (r == 0.0) return 2.0 * lambda * lambda;
  const double sp = std::sinh(p_lambda(lambda, r));
  const double sr = std::sinh(r);
  return 2.0 * (sp / sr) * (sp / sr);
}

Background background(double lambda, double r) {
  Background bg;
  const double p = p_lambda(lambda, r);
  bg.r = r;
  bg.sinh_r = std::sinh(r);
  bg.sinh2P = std::sinh(2.0 * p);
  bg.cosh2P = std::cosh(2.0 * p);
  bg.U = potential_U(lambda, r);
  return bg;
}

double nonlinearity_F(const Background& bg, double phi) {
  const double num = -bg.sinh2P * cosh_m1(2.0 * phi) - bg.cosh2P * std::sinh(2.0 * phi);
  return num / (2.0 * bg.sinh_r * bg.sinh_r);
}

double nonlinearity_F(double lambda, double r, double phi) {
  if (!(r > 0.0)) throw InvalidArgument("nonlinearity_F: r must be positive");
  return nonlinearity_F(background(lambda, r), phi);
}

double nonlinearity_N4d(const Background& bg, double u) {
  const double x = bg.sinh_r * u;
  const double sx = std::sinh(x);
  const double s3 = bg.sinh_r * bg.sinh_r * bg.sinh_r;
  return (-bg.sinh2P * sx * sx - 0.5 * bg.cosh2P * sinh_minus_id(2.0 * x)) / s3;
}

double nonlinearity_N4d(double lambda, double r, double u) {
  if (!(r > 0.0)) throw InvalidArgument("nonlinearity_N4d: r must be positive");
  return nonlinearity_N4d(background(lambda, r), u);
}

double nonlinearity_N4d_origin(double lambda, double u) {
  require_lambda(lambda);
  return -2.0 * lambda * u * u - (2.0 / 3.0) * u * u * u;
}

double nonlinearity_euclidean(double r, double v) {
  if (r < 0.0) throw InvalidArgument("nonlinearity_euclidean: r must be nonnegative");
  if (r == 0.0) return -(2.0 / 3.0) * v * v * v;
  return -0.5 * sinh_minus_id(2.0 * r * v) / (r * r * r);
}

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::psi2d:
      return "psi2d";
    case Formulation::phi2d:
      return "phi2d";
    case Formulation::u4d:
      return "u4d";
    case Formulation::v_euclidean4d:
      return "v_euclidean4d";
  }
  return "?";
}

Parity parity_of(Formulation f) {
  return (f == Formulation::psi2d || f == Formulation::phi2d) ? Parity::odd : Parity::even;
}

namespace {

void require_formulation(const FieldState& s, Formulation expected, const char* op) {
  if (s.formulation != expected) {
    throw InvalidArgument(std::string(op) + ": expected " + to_string(expected) + " state, got " +
                          to_string(s.formulation));
  }
  if (s.f.size() != s.grid.size() || s.ft.size() != s.grid.size()) {
    throw InvalidArgument(std::string(op) + ": sample count does not match grid");
  }
}

}  // namespace

FieldState zero_state(Formulation formulation, double lambda, const RadialGrid& grid) {
  require_lambda(lambda);
  FieldState s;
  s.formulation = formulation;
  s.lambda = lambda;
  s.grid = grid;
  s.f.assign(grid.size(), 0.0);
  s.ft.assign(grid.size(), 0.0);
  return s;
}

FieldState harmonic_map_state(double lambda, const RadialGrid& grid) {
  auto s = zero_state(Formulation::psi2d, lambda, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) s.f[i] = p_lambda(lambda, grid.r(i));
  return s;
}

FieldState lift_2d_to_4d(const FieldState& state) {
  require_formulation(state, Formulation::phi2d, "lift_2d_to_4d");
  const double scale = std::fabs(state.f[1]) + std::fabs(state.f[2]) + 1.0;
  if (std::fabs(state.f[0]) > 1e-12 * scale) {
    throw InvalidArgument("lift_2d_to_4d: phi(0) must vanish");
  }
  FieldState out = state;
  out.formulation = Formulation::u4d;
  for (std::size_t i = 1; i < state.grid.size(); ++i) {
    const double s = std::sinh(state.grid.r(i));
    out.f[i] = state.f[i] / s;
    out.ft[i] = state.ft[i] / s;
  }
  // Even extrapolation u(0) = (4 u(dr) - u(2 dr)) / 3.
  out.f[0] = (4.0 * out.f[1] - out.f[2]) / 3.0;
  out.ft[0] = (4.0 * out.ft[1] - out.ft[2]) / 3.0;
  return out;
}

FieldState lower_4d_to_2d(const FieldState& state) {
  require_formulation(state, Formulation::u4d, "lower_4d_to_2d");
  FieldState out = state;
  out.formulation = Formulation::phi2d;
  out.f[0] = 0.0;
  out.ft[0] = 0.0;
  for (std::size_t i = 1; i < state.grid.size(); ++i) {
    const double s = std::sinh(state.grid.r(i));
    out.f[i] = s * state.f[i];
    out.ft[i] = s * state.ft[i];
  }
  return out;
}

FieldState to_psi2d(const FieldState& state) {
  switch (state.formulation) {
    case Formulation::psi2d:
      return state;
    case Formulation::u4d:
      return to_psi2d(lower_4d_to_2d(state));
    case Formulation::phi2d: {
      FieldState out = state;
      out.formulation = Formulation::psi2d;
      for (std::size_t i = 0; i < out.grid.size(); ++i) out.f[i] += p_lambda(state.lambda, out.grid.r(i));
      return out;
    }
    case Formulation::v_euclidean4d:
      break;
  }
  throw InvalidArgument("to_psi2d: Euclidean states have no hyperbolic wave map picture");
}

FieldState to_phi2d(const FieldState& state) {
  switch (state.formulation) {
    case Formulation::phi2d:
      return state;
    case Formulation::u4d:
      return lower_4d_to_2d(state);
    case Formulation::psi2d: {
      FieldState out = state;
      out.formulation = Formulation::phi2d;
      for (std::size_t i = 0; i < out.grid.size(); ++i) out.f[i] -= p_lambda(state.lambda, out.grid.r(i));
      return out;
    }
    case Formulation::v_euclidean4d:
      break;
  }
  throw InvalidArgument("to_phi2d: Euclidean states have no hyperbolic wave map picture");
}

std::vector<double> h0_density(const FieldState& state) {
  require_formulation(state, Formulation::phi2d, "h0_density");
  const auto d = d_dr(state.grid, state.f, Parity::odd);
  std::vector<double> out(state.grid.size());
  out[0] = 2.0 * d[0] * d[0] + state.ft[0] * state.ft[0];
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double q = state.f[i] / std::sinh(state.grid.r(i));
    out[i] = d[i] * d[i] + q * q + state.ft[i] * state.ft[i];
  }
  return out;
}

double norm_H0(const FieldState& state) {
  return std::sqrt(integrate(state.grid, h0_density(state), WeightKind::H2));
}

double norm_H1L2_H4(const FieldState& state) {
  require_formulation(state, Formulation::u4d, "norm_H1L2_H4");
  const auto d = d_dr(state.grid, state.f, Parity::even);
  std::vector<double> dens(state.grid.size());
  for (std::size_t i = 0; i < dens.size(); ++i) {
    dens[i] = d[i] * d[i] + state.f[i] * state.f[i] + state.ft[i] * state.ft[i];
  }
  return std::sqrt(integrate(state.grid, dens, WeightKind::H4));
}

std::vector<double> energy_density(const FieldState& state, const TargetGeometry& geom) {
  require_formulation(state, Formulation::psi2d, "energy_density");
  const auto d = d_dr(state.grid, state.f, Parity::odd);
  std::vector<double> e(state.grid.size());
  // g'(0) = 1, so g(psi)/sinh r -> psi_r(0) at the origin.
  e[0] = 0.5 * (state.ft[0] * state.ft[0] + 2.0 * d[0] * d[0]);
  for (std::size_t i = 1; i < e.size(); ++i) {
    const double q = geom.g(state.f[i]) / std::sinh(state.grid.r(i));
    e[i] = 0.5 * (state.ft[i] * state.ft[i] + d[i] * d[i] + q * q);
  }
  return e;
}

double total_energy(const FieldState& state, const TargetGeometry& geom) {
  return integrate(state.grid, energy_density(state, geom), WeightKind::H2);
}

double linear_energy_4d(const FieldState& state, double lambda) {
  require_formulation(state, Formulation::u4d, "linear_energy_4d");
  require_lambda(lambda);
  const auto d = d_dr(state.grid, state.f, Parity::even);
  std::vector<double> dens(state.grid.size());
  for (std::size_t i = 0; i < dens.size(); ++i) {
    const double u = state.f[i];
    const double U = potential_U(lambda, state.grid.r(i));
    dens[i] = d[i] * d[i] + state.ft[i] * state.ft[i] - 2.0 * u * u + U * u * u;
  }
  return integrate(state.grid, dens, WeightKind::H4);
}

namespace {

// (cosh x - 1 - x^2/2) without cancellation.
double cosh_m1_m2(double x) {
  if (std::fabs(x) < 0.5) {
    const double x2 = x * x;
    return x2 * x2 * (1.0 / 24 + x2 * (1.0 / 720 + x2 * (1.0 / 40320 + x2 / 3628800)));
  }
  return cosh_m1(x) - 0.5 * x * x;
}

}  // namespace

double euclidean_energy(const FieldState& state) {
  require_formulation(state, Formulation::v_euclidean4d, "euclidean_energy");
  const auto d = d_dr(state.grid, state.f, Parity::even);
  std::vector<double> dens(state.grid.size());
  for (std::size_t i = 0; i < dens.size(); ++i) {
    const double r = state.grid.r(i);
    const double v = state.f[i];
    // G(r, v) = (cosh 2rv - 1 - 2 r^2 v^2) / (4 r^4), G(0, v) = v^4 / 6
    const double G = r == 0.0 ? v * v * v * v / 6.0 : cosh_m1_m2(2.0 * r * v) / (4.0 * r * r * r * r);
    dens[i] = 0.5 * (d[i] * d[i] + state.ft[i] * state.ft[i]) + G;
  }
  return integrate(state.grid, dens, WeightKind::EUC4);
}

double norm_energy_euclidean(const FieldState& state) {
  require_formulation(state, Formulation::v_euclidean4d, "norm_energy_euclidean");
  const auto d = d_dr(state.grid, state.f, Parity::even);
  std::vector<double> dens(state.grid.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = d[i] * d[i] + state.ft[i] * state.ft[i];
  return std::sqrt(integrate(state.grid, dens, WeightKind::EUC4));
}

}  // namespace hypwave
