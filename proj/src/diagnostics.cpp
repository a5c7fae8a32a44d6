#include "hypwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypwave/errors.hpp"

namespace hypwave {

namespace {

void require_psi(const FieldState& s, const char* op) {
  if (s.formulation != Formulation::psi2d) {
    throw InvalidArgument(std::string(op) + ": expected a psi2d state");
  }
}

std::vector<double> cumulative_energy(const FieldState& state, const TargetGeometry& geom) {
  return cumulative_integral(state.grid, energy_density(state, geom), WeightKind::H2);
}

}  // namespace

AnnulusEnergy local_energy(const FieldState& state, const TargetGeometry& geom, double a, double b) {
  require_psi(state, "local_energy");
  if (!(a >= 0.0 && a < b && b <= state.grid.r_max() * (1.0 + 1e-12))) {
    throw InvalidArgument("local_energy: need 0 <= a < b <= r_max");
  }
  const auto c = cumulative_energy(state, geom);
  const std::size_t ia = state.grid.nearest(a);
  const std::size_t ib = state.grid.nearest(b);
  AnnulusEnergy out;
  out.a = a;
  out.b = b;
  out.value = c[ib] - c[ia];
  out.snap_distance = std::max(std::fabs(state.grid.r(ia) - a), std::fabs(state.grid.r(ib) - b));
  return out;
}

EnergyReport energy_report(const FieldState& state, const TargetGeometry& geom,
                           std::span<const std::pair<double, double>> annuli) {
  require_psi(state, "energy_report");
  EnergyReport rep;
  rep.t = state.t;
  rep.total = total_energy(state, geom);
  std::vector<double> kin(state.grid.size());
  for (std::size_t i = 0; i < kin.size(); ++i) kin[i] = 0.5 * state.ft[i] * state.ft[i];
  rep.kinetic = integrate(state.grid, kin, WeightKind::H2);
  for (const auto& [a, b] : annuli) rep.local.push_back(local_energy(state, geom, a, b));
  return rep;
}

double self_similar_energy(const FieldState& state, const TargetGeometry& geom, double t_to_blowup,
                           double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw InvalidArgument("self_similar_energy: mu must lie in (0, 1)");
  if (!(t_to_blowup > 0.0)) throw InvalidArgument("self_similar_energy: time to blow-up must be positive");
  const double b = std::min(t_to_blowup, state.grid.r_max());
  const double a = mu * b;
  if (state.grid.nearest(a) == state.grid.nearest(b)) return 0.0;
  return local_energy(state, geom, a, b).value;
}

double concentration_scale(const FieldState& state, const TargetGeometry& geom, double t_to_blowup,
                           double fraction) {
  require_psi(state, "concentration_scale");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidArgument("concentration_scale: fraction must lie in (0, 1)");
  }
  const auto c = cumulative_energy(state, geom);
  const std::size_t top = state.grid.nearest(std::min(t_to_blowup, state.grid.r_max()));
  const double cone = c[top];
  if (!(cone > 0.0)) throw UndefinedScale("concentration_scale: no energy inside the cone");
  const double target = fraction * cone;
  std::size_t lo = 0, hi = top;  // c[lo] < target <= c[hi]
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (c[mid] >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return state.grid.r(hi);
}

double bubble_scale(const FieldState& state) {
  require_psi(state, "bubble_scale");
  const double half = 0.5 * std::numbers::pi;
  for (std::size_t i = 1; i < state.f.size(); ++i) {
    if (state.f[i] >= half) {
      const double f0 = state.f[i - 1], f1 = state.f[i];
      const double w = (half - f0) / (f1 - f0);
      return state.grid.r(i - 1) + w * state.grid.dr();
    }
  }
  throw UndefinedScale("bubble_scale: psi never reaches pi/2");
}

double bubble_compare(const FieldState& state, const TargetGeometry& geom, double scale) {
  require_psi(state, "bubble_compare");
  if (geom.kind() != TargetKind::sphere) {
    throw InvalidArgument("bubble_compare: no Euclidean harmonic map exists for the hyperbolic target");
  }
  if (!(scale > 0.0)) throw InvalidArgument("bubble_compare: scale must be positive");
  constexpr double window = 10.0;
  if (scale * window > state.grid.r_max()) {
    throw InvalidArgument("bubble_compare: rescaled window exceeds the grid");
  }
  const RadialGrid x(window, 2000);
  std::vector<double> diff(x.size()), ref(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double q = 2.0 * std::atan(x.r(i));
    const double p = interpolate(state.grid, state.f, Parity::odd, scale * x.r(i));
    diff[i] = (p - q) * (p - q);
    ref[i] = q * q;
  }
  return std::sqrt(integrate(x, diff, WeightKind::EUC2) / integrate(x, ref, WeightKind::EUC2));
}

double cone_kinetic_energy(const FieldState& state, double blowup_time) {
  const double radius = std::min(blowup_time - state.t, state.grid.r_max());
  if (!(radius > 0.0)) return 0.0;
  std::vector<double> kin(state.grid.size());
  for (std::size_t i = 0; i < kin.size(); ++i) kin[i] = state.ft[i] * state.ft[i];
  const auto c = cumulative_integral(state.grid, kin, WeightKind::H2);
  return c[state.grid.nearest(radius)];
}

double kinetic_time_average(std::span<const FieldState> history, double blowup_time) {
  if (history.empty()) throw InvalidArgument("kinetic_time_average: empty history");
  if (history.size() == 1) return cone_kinetic_energy(history.front(), blowup_time);
  double integral = 0.0;
  double prev = cone_kinetic_energy(history.front(), blowup_time);
  for (std::size_t k = 1; k < history.size(); ++k) {
    const double cur = cone_kinetic_energy(history[k], blowup_time);
    const double dt = history[k].t - history[k - 1].t;
    if (dt < 0.0) throw InvalidArgument("kinetic_time_average: history must be time-ordered");
    integral += 0.5 * dt * (prev + cur);
    prev = cur;
  }
  const double span = history.back().t - history.front().t;
  return span > 0.0 ? integral / span : prev;
}

ConeDiagnostics cone_diagnostics(std::span<const FieldState> history, const TargetGeometry& geom,
                                 double blowup_time, std::span<const double> mus) {
  if (history.empty()) throw InvalidArgument("cone_diagnostics: empty history");
  const FieldState& s = history.back();
  ConeDiagnostics d;
  d.t = s.t;
  d.time_to_blowup = blowup_time - s.t;
  const double radius = std::min(d.time_to_blowup, s.grid.r_max());
  if (radius > 0.0 && s.grid.nearest(radius) > 0) {
    d.cone_energy = local_energy(s, geom, 0.0, radius).value;
    for (double mu : mus) d.self_similar_energy.emplace_back(mu, self_similar_energy(s, geom, radius, mu));
  }
  d.kinetic_time_avg = kinetic_time_average(history, blowup_time);
  return d;
}

ScatteringIndicators scattering_indicators(const FieldState& state, double lambda,
                                           const std::optional<ScatteringIndicators>& previous) {
  require_psi(state, "scattering_indicators");
  require_lambda(lambda);
  if (state.t < 0.0) throw InvalidArgument("scattering_indicators: t must be nonnegative");
  const std::size_t n = static_cast<std::size_t>(state.grid.n());
  const double r_max = state.grid.r_max();
  if (std::fabs(state.f[n] - p_lambda(lambda, r_max)) > 1e-6) {
    throw ClassMismatch("scattering_indicators: state endpoint does not match P_lambda");
  }
  FieldState phi = state;
  phi.formulation = Formulation::psi2d;
  phi.lambda = lambda;
  phi = to_phi2d(phi);

  ScatteringIndicators out;
  out.t = state.t;
  const auto h0 = cumulative_integral(state.grid, h0_density(phi), WeightKind::H2);
  out.interior_residual = std::sqrt(std::max(0.0, h0[state.grid.nearest(0.5 * state.t)]));

  // |u|^4 sinh^3 r = phi^4 / sinh r and |u|^6 sinh^3 r = phi^6 / sinh^3 r; both vanish at r = 0.
  std::vector<double> l4(state.grid.size(), 0.0), l6(state.grid.size(), 0.0);
  for (std::size_t i = 1; i < l4.size(); ++i) {
    const double s = std::sinh(state.grid.r(i));
    const double p2 = phi.f[i] * phi.f[i];
    l4[i] = p2 * p2 / s;
    l6[i] = p2 * p2 * p2 / (s * s * s);
  }
  out.l4_norm_fourth = integrate(state.grid, l4, WeightKind::NONE);
  out.l6_norm_cubed = std::sqrt(integrate(state.grid, l6, WeightKind::NONE));
  if (previous) {
    const double dt = state.t - previous->t;
    if (dt < 0.0) throw InvalidArgument("scattering_indicators: time went backwards");
    out.s_norm_accumulated =
        previous->s_norm_accumulated + 0.5 * dt * (previous->l6_norm_cubed + out.l6_norm_cubed);
    out.morawetz_accumulated =
        previous->morawetz_accumulated + 0.5 * dt * (previous->l4_norm_fourth + out.l4_norm_fourth);
  }
  return out;
}

}  // namespace hypwave
