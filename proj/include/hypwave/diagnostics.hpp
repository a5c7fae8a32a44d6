#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hypwave/model.hpp"

namespace hypwave {

struct AnnulusEnergy {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  /// Largest distance between a requested endpoint and the node it snapped to.
  double snap_distance = 0.0;
};

struct EnergyReport {
  double t = 0.0;
  double total = 0.0;
  double kinetic = 0.0;
  std::vector<AnnulusEnergy> local;
};

struct ConeDiagnostics {
  double t = 0.0;
  double time_to_blowup = 0.0;
  double cone_energy = 0.0;
  std::vector<std::pair<double, double>> self_similar_energy;  // (mu, value)
  double kinetic_time_avg = 0.0;
};

struct ScatteringIndicators {
  double t = 0.0;
  double interior_residual = 0.0;
  double s_norm_accumulated = 0.0;
  double morawetz_accumulated = 0.0;
  /// Instantaneous integrands, kept for trapezoidal accumulation in time.
  double l6_norm_cubed = 0.0;
  double l4_norm_fourth = 0.0;
};

/// Local energy on [a, b]; endpoints snap to the nearest nodes.
AnnulusEnergy local_energy(const FieldState& state, const TargetGeometry& geom, double a, double b);

EnergyReport energy_report(const FieldState& state, const TargetGeometry& geom,
                           std::span<const std::pair<double, double>> annuli);

/// Energy in the self-similar annulus [mu T, T], T the time to blow-up.
double self_similar_energy(const FieldState& state, const TargetGeometry& geom, double t_to_blowup,
                           double mu);

/// Smallest node radius b with E_0^b >= fraction * E_0^{T}.
double concentration_scale(const FieldState& state, const TargetGeometry& geom, double t_to_blowup,
                           double fraction);

/// First radius at which psi reaches pi/2, the scale of the bubble 2 arctan(r / mu).
double bubble_scale(const FieldState& state);

/// Relative weighted L^2 distance on [0, 10] (weight r) between psi(scale r)
/// and 2 arctan r.  Sphere target only.
double bubble_compare(const FieldState& state, const TargetGeometry& geom, double scale);

/// Cone kinetic energy int_0^{T*-s} psi_t^2 sinh r dr of one snapshot at time s.
double cone_kinetic_energy(const FieldState& state, double blowup_time);

/// Trapezoid-in-time average of the cone kinetic energy over the history window.
double kinetic_time_average(std::span<const FieldState> history, double blowup_time);

ConeDiagnostics cone_diagnostics(std::span<const FieldState> history, const TargetGeometry& geom,
                                 double blowup_time, std::span<const double> mus);

/// Interior residual ||(psi - P_lambda, psi_t)||_{H_0(r <= t/2)} and the
/// time-accumulated S-norm (int ||u||_{L^6}^3 dt) and Morawetz integral
/// (int int |u|^4 sinh^3 r dr dt), advanced from `previous` by the trapezoid rule.
ScatteringIndicators scattering_indicators(const FieldState& state, double lambda,
                                           const std::optional<ScatteringIndicators>& previous = {});

}  // namespace hypwave
