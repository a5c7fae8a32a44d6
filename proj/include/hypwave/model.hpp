#pragma once

#include <span>
#include <vector>

#include "hypwave/grid.hpp"

namespace hypwave {

enum class TargetKind { hyperbolic, sphere };

/// Surface of revolution with metric dpsi^2 + g(psi)^2 domega^2.
class TargetGeometry {
 public:
  explicit TargetGeometry(TargetKind kind) : kind_(kind) {}

  TargetKind kind() const noexcept { return kind_; }
  double g(double psi) const;
  double g_prime(double psi) const;
  /// g(psi) g'(psi), the nonlinearity of the wave map equation.
  double g_gprime(double psi) const;

  friend bool operator==(const TargetGeometry&, const TargetGeometry&) = default;

 private:
  TargetKind kind_;
};

inline TargetGeometry hyperbolic_target() { return TargetGeometry(TargetKind::hyperbolic); }
inline TargetGeometry sphere_target() { return TargetGeometry(TargetKind::sphere); }

// Cancellation-safe elementary combinations.
double cosh_m1(double x);         // cosh x - 1
double sinh_minus_id(double x);   // sinh x - x
double stable_atanh(double x);

/// The harmonic map P_lambda(r) = 2 artanh(lambda tanh(r/2)).
double p_lambda(double lambda, double r);
double dp_lambda(double lambda, double r);
/// Endpoint P_lambda(infinity) = 2 artanh(lambda).
double p_lambda_endpoint(double lambda);
double harmonic_map_energy(double lambda);

/// U_lambda(r) = (cosh 2P - 1)/sinh^2 r; the r -> 0 limit is 2 lambda^2.
double potential_U(double lambda, double r);

/// Background quantities at a fixed node; evaluating them once per node keeps
/// the evolution kernels free of repeated transcendental calls.
struct Background {
  double r = 0.0;
  double sinh_r = 0.0;
  double sinh2P = 0.0;
  double cosh2P = 1.0;
  double U = 0.0;
};
Background background(double lambda, double r);

/// Source of the perturbed equation phi_tt - phi_rr - coth r phi_r = F(r, phi).
double nonlinearity_F(double lambda, double r, double phi);
double nonlinearity_F(const Background& bg, double phi);

/// Right side of the H^4 equation u_tt - u_rr - 3 coth r u_r - 2u + U u = N(r, u).
double nonlinearity_N4d(double lambda, double r, double u);
double nonlinearity_N4d(const Background& bg, double u);
/// r -> 0 limit: -2 lambda u^2 - (2/3) u^3.
double nonlinearity_N4d_origin(double lambda, double u);

/// Flat-space nonlinearity (2 r v - sinh(2 r v)) / (2 r^3); limit -(2/3) v^3 at r = 0.
double nonlinearity_euclidean(double r, double v);

enum class Formulation { psi2d, phi2d, u4d, v_euclidean4d };

const char* to_string(Formulation f);
Parity parity_of(Formulation f);

struct FieldState {
  Formulation formulation = Formulation::psi2d;
  double lambda = 0.0;
  double t = 0.0;
  std::vector<double> f;
  std::vector<double> ft;
  RadialGrid grid{1.0, 16};
};

FieldState zero_state(Formulation formulation, double lambda, const RadialGrid& grid);
/// (P_lambda, 0) sampled on the grid.
FieldState harmonic_map_state(double lambda, const RadialGrid& grid);

FieldState lift_2d_to_4d(const FieldState& state);
FieldState lower_4d_to_2d(const FieldState& state);
/// psi = P_lambda + phi as a psi2d state, from a phi2d or u4d state.
FieldState to_psi2d(const FieldState& state);
/// phi = psi - P_lambda, from psi2d or u4d.
FieldState to_phi2d(const FieldState& state);

/// Integrand of the H_0 norm, ((phi_r)^2 + phi^2/sinh^2 r + phi_t^2), per node
/// (to be integrated against sinh r).
std::vector<double> h0_density(const FieldState& phi_state);
double norm_H0(const FieldState& state);
double norm_H1L2_H4(const FieldState& state);

/// Pointwise (1/2)(psi_t^2 + psi_r^2 + g^2(psi)/sinh^2 r), to be integrated against sinh r.
std::vector<double> energy_density(const FieldState& state, const TargetGeometry& geom);
double total_energy(const FieldState& state, const TargetGeometry& geom);
double linear_energy_4d(const FieldState& state, double lambda);

/// Conserved energy of the Euclidean 4d equation, weight r^3.
double euclidean_energy(const FieldState& state);
/// Homogeneous (dot H^1 x L^2)(R^4) norm of a radial Euclidean state.
double norm_energy_euclidean(const FieldState& state);

void require_lambda(double lambda);

}  // namespace hypwave
