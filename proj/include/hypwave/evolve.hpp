#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hypwave/grid.hpp"
#include "hypwave/model.hpp"

namespace hypwave {

enum class Equation {
  wm2d,           // psi_tt - psi_rr - coth r psi_r + g g'(psi)/sinh^2 r = 0
  perturbed2d,    // phi_tt - phi_rr - coth r phi_r = F(r, phi)
  nonlinear4d,    // u_tt - u_rr - 3 coth r u_r - 2u + U u = N(r, u)
  linear4d,       // (d_t^2 - Delta_H4 - 2 + U) u = 0
  linear4d_free,  // (d_t^2 - Delta_H4 - 2) u = 0
  euclidean4d,    // v_tt - v_rr - (3/r) v_r = N_euc(r, v)
};

const char* to_string(Equation eq);
Equation parse_equation(const std::string& name);
Formulation formulation_of(Equation eq);

/// An equation on a fixed grid together with its precomputed node tables.
class EvolutionProblem {
 public:
  EvolutionProblem(Equation equation, TargetGeometry geom, double lambda, RadialGrid grid);

  Equation equation() const noexcept { return equation_; }
  const TargetGeometry& geometry() const noexcept { return geom_; }
  double lambda() const noexcept { return lambda_; }
  const RadialGrid& grid() const noexcept { return grid_; }

  /// Coefficient of f_r in the radial operator: coth r, 3 coth r or 3/r.
  std::span<const double> first_order() const noexcept { return first_order_; }
  std::span<const double> inv_sinh2() const noexcept { return inv_sinh2_; }
  std::span<const Background> backgrounds() const noexcept { return bg_; }

 private:
  Equation equation_;
  TargetGeometry geom_;
  double lambda_;
  RadialGrid grid_;
  std::vector<double> first_order_;
  std::vector<double> inv_sinh2_;
  std::vector<Background> bg_;
};

struct StepControl {
  double cfl = 0.5;
  double t_end = 0.0;
  int output_stride = 1;
  bool waive_causality = false;
};

/// Second time derivative implied by the equation at every node.
std::vector<double> rhs(const EvolutionProblem& problem, const FieldState& state);

/// One classical RK4 step; the origin and the outer node are re-imposed after
/// every stage (odd fields pinned to 0 at r = 0, outer node frozen).
FieldState step_rk4(const EvolutionProblem& problem, const FieldState& state, double dt);

struct CausalityReport {
  bool ok = true;
  bool waived = false;
  double support = 0.0;
  double required_r_max = 0.0;
};

/// Largest node radius where the state differs from its background
/// (P_lambda for hyperbolic psi2d, zero otherwise) by more than tol.
double support_radius(const FieldState& state, const TargetGeometry& geom, double tol = 1e-10);
CausalityReport check_causality(const FieldState& state, const TargetGeometry& geom,
                                const StepControl& control);

using Observer = std::function<void(const FieldState&)>;

struct EvolveResult {
  FieldState state;
  CausalityReport causality;
  std::size_t steps = 0;
  double dt = 0.0;
};

/// Advances to control.t_end with dt = t_end / ceil(t_end / (cfl dr)).
/// Observers see the initial state, every output_stride-th step and the final state.
/// 2d runs stop with NumericFailure once |psi_{i+1} - psi_i| exceeds 1 anywhere.
EvolveResult evolve(const EvolutionProblem& problem, FieldState state, const StepControl& control,
                    std::span<const Observer> observers = {});

/// v(rho) = u(rho/scale)/scale, v_t(rho) = u_t(rho/scale)/scale^2 sampled on target.
FieldState rescale_to_euclidean(const FieldState& state, double scale, const RadialGrid& target);
FieldState rescale_to_euclidean(const FieldState& state, double scale);
/// Inverse rescaling: u(r) = scale v(scale r), u_t(r) = scale^2 v_t(scale r).
FieldState concentrate_to_hyperbolic(const FieldState& state, double scale, double lambda,
                                     const RadialGrid& target);

namespace kernels {

/// Serial reference for the node loop of rhs().
void acceleration_serial(const EvolutionProblem& problem, std::span<const double> f,
                         std::span<double> out);
/// OpenMP version; bitwise identical to the serial loop.
void acceleration_parallel(const EvolutionProblem& problem, std::span<const double> f,
                           std::span<double> out);

}  // namespace kernels

}  // namespace hypwave
