#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypwave/evolve.hpp"
#include "hypwave/grid.hpp"
#include "hypwave/model.hpp"

namespace hypwave::morawetz {

/// a_r = (cosh r - 1)/sinh r = tanh(r/2).
double multiplier_a_r(double r);
double multiplier_a_rr(double r);
/// 2 coth(r) a_r, with its r -> 0 limit 1.
double two_coth_a_r(double r);

struct BoundsReport {
  bool pass = false;
  double min_a_r = 0.0;              // a_r >= 0
  double min_one_minus_a_r = 0.0;    // a_r <= 1
  double min_lower = 0.0;            // a_r coth r - 1/2 >= 0
  double min_upper = 0.0;            // 1 - a_r coth r >= 0
  double argmin_lower = 0.0;
  double argmin_upper = 0.0;
};
BoundsReport multiplier_bounds_check(const RadialGrid& grid);

/// <phi_t | a_r phi_r + phi/2> in L^2(sinh r dr).
double virial(const FieldState& state);
/// -int a_rr phi_r^2 sinh r dr - I[phi]/4.
double virial_rhs(const FieldState& state, double lambda);

struct VirialCheck {
  double derivative = 0.0;  // centred difference of the virial
  double rhs = 0.0;         // right side at the midpoint
  double residual = 0.0;
};
/// Advances a perturbed2d problem two RK4 steps (dt = cfl dr) from `state`
/// and compares the centred time derivative of the virial with its identity.
VirialCheck virial_identity_residual(const EvolutionProblem& problem, const FieldState& state,
                                     double cfl = 0.5);

/// The five-integral functional I[phi] (measure dr, printed 1/sinh r factors).
double I_functional(const FieldState& state, double lambda);

/// Integrand of I[phi] divided by cosh(2 P_lambda)/sinh r.
double density(double lambda, double r, double phi);

/// c_lambda = (2/3)(1 - tanh(4 artanh lambda)).
double c_lambda(double lambda);
double c_lambda_naive(double lambda);

/// (1/4 + s^2)(1 - lambda^2 s^2) - 2 lambda s (1 - s^2), expanded.
double Q_polynomial(double s, double lambda);
double Q_factored(double s, double lambda);
double dQ_ds(double s, double lambda);
double dQ_dlambda(double s, double lambda);

struct InnerMinimum {
  double s = 0.0;
  double value = 0.0;
};
/// min over s in [0, 1] of Q(s, lambda): scan, then bisection on dQ/ds.
InnerMinimum min_Q(double lambda, int scan_points = 10000);

struct LambdaEnclosure {
  double lo = 0.0;
  double hi = 0.0;
  double m_lo = 0.0;  // min_s Q(s, lo) >= 0
  double m_hi = 0.0;  // min_s Q(s, hi) < 0
  int iterations = 0;
};
/// Bisection on [0.5, 0.75] for the largest lambda with min_s Q(s, lambda) >= 0.
LambdaEnclosure compute_Lambda(double tol, int scan_points = 10000);

/// Largest dQ/dlambda over an (s, lambda) grid in (0, 1)^2 (should be <= 0).
double max_dQ_dlambda(int points);

enum class Status { pass, fail, inconclusive };
enum class Expectation { must_hold, must_fail, unconstrained };
const char* to_string(Status s);

struct InequalityRecord {
  std::string name;
  std::string domain;
  double min_margin = 0.0;             // raw margin over the whole scan
  double min_normalized = 0.0;         // margin / (known vanishing factor)
  double arg_r = 0.0;                  // arg-min of the normalized margin
  double arg_phi = 0.0;
  Status status = Status::inconclusive;
  Expectation expectation = Expectation::must_hold;
  bool identity = false;               // every scanned point is an exact equality case

  bool conforms() const;
};

struct ScanSettings {
  double phi_max = 5.0;
  int phi_points = 400;  // per sign
  double r_max = 20.0;
  int r_points = 400;
  bool parallel = true;
};

inline constexpr double kInconclusiveMargin = 1e-9;

/// Dense scans of every pointwise inequality behind the Morawetz estimate at
/// one lambda.  `enclosure` decides whether the key inequality must hold
/// (lambda <= lo) or must fail (lambda > hi).
std::vector<InequalityRecord> pointwise_inequalities_check(
    double lambda, const ScanSettings& settings,
    const std::optional<LambdaEnclosure>& enclosure = std::nullopt);

struct LowerBoundSampling {
  int samples = 0;
  double min_margin = 0.0;           // min over samples of I - c_lambda int phi^4/sinh r dr
  double min_relative_margin = 0.0;  // same, divided by c_lambda int phi^4/sinh r dr
  bool pass = false;
};
/// I[phi] >= c_lambda int phi^4 / sinh r dr on seeded random smooth profiles with |phi| <= 3.
LowerBoundSampling I_lower_bound_sampling(double lambda, int samples, std::uint64_t seed);

struct MorawetzCertificate {
  LambdaEnclosure enclosure;
  double tol = 0.0;
  std::vector<std::pair<double, double>> c_table;
  double scan_lambda = 0.0;
  std::vector<InequalityRecord> inequality_scan;
};

MorawetzCertificate build_certificate(double tol, double scan_lambda, const ScanSettings& settings);
std::string format_certificate(const MorawetzCertificate& cert);

}  // namespace hypwave::morawetz
