#include "hypwave/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "hypwave/errors.hpp"

namespace hypwave {

const char* to_string(Equation eq) {
  switch (eq) {
    case Equation::wm2d:
      return "wm2d";
    case Equation::perturbed2d:
      return "perturbed2d";
    case Equation::nonlinear4d:
      return "nonlinear4d";
    case Equation::linear4d:
      return "linear4d";
    case Equation::linear4d_free:
      return "linear4d_free";
    case Equation::euclidean4d:
      return "euclidean4d";
  }
  return "?";
}

Equation parse_equation(const std::string& name) {
  for (auto eq : {Equation::wm2d, Equation::perturbed2d, Equation::nonlinear4d, Equation::linear4d,
                  Equation::linear4d_free, Equation::euclidean4d}) {
    if (name == to_string(eq)) return eq;
  }
  throw InvalidArgument("unknown equation '" + name + "'");
}

Formulation formulation_of(Equation eq) {
  switch (eq) {
    case Equation::wm2d:
      return Formulation::psi2d;
    case Equation::perturbed2d:
      return Formulation::phi2d;
    case Equation::nonlinear4d:
    case Equation::linear4d:
    case Equation::linear4d_free:
      return Formulation::u4d;
    case Equation::euclidean4d:
      return Formulation::v_euclidean4d;
  }
  return Formulation::psi2d;
}

EvolutionProblem::EvolutionProblem(Equation equation, TargetGeometry geom, double lambda, RadialGrid grid)
    : equation_(equation), geom_(geom), lambda_(lambda), grid_(grid) {
  require_lambda(lambda);
  const std::size_t m = grid_.size();
  first_order_.assign(m, 0.0);
  inv_sinh2_.assign(m, 0.0);
  bg_.assign(m, Background{});
  const bool euclid = equation == Equation::euclidean4d;
  const bool four_d = formulation_of(equation) != Formulation::psi2d &&
                      formulation_of(equation) != Formulation::phi2d;
  for (std::size_t i = 1; i < m; ++i) {
    const double r = grid_.r(i);
    if (euclid) {
      bg_[i].r = r;
      first_order_[i] = 3.0 / r;
      continue;
    }
    bg_[i] = background(lambda, r);
    const double coth = 1.0 / std::tanh(r);
    first_order_[i] = four_d ? 3.0 * coth : coth;
    inv_sinh2_[i] = 1.0 / (bg_[i].sinh_r * bg_[i].sinh_r);
  }
}

namespace {

void require_match(const EvolutionProblem& problem, const FieldState& state) {
  if (state.formulation != formulation_of(problem.equation())) {
    throw InvalidArgument(std::string("equation ") + to_string(problem.equation()) + " expects a " +
                          to_string(formulation_of(problem.equation())) + " state, got " +
                          to_string(state.formulation));
  }
  if (!(state.grid == problem.grid())) throw InvalidArgument("state grid differs from problem grid");
  if (state.f.size() != state.grid.size() || state.ft.size() != state.grid.size()) {
    throw InvalidArgument("state sample count does not match grid");
  }
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::vector<double> rhs(const EvolutionProblem& problem, const FieldState& state) {
  require_match(problem, state);
  if (!all_finite(state.f) || !all_finite(state.ft)) {
    throw NumericFailure("non-finite samples in state", state.t);
  }
  std::vector<double> out(state.grid.size());
  kernels::acceleration_parallel(problem, state.f, out);
  return out;
}

FieldState step_rk4(const EvolutionProblem& problem, const FieldState& state, double dt) {
  require_match(problem, state);
  const double dr = problem.grid().dr();
  if (!(dt > 0.0) || dt > dr * (1.0 + 1e-12)) {
    throw InvalidArgument("step_rk4: dt must lie in (0, dr]");
  }
  const std::size_t m = state.grid.size();
  const std::size_t n = m - 1;
  const bool odd = parity_of(state.formulation) == Parity::odd;
  const double outer = state.f[n];

  auto impose = [&](std::vector<double>& f, std::vector<double>& ft) {
    if (odd) {
      f[0] = 0.0;
      ft[0] = 0.0;
    }
    f[n] = outer;
    ft[n] = 0.0;
  };

  std::vector<double> f(m), ft(m), acc(m);
  std::vector<double> kf(m, 0.0), kv(m, 0.0);  // accumulated RK increments
  std::vector<double> sf = state.f, sv = state.ft;

  auto stage = [&](double weight) {
    if (!all_finite(sf) || !all_finite(sv)) {
      throw NumericFailure("non-finite values during RK4 stage", state.t);
    }
    kernels::acceleration_parallel(problem, sf, acc);
    for (std::size_t i = 0; i < m; ++i) {
      kf[i] += weight * sv[i];
      kv[i] += weight * acc[i];
    }
  };
  auto advance = [&](double c) {
    // stage input y + c dt k, using the derivative just computed (sv, acc).
    for (std::size_t i = 0; i < m; ++i) {
      const double nf = state.f[i] + c * dt * sv[i];
      const double nv = state.ft[i] + c * dt * acc[i];
      f[i] = nf;
      ft[i] = nv;
    }
    impose(f, ft);
    sf = f;
    sv = ft;
  };

  stage(1.0);
  advance(0.5);
  stage(2.0);
  advance(0.5);
  stage(2.0);
  advance(1.0);
  stage(1.0);

  FieldState out = state;
  for (std::size_t i = 0; i < m; ++i) {
    out.f[i] = state.f[i] + dt / 6.0 * kf[i];
    out.ft[i] = state.ft[i] + dt / 6.0 * kv[i];
  }
  impose(out.f, out.ft);
  if (!all_finite(out.f) || !all_finite(out.ft)) {
    throw NumericFailure("non-finite values after RK4 step", state.t);
  }
  out.t = state.t + dt;
  return out;
}

double support_radius(const FieldState& state, const TargetGeometry& geom, double tol) {
  const bool subtract_harmonic =
      state.formulation == Formulation::psi2d && geom.kind() == TargetKind::hyperbolic;
  double support = 0.0;
  for (std::size_t i = 0; i < state.grid.size(); ++i) {
    const double r = state.grid.r(i);
    const double base = subtract_harmonic ? p_lambda(state.lambda, r) : 0.0;
    if (std::fabs(state.f[i] - base) > tol || std::fabs(state.ft[i]) > tol) support = r;
  }
  return support;
}

CausalityReport check_causality(const FieldState& state, const TargetGeometry& geom,
                                const StepControl& control) {
  CausalityReport rep;
  rep.waived = control.waive_causality;
  rep.support = support_radius(state, geom);
  rep.required_r_max = rep.support + control.t_end + 2.0;
  rep.ok = state.grid.r_max() >= rep.required_r_max;
  return rep;
}

EvolveResult evolve(const EvolutionProblem& problem, FieldState state, const StepControl& control,
                    std::span<const Observer> observers) {
  require_match(problem, state);
  if (!(control.cfl > 0.0 && control.cfl <= 1.0)) throw InvalidArgument("cfl must lie in (0, 1]");
  if (!(control.t_end >= 0.0)) throw InvalidArgument("t_end must be nonnegative");
  if (control.output_stride < 1) throw InvalidArgument("output_stride must be positive");

  EvolveResult result;
  result.causality = check_causality(state, problem.geometry(), control);

  auto notify = [&](const FieldState& s) {
    for (const auto& obs : observers) obs(s);
  };
  notify(state);
  if (control.t_end == 0.0) {
    result.state = std::move(state);
    return result;
  }

  const double dr = problem.grid().dr();
  const auto steps =
      static_cast<std::size_t>(std::ceil(control.t_end / (control.cfl * dr) - 1e-9));
  const double dt = control.t_end / static_cast<double>(steps);
  const double t0 = state.t;
  const bool two_d = parity_of(state.formulation) == Parity::odd;
  const auto stride = static_cast<std::size_t>(control.output_stride);

  for (std::size_t k = 1; k <= steps; ++k) {
    FieldState next = step_rk4(problem, state, dt);
    next.t = t0 + static_cast<double>(k) * dt;
    if (two_d) {
      for (std::size_t i = 0; i + 1 < next.f.size(); ++i) {
        if (std::fabs(next.f[i + 1] - next.f[i]) > 1.0) {
          throw NumericFailure("gradient no longer resolved (|psi_r| dr > 1)", state.t);
        }
      }
    }
    state = std::move(next);
    if (k % stride == 0 || k == steps) notify(state);
  }
  result.state = std::move(state);
  result.steps = steps;
  result.dt = dt;
  return result;
}

FieldState rescale_to_euclidean(const FieldState& state, double scale, const RadialGrid& target) {
  if (state.formulation != Formulation::u4d) throw InvalidArgument("rescale_to_euclidean: need u4d state");
  if (!(scale >= 1.0)) throw InvalidArgument("rescale_to_euclidean: scale must be >= 1");
  FieldState out = zero_state(Formulation::v_euclidean4d, state.lambda, target);
  out.t = state.t * scale;
  const double limit = state.grid.r_max();
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double r = target.r(i) / scale;
    if (r > limit) continue;
    out.f[i] = interpolate(state.grid, state.f, Parity::even, r) / scale;
    out.ft[i] = interpolate(state.grid, state.ft, Parity::even, r) / (scale * scale);
  }
  return out;
}

FieldState rescale_to_euclidean(const FieldState& state, double scale) {
  return rescale_to_euclidean(state, scale, RadialGrid(state.grid.r_max() * scale, state.grid.n()));
}

FieldState concentrate_to_hyperbolic(const FieldState& state, double scale, double lambda,
                                     const RadialGrid& target) {
  if (state.formulation != Formulation::v_euclidean4d) {
    throw InvalidArgument("concentrate_to_hyperbolic: need v_euclidean4d state");
  }
  if (!(scale >= 1.0)) throw InvalidArgument("concentrate_to_hyperbolic: scale must be >= 1");
  FieldState out = zero_state(Formulation::u4d, lambda, target);
  out.t = state.t / scale;
  const double limit = state.grid.r_max();
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double r = target.r(i) * scale;
    if (r > limit) continue;
    out.f[i] = scale * interpolate(state.grid, state.f, Parity::even, r);
    out.ft[i] = scale * scale * interpolate(state.grid, state.ft, Parity::even, r);
  }
  return out;
}

}  // namespace hypwave
