#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "hypwave/errors.hpp"
#include "hypwave/evolve.hpp"

using namespace hypwave;

namespace {

FieldState bump(Formulation f, double lambda, const RadialGrid& g, double amp, double c, double w) {
  auto s = zero_state(Formulation::phi2d, lambda, g);
  for (std::size_t i = 0; i < g.size() - 1; ++i) {
    const double r = g.r(i);
    s.f[i] = amp * r * r * (std::exp(-(r - c) * (r - c) / (w * w)) - std::exp(-(r + c) * (r + c) / (w * w)));
  }
  if (f == Formulation::u4d) return lift_2d_to_4d(s);
  if (f == Formulation::psi2d) return to_psi2d(s);
  return s;
}

FieldState even_bump(Formulation f, double lambda, const RadialGrid& g, double amp, double w) {
  auto s = zero_state(f, lambda, g);
  for (std::size_t i = 0; i < g.size() - 1; ++i) s.f[i] = amp * std::exp(-g.r(i) * g.r(i) / (w * w));
  return s;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("equation names") {
  for (auto eq : {Equation::wm2d, Equation::perturbed2d, Equation::nonlinear4d, Equation::linear4d,
                  Equation::linear4d_free, Equation::euclidean4d}) {
    CHECK(parse_equation(to_string(eq)) == eq);
  }
  CHECK_THROWS_AS(parse_equation("heat"), InvalidArgument);
  CHECK(formulation_of(Equation::wm2d) == Formulation::psi2d);
  CHECK(formulation_of(Equation::perturbed2d) == Formulation::phi2d);
  CHECK(formulation_of(Equation::linear4d_free) == Formulation::u4d);
  CHECK(formulation_of(Equation::euclidean4d) == Formulation::v_euclidean4d);
}

TEST_CASE("stationary states") {
  const RadialGrid g(20.0, 4000);
  const EvolutionProblem pert(Equation::perturbed2d, hyperbolic_target(), 0.5, g);
  const auto acc = rhs(pert, zero_state(Formulation::phi2d, 0.5, g));
  for (double a : acc) CHECK(a == 0.0);

  // P_lambda solves the wave map equation up to truncation error, which away
  // from the origin is O(dr^2); next to r = 0 the coth r factor makes it O(dr^2 / r).
  auto residual = [](int n) {
    const RadialGrid h(20.0, n);
    const auto acc = rhs(EvolutionProblem(Equation::wm2d, hyperbolic_target(), 0.5, h), harmonic_map_state(0.5, h));
    double worst = 0.0;
    for (std::size_t i = h.nearest(0.5); i < h.size(); ++i) worst = std::max(worst, std::fabs(acc[i]));
    return worst;
  };
  const double e1 = residual(2000), e2 = residual(4000);
  CHECK(e2 < 4e-6);
  CHECK(e1 / e2 > 3.9);
}

TEST_CASE("wave map and perturbed equation agree") {
  const RadialGrid g(15.0, 3000);
  const double lambda = 0.4;
  const auto phi = bump(Formulation::phi2d, lambda, g, 0.3, 2.0, 0.8);
  const auto psi = to_psi2d(phi);
  const auto a_phi = rhs(EvolutionProblem(Equation::perturbed2d, hyperbolic_target(), lambda, g), phi);
  const auto a_psi = rhs(EvolutionProblem(Equation::wm2d, hyperbolic_target(), lambda, g), psi);
  const auto a_P = rhs(EvolutionProblem(Equation::wm2d, hyperbolic_target(), lambda, g), harmonic_map_state(lambda, g));
  // psi_tt = phi_tt exactly in the continuum; discretely they differ by the residual of P_lambda
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    CHECK(a_psi[i] - a_P[i] == doctest::Approx(a_phi[i]).epsilon(1e-6).scale(1e-5));
  }
}

TEST_CASE("perturbed 2d and nonlinear 4d evolutions agree") {
  const RadialGrid g(16.0, 3200);
  const double lambda = 0.3;
  const auto phi0 = bump(Formulation::phi2d, lambda, g, 0.2, 2.0, 0.8);
  StepControl c;
  c.t_end = 1.0;
  c.output_stride = 1000000;
  const auto a = evolve(EvolutionProblem(Equation::perturbed2d, hyperbolic_target(), lambda, g), phi0, c);
  const auto b = evolve(EvolutionProblem(Equation::nonlinear4d, hyperbolic_target(), lambda, g), lift_2d_to_4d(phi0), c);
  const auto b2 = lower_4d_to_2d(b.state);
  CHECK(max_diff(a.state.f, b2.f) < 1e-4);
  CHECK(max_diff(a.state.ft, b2.ft) < 1e-4);
}

TEST_CASE("energy conservation") {
  const RadialGrid g(20.0, 4000);
  SUBCASE("wave map") {
    const double lambda = 0.3;
    const EvolutionProblem p(Equation::wm2d, hyperbolic_target(), lambda, g);
    const auto s0 = bump(Formulation::psi2d, lambda, g, 0.2, 3.0, 0.8);
    StepControl c;
    c.t_end = 5.0;
    c.output_stride = 1000000;
    const auto res = evolve(p, s0, c);
    const double e0 = total_energy(s0, p.geometry());
    CHECK(std::fabs(total_energy(res.state, p.geometry()) - e0) / e0 < 1e-5);
  }
  SUBCASE("shifted linear equation") {
    // The measured energy moves by the O(dr^2) quadrature error only.
    auto drift = [](int n) {
      const RadialGrid h(20.0, n);
      const EvolutionProblem p(Equation::linear4d, hyperbolic_target(), 0.5, h);
      const auto s0 = even_bump(Formulation::u4d, 0.5, h, 1.0, 1.0);
      StepControl c;
      c.t_end = 4.0;
      c.output_stride = 1000000;
      const auto res = evolve(p, s0, c);
      const double e0 = linear_energy_4d(s0, 0.5);
      return std::fabs(linear_energy_4d(res.state, 0.5) - e0) / std::fabs(e0);
    };
    const double d1 = drift(2000), d2 = drift(4000);
    CHECK(d2 < 4e-4);
    CHECK(d1 / d2 > 3.5);
  }
}

TEST_CASE("finite propagation speed") {
  const RadialGrid g(20.0, 4000);
  const EvolutionProblem p(Equation::perturbed2d, hyperbolic_target(), 0.3, g);
  auto s0 = bump(Formulation::phi2d, 0.3, g, 0.2, 3.0, 0.3);  // negligible beyond r = 5
  StepControl c;
  c.t_end = 4.0;
  c.output_stride = 1000000;
  const auto res = evolve(p, s0, c);
  for (std::size_t i = g.nearest(5.0 + 4.0 + 1.0); i < g.size(); ++i) {
    CHECK(std::fabs(res.state.f[i]) < 1e-9);
  }
}

TEST_CASE("time reversal") {
  const RadialGrid g(16.0, 1600);
  const EvolutionProblem p(Equation::nonlinear4d, hyperbolic_target(), 0.4, g);
  const auto s0 = lift_2d_to_4d(bump(Formulation::phi2d, 0.4, g, 0.3, 2.0, 0.8));
  StepControl c;
  c.t_end = 2.0;
  c.output_stride = 1000000;
  auto mid = evolve(p, s0, c).state;
  for (auto& v : mid.ft) v = -v;
  mid.t = 0.0;
  auto back = evolve(p, mid, c).state;
  for (auto& v : back.ft) v = -v;
  CHECK(max_diff(back.f, s0.f) < 1e-7);
  CHECK(max_diff(back.ft, s0.ft) < 1e-7);
}

TEST_CASE("self-convergence is second order") {
  const double lambda = 0.3;
  std::vector<FieldState> finals;
  for (int n : {400, 800, 1600}) {
    const RadialGrid g(10.0, n);
    const EvolutionProblem p(Equation::perturbed2d, hyperbolic_target(), lambda, g);
    StepControl c;
    c.t_end = 2.0;
    c.output_stride = 1000000;
    finals.push_back(evolve(p, bump(Formulation::phi2d, lambda, g, 0.2, 3.0, 0.8), c).state);
  }
  double e[2] = {0.0, 0.0};
  for (std::size_t i = 0; i <= 400; ++i) {
    e[0] = std::max(e[0], std::fabs(finals[0].f[i] - finals[1].f[2 * i]));
    e[1] = std::max(e[1], std::fabs(finals[1].f[2 * i] - finals[2].f[4 * i]));
  }
  const double order = std::log2(e[0] / e[1]);
  CHECK(order > 1.8);
  CHECK(order < 2.3);
}

TEST_CASE("stepper preconditions and failures") {
  const RadialGrid g(10.0, 200);
  const EvolutionProblem p(Equation::perturbed2d, hyperbolic_target(), 0.3, g);
  auto s = zero_state(Formulation::phi2d, 0.3, g);
  CHECK_THROWS_AS(step_rk4(p, s, 2.0 * g.dr()), InvalidArgument);
  CHECK_THROWS_AS(step_rk4(p, s, 0.0), InvalidArgument);
  CHECK_THROWS_AS(rhs(p, zero_state(Formulation::u4d, 0.3, g)), InvalidArgument);
  CHECK_THROWS_AS(rhs(p, zero_state(Formulation::phi2d, 0.3, RadialGrid(10.0, 100))), InvalidArgument);
  s.f[10] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(rhs(p, s), NumericFailure);
  StepControl c;
  c.t_end = 1.0;
  c.cfl = 1.5;
  CHECK_THROWS_AS(evolve(p, zero_state(Formulation::phi2d, 0.3, g), c), InvalidArgument);
}

TEST_CASE("observers and step count") {
  const RadialGrid g(10.0, 200);
  const EvolutionProblem p(Equation::linear4d_free, hyperbolic_target(), 0.0, g);
  StepControl c;
  c.t_end = 1.0;
  c.output_stride = 7;
  std::vector<double> times;
  const Observer obs[] = {[&](const FieldState& s) { times.push_back(s.t); }};
  const auto res = evolve(p, even_bump(Formulation::u4d, 0.0, g, 1.0, 1.0), c, obs);
  CHECK(res.steps == 40);
  CHECK(res.dt == doctest::Approx(0.025));
  CHECK(times.front() == 0.0);
  CHECK(times.back() == doctest::Approx(1.0));
  CHECK(times.size() == 1 + 40 / 7 + 1);
}

TEST_CASE("causality report") {
  const RadialGrid g(10.0, 1000);
  const auto s = bump(Formulation::psi2d, 0.3, g, 0.2, 2.0, 0.3);
  StepControl c;
  c.t_end = 3.0;
  const auto rep = check_causality(s, hyperbolic_target(), c);
  CHECK(rep.support > 2.5);
  CHECK(rep.support < 5.0);
  CHECK(rep.required_r_max == doctest::Approx(rep.support + 5.0));
  CHECK(rep.ok);
  c.t_end = 8.0;
  c.waive_causality = true;
  const auto bad = check_causality(s, hyperbolic_target(), c);
  CHECK(!bad.ok);
  CHECK(bad.waived);
}

TEST_CASE("parallel and serial kernels are bitwise identical") {
  const RadialGrid g(12.0, 3000);
  for (auto eq : {Equation::wm2d, Equation::perturbed2d, Equation::nonlinear4d, Equation::linear4d,
                  Equation::euclidean4d}) {
    const EvolutionProblem p(eq, hyperbolic_target(), 0.4, g);
    const auto f = formulation_of(eq);
    FieldState s = parity_of(f) == Parity::odd ? bump(f, 0.4, g, 0.3, 2.0, 0.8) : even_bump(f, 0.4, g, 0.7, 1.0);
    std::vector<double> a(g.size()), b(g.size());
    kernels::acceleration_serial(p, s.f, a);
    kernels::acceleration_parallel(p, s.f, b);
    CHECK(a == b);
  }
}

TEST_CASE("rescaling") {
  const RadialGrid g(4.0, 4000);
  auto u = even_bump(Formulation::u4d, 0.3, g, 1.0, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) u.ft[i] = g.r(i) * u.f[i];
  u.t = 0.5;
  const double L = 8.0;
  const RadialGrid e(32.0, 4000);  // node aligned: e.dr = L g.dr
  const auto v = rescale_to_euclidean(u, L, e);
  CHECK(v.formulation == Formulation::v_euclidean4d);
  CHECK(v.t == doctest::Approx(4.0));
  for (std::size_t i = 0; i < e.size(); i += 97) {
    CHECK(v.f[i] == doctest::Approx(u.f[i] / L).epsilon(1e-12));
    CHECK(v.ft[i] == doctest::Approx(u.ft[i] / (L * L)).epsilon(1e-12));
  }
  const auto round = concentrate_to_hyperbolic(v, L, 0.3, g);
  CHECK(max_diff(round.f, u.f) < 1e-12);
  CHECK(max_diff(round.ft, u.ft) < 1e-12);
  CHECK_THROWS_AS(rescale_to_euclidean(u, 0.5), InvalidArgument);
  CHECK_THROWS_AS(rescale_to_euclidean(lower_4d_to_2d(u), 2.0), InvalidArgument);

  // concentrating a Euclidean profile keeps its energy norm
  auto w = zero_state(Formulation::v_euclidean4d, 0.0, RadialGrid(8.0, 8000));
  for (std::size_t i = 0; i < w.grid.size(); ++i) w.f[i] = std::exp(-w.grid.r(i) * w.grid.r(i));
  const auto h = concentrate_to_hyperbolic(w, 16.0, 0.0, RadialGrid(0.5, 8000));
  const auto w2 = rescale_to_euclidean(h, 16.0, w.grid);
  CHECK(norm_energy_euclidean(w2) == doctest::Approx(norm_energy_euclidean(w)).epsilon(1e-6));
}
