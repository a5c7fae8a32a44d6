#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hypwave/diagnostics.hpp"
#include "hypwave/errors.hpp"

using namespace hypwave;

namespace {

FieldState sphere_bubble(const RadialGrid& g, double mu) {
  auto s = zero_state(Formulation::psi2d, 0.0, g);
  for (std::size_t i = 0; i < g.size(); ++i) s.f[i] = 2.0 * std::atan(g.r(i) / mu);
  return s;
}

FieldState perturbed(double lambda, const RadialGrid& g, double amp) {
  auto s = harmonic_map_state(lambda, g);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double r = g.r(i);
    s.f[i] += amp * r * r * std::exp(-(r - 2.0) * (r - 2.0));
    s.ft[i] = amp * r * std::exp(-(r - 2.0) * (r - 2.0));
  }
  return s;
}

}  // namespace

TEST_CASE("local energy is additive and matches the total") {
  const RadialGrid g(12.0, 2400);
  const auto s = perturbed(0.3, g, 0.2);
  const auto geom = hyperbolic_target();
  const double e01 = local_energy(s, geom, 0.0, 1.0).value;
  const double e13 = local_energy(s, geom, 1.0, 3.0).value;
  const double e03 = local_energy(s, geom, 0.0, 3.0).value;
  CHECK(e01 + e13 == doctest::Approx(e03).epsilon(1e-14));
  CHECK(local_energy(s, geom, 0.0, 12.0).value == doctest::Approx(total_energy(s, geom)).epsilon(1e-14));
  const auto snapped = local_energy(s, geom, 0.0012, 2.9987);
  CHECK(snapped.snap_distance == doctest::Approx(0.0013).epsilon(1e-6));
  CHECK_THROWS_AS(local_energy(s, geom, 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(local_energy(to_phi2d(s), geom, 0.0, 1.0), InvalidArgument);

  const std::pair<double, double> annuli[] = {{0.0, 1.0}, {1.0, 3.0}};
  const auto rep = energy_report(s, geom, annuli);
  CHECK(rep.local.size() == 2);
  CHECK(rep.kinetic > 0.0);
  CHECK(rep.kinetic < rep.total);
}

TEST_CASE("self-similar energy and concentration scale") {
  const RadialGrid g(5.0, 5000);
  const auto geom = sphere_target();
  const auto s = sphere_bubble(g, 0.05);
  // the bubble carries energy 2 (sphere, equivariance class 1) mostly inside r ~ few mu
  const double cone = local_energy(s, geom, 0.0, 1.0).value;
  CHECK(self_similar_energy(s, geom, 1.0, 0.5) < 0.05 * cone);
  CHECK(self_similar_energy(s, geom, 1e-5, 0.5) == 0.0);
  CHECK_THROWS_AS(self_similar_energy(s, geom, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(self_similar_energy(s, geom, 0.0, 0.5), InvalidArgument);
  const double half = concentration_scale(s, geom, 1.0, 0.5);
  CHECK(half > 0.02);
  CHECK(half < 0.1);
  CHECK_THROWS_AS(concentration_scale(zero_state(Formulation::psi2d, 0.0, g), geom, 1.0, 0.5), UndefinedScale);
}

TEST_CASE("bubble scale and comparison") {
  const RadialGrid g(5.0, 10000);
  const auto geom = sphere_target();
  const auto s = sphere_bubble(g, 0.1);
  const double mu = bubble_scale(s);
  CHECK(mu == doctest::Approx(0.1).epsilon(1e-4));
  CHECK(bubble_compare(s, geom, mu) < 1e-4);
  CHECK(bubble_compare(s, geom, 2.0 * mu) > 0.05);
  CHECK(bubble_compare(zero_state(Formulation::psi2d, 0.0, g), geom, 0.1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(bubble_compare(s, hyperbolic_target(), mu), InvalidArgument);
  CHECK_THROWS_AS(bubble_scale(zero_state(Formulation::psi2d, 0.0, g)), UndefinedScale);
}

TEST_CASE("cone kinetic energy and its time average") {
  const RadialGrid g(4.0, 400);
  auto s = zero_state(Formulation::psi2d, 0.0, g);
  for (auto& v : s.ft) v = 1.0;
  // int_0^{T} sinh r dr with T = 2
  CHECK(cone_kinetic_energy(s, 2.0) == doctest::Approx(std::cosh(2.0) - 1.0).epsilon(1e-8));
  const FieldState one[] = {s};
  CHECK(kinetic_time_average(one, 2.0) == cone_kinetic_energy(s, 2.0));
  auto later = s;
  later.t = 1.0;
  const FieldState two[] = {s, later};
  const double avg = 0.5 * (cone_kinetic_energy(s, 2.0) + cone_kinetic_energy(later, 2.0));
  CHECK(kinetic_time_average(two, 2.0) == doctest::Approx(avg));
  const FieldState backwards[] = {later, s};
  CHECK_THROWS_AS(kinetic_time_average(backwards, 2.0), InvalidArgument);

  const double mus[] = {0.5};
  const auto d = cone_diagnostics(two, sphere_target(), 2.0, mus);
  CHECK(d.time_to_blowup == doctest::Approx(1.0));
  CHECK(d.self_similar_energy.size() == 1);
}

TEST_CASE("scattering indicators") {
  const RadialGrid g(12.0, 2400);
  auto P = harmonic_map_state(0.3, g);
  P.t = 4.0;
  const auto zero = scattering_indicators(P, 0.3);
  CHECK(zero.interior_residual == 0.0);
  CHECK(zero.l4_norm_fourth == 0.0);

  auto s = perturbed(0.3, g, 0.1);
  s.t = 8.0;
  const auto a = scattering_indicators(s, 0.3);
  CHECK(a.interior_residual > 0.0);
  CHECK(a.morawetz_accumulated == 0.0);
  auto s2 = s;
  s2.t = 9.0;
  const auto b = scattering_indicators(s2, 0.3, a);
  CHECK(b.morawetz_accumulated == doctest::Approx(a.l4_norm_fourth));
  CHECK(b.s_norm_accumulated == doctest::Approx(a.l6_norm_cubed));
  CHECK_THROWS_AS(scattering_indicators(s, 0.5), ClassMismatch);
  CHECK_THROWS_AS(scattering_indicators(s, 0.3, b), InvalidArgument);

  // |u|^4 sinh^3 r with u = phi / sinh r
  const auto phi = to_phi2d(s);
  std::vector<double> dens(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double u = phi.f[i] / std::sinh(g.r(i));
    dens[i] = u * u * u * u;
  }
  CHECK(a.l4_norm_fourth == doctest::Approx(integrate(g, dens, WeightKind::H4)).epsilon(1e-12));
}
