#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hypwave/errors.hpp"
#include "hypwave/grid.hpp"

using namespace hypwave;

namespace {

std::vector<double> sample(const RadialGrid& g, auto f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.r(i));
  return v;
}

}  // namespace

TEST_CASE("grid construction") {
  const RadialGrid g(3.0, 30);
  CHECK(g.size() == 31);
  CHECK(g.dr() == doctest::Approx(0.1));
  CHECK(g.r(30) == 3.0);
  CHECK(g.r(0) == 0.0);
  CHECK(g.nearest(1.04) == 10);
  CHECK(g.nearest(-1.0) == 0);
  CHECK(g.nearest(100.0) == 30);
  CHECK_THROWS_AS(RadialGrid(0.0, 30), InvalidArgument);
  CHECK_THROWS_AS(RadialGrid(1.0, 15), InvalidArgument);
  CHECK(make_grid(3.0, 30) == g);
}

TEST_CASE("Simpson is exact for cubics and trapezoid for lines") {
  const RadialGrid even(2.0, 16);
  CHECK(integrate(even, sample(even, [](double r) { return r * r * r - r + 1.0; }), WeightKind::NONE) ==
        doctest::Approx(4.0 - 2.0 + 2.0).epsilon(1e-14));
  const RadialGrid odd(2.0, 17);
  CHECK(integrate(odd, sample(odd, [](double r) { return 3.0 * r + 1.0; }), WeightKind::NONE) ==
        doctest::Approx(8.0).epsilon(1e-14));
  // int_0^2 r * r^2 dr with the Euclidean 4d weight r^3 on f = 1 is 4
  CHECK(integrate(even, sample(even, [](double) { return 1.0; }), WeightKind::EUC4) ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("weighted quadrature against closed forms") {
  const RadialGrid g(3.0, 600);
  const auto one = sample(g, [](double) { return 1.0; });
  CHECK(integrate(g, one, WeightKind::H2) == doctest::Approx(std::cosh(3.0) - 1.0).epsilon(1e-10));
  // int sinh^3 = cosh^3/3 - cosh
  const double c = std::cosh(3.0);
  CHECK(integrate(g, one, WeightKind::H4) == doctest::Approx(c * c * c / 3.0 - c + 2.0 / 3.0).epsilon(1e-9));
  CHECK(integrate(g, one, WeightKind::EUC2) == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(weight(WeightKind::H2, 1.0) == doctest::Approx(std::sinh(1.0)));
}

TEST_CASE("Simpson refinement on a Gaussian") {
  const double exact = 0.5 * std::sqrt(M_PI) * std::erf(5.0);
  auto err = [&](int n) {
    const RadialGrid g(5.0, n);
    return std::fabs(integrate(g, sample(g, [](double r) { return std::exp(-r * r); }), WeightKind::NONE) - exact);
  };
  const double e1 = err(40), e2 = err(80);
  CHECK(e1 / e2 >= 8.0);
  CHECK(e2 < 1e-7);
}

TEST_CASE("cumulative integral") {
  const RadialGrid g(2.0, 40);
  const auto f = sample(g, [](double r) { return r * r; });
  const auto c = cumulative_integral(g, f, WeightKind::NONE);
  CHECK(c.front() == 0.0);
  CHECK(c.back() == doctest::Approx(integrate(g, f, WeightKind::NONE)).epsilon(1e-15));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double r = g.r(i);
    CHECK(c[i] == doctest::Approx(r * r * r / 3.0).epsilon(1e-13));
  }
  const RadialGrid odd(2.0, 41);
  const auto fo = sample(odd, [](double r) { return std::exp(-r); });
  const auto co = cumulative_integral(odd, fo, WeightKind::H2);
  CHECK(co.back() == doctest::Approx(integrate(odd, fo, WeightKind::H2)).epsilon(1e-14));
  for (std::size_t i = 1; i < co.size(); ++i) CHECK(co[i] > co[i - 1]);
}

TEST_CASE("derivatives") {
  const RadialGrid g(2.0, 40);
  const auto quad = sample(g, [](double r) { return 2.0 * r * r + 3.0; });
  const auto d = d_dr(g, quad, Parity::even);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == doctest::Approx(4.0 * g.r(i)).epsilon(1e-12));
  const auto odd = sample(g, [](double r) { return r * r * r - 2.0 * r; });
  const auto dodd = d_dr(g, odd, Parity::odd);
  CHECK(dodd[0] == doctest::Approx(-2.0 + g.dr() * g.dr()).epsilon(1e-13));  // central stencil of r^3
  CHECK(dodd[10] == doctest::Approx(3.0 * g.r(10) * g.r(10) - 2.0 + g.dr() * g.dr()).epsilon(1e-12));
  CHECK_THROWS_AS(d_dr(g, std::vector<double>(5), Parity::odd), InvalidArgument);
}

TEST_CASE("interpolation") {
  const RadialGrid g(2.0, 40);
  const auto even = sample(g, [](double r) { return r * r - 1.0; });
  const auto odd = sample(g, [](double r) { return r * r * r + r; });
  for (double r : {0.0, 0.013, 0.07, 0.9123, 1.99}) {
    CHECK(interpolate(g, even, Parity::even, r) == doctest::Approx(r * r - 1.0).epsilon(1e-13));
    CHECK(interpolate(g, odd, Parity::odd, r) == doctest::Approx(r * r * r + r).epsilon(1e-13));
  }
  CHECK(interpolate(g, odd, Parity::odd, -0.3) == doctest::Approx(-(0.027 + 0.3)).epsilon(1e-13));
  CHECK(interpolate(g, even, Parity::even, -0.3) == doctest::Approx(0.09 - 1.0).epsilon(1e-13));
}

TEST_CASE("quadrature is linear in the samples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const RadialGrid g(4.0, 64);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(g.size()), b(g.size()), s(g.size());
    const double alpha = u(rng);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      s[i] = alpha * a[i] + b[i];
    }
    for (auto w : {WeightKind::H2, WeightKind::H4, WeightKind::NONE}) {
      const double lhs = integrate(g, s, w);
      const double rhs = alpha * integrate(g, a, w) + integrate(g, b, w);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    }
  }
}
