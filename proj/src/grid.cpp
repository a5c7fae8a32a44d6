#include "hypwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypwave/errors.hpp"

namespace hypwave {

namespace {

void require_length(const RadialGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) {
    throw InvalidArgument("sample count " + std::to_string(samples.size()) +
                          " does not match grid size " + std::to_string(grid.size()));
  }
}

}  // namespace

RadialGrid::RadialGrid(double r_max, int n) : r_max_(r_max), n_(n), dr_(0.0) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw InvalidArgument("grid: r_max must be positive and finite");
  }
  if (n < 16) {
    throw InvalidArgument("grid: need at least 16 intervals, got " + std::to_string(n));
  }
  dr_ = r_max / n;
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r(i);
  return out;
}

std::size_t RadialGrid::nearest(double r) const noexcept {
  if (!(r > 0.0)) return 0;
  const double k = std::round(r / dr_);
  if (k >= n_) return static_cast<std::size_t>(n_);
  return static_cast<std::size_t>(k);
}

RadialGrid make_grid(double r_max, int n) { return RadialGrid(r_max, n); }

double weight(WeightKind kind, double r) {
  switch (kind) {
    case WeightKind::H2:
      return std::sinh(r);
    case WeightKind::H4: {
      const double s = std::sinh(r);
      return s * s * s;
    }
    case WeightKind::EUC2:
      return r;
    case WeightKind::EUC4:
      return r * r * r;
    case WeightKind::NONE:
      return 1.0;
  }
  return 1.0;
}

namespace {

std::vector<double> weighted(const RadialGrid& grid, std::span<const double> samples, WeightKind w) {
  std::vector<double> g(samples.size());
  // Singular weights vanish at the origin, so bounded samples contribute 0 there.
  g[0] = (w == WeightKind::NONE) ? samples[0] : 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) g[i] = samples[i] * weight(w, grid.r(i));
  return g;
}

}  // namespace

double integrate(const RadialGrid& grid, std::span<const double> samples, WeightKind w) {
  require_length(grid, samples);
  const auto g = weighted(grid, samples, w);
  const double h = grid.dr();
  const std::size_t n = static_cast<std::size_t>(grid.n());
  double sum = 0.0;
  if (n % 2 == 0) {
    for (std::size_t i = 0; i < n; i += 2) sum += g[i] + 4.0 * g[i + 1] + g[i + 2];
    return sum * h / 3.0;
  }
  for (std::size_t i = 0; i < n; ++i) sum += g[i] + g[i + 1];
  return sum * h / 2.0;
}

std::vector<double> cumulative_integral(const RadialGrid& grid, std::span<const double> samples,
                                        WeightKind w) {
  require_length(grid, samples);
  const auto g = weighted(grid, samples, w);
  const double h = grid.dr();
  const std::size_t n = static_cast<std::size_t>(grid.n());
  std::vector<double> c(n + 1, 0.0);
  if (n % 2 == 1) {
    for (std::size_t i = 0; i < n; ++i) c[i + 1] = c[i] + 0.5 * h * (g[i] + g[i + 1]);
    return c;
  }
  for (std::size_t i = 0; i < n; i += 2) {
    c[i + 1] = c[i] + h * (5.0 * g[i] + 8.0 * g[i + 1] - g[i + 2]) / 12.0;
    c[i + 2] = c[i] + h * (g[i] + 4.0 * g[i + 1] + g[i + 2]) / 3.0;
  }
  return c;
}

std::vector<double> d_dr(const RadialGrid& grid, std::span<const double> samples, Parity parity) {
  require_length(grid, samples);
  const std::size_t n = static_cast<std::size_t>(grid.n());
  const double h = grid.dr();
  std::vector<double> d(n + 1);
  const double ghost = parity == Parity::even ? samples[1] : -samples[1];
  d[0] = (samples[1] - ghost) / (2.0 * h);
  for (std::size_t i = 1; i < n; ++i) d[i] = (samples[i + 1] - samples[i - 1]) / (2.0 * h);
  d[n] = (3.0 * samples[n] - 4.0 * samples[n - 1] + samples[n - 2]) / (2.0 * h);
  return d;
}

double interpolate(const RadialGrid& grid, std::span<const double> samples, Parity parity, double r) {
  require_length(grid, samples);
  if (r < 0.0) {
    const double v = interpolate(grid, samples, parity, -r);
    return parity == Parity::even ? v : -v;
  }
  if (r > grid.r_max() * (1.0 + 1e-12)) throw InvalidArgument("interpolate: r outside grid");
  const long n = grid.n();
  const double h = grid.dr();
  long j = static_cast<long>(std::floor(r / h));
  j = std::clamp(j, 0L, n - 1);
  long first = std::min(j - 1, n - 3);
  auto value = [&](long k) {
    if (k >= 0) return samples[static_cast<std::size_t>(k)];
    const double mirrored = samples[static_cast<std::size_t>(-k)];
    return parity == Parity::even ? mirrored : -mirrored;
  };
  const double x = r / h;
  double out = 0.0;
  for (long a = first; a < first + 4; ++a) {
    double basis = 1.0;
    for (long b = first; b < first + 4; ++b) {
      if (b != a) basis *= (x - static_cast<double>(b)) / static_cast<double>(a - b);
    }
    out += basis * value(a);
  }
  return out;
}

}  // namespace hypwave
