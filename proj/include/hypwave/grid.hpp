#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hypwave {

/// Uniform mesh r_i = i * dr on [0, r_max] with n intervals (n + 1 nodes).
class RadialGrid {
 public:
  RadialGrid(double r_max, int n);

  double r_max() const noexcept { return r_max_; }
  int n() const noexcept { return n_; }
  double dr() const noexcept { return dr_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) + 1; }

  /// Node position; the last node is exactly r_max.
  double r(std::size_t i) const noexcept {
    return i == static_cast<std::size_t>(n_) ? r_max_ : static_cast<double>(i) * dr_;
  }
  std::vector<double> nodes() const;

  /// Index of the node nearest to r (clamped to the grid).
  std::size_t nearest(double r) const noexcept;

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;

 private:
  double r_max_;
  int n_;
  double dr_;
};

RadialGrid make_grid(double r_max, int n);

enum class WeightKind { H2, H4, EUC2, EUC4, NONE };

/// w(r) for the radial measure: sinh r, sinh^3 r, r, r^3 or 1.
double weight(WeightKind kind, double r);

enum class Parity { even, odd };

/// Composite Simpson (even n) or trapezoid (odd n) for int_0^{r_max} f w dr.
double integrate(const RadialGrid& grid, std::span<const double> samples, WeightKind w);

/// Running integral C_i = int_0^{r_i} f w dr.  C_n equals integrate(); even
/// indices carry the composite Simpson partial sums, odd indices add the
/// integral of the local quadratic interpolant over the half panel.
std::vector<double> cumulative_integral(const RadialGrid& grid, std::span<const double> samples,
                                        WeightKind w);

/// Central differences inside, parity ghost node at r = 0 and a one-sided
/// second-order stencil at r_max.
std::vector<double> d_dr(const RadialGrid& grid, std::span<const double> samples, Parity parity);

/// Cubic Lagrange interpolation on the four nodes around r, with ghost
/// values from the declared parity near r = 0.
double interpolate(const RadialGrid& grid, std::span<const double> samples, Parity parity, double r);

}  // namespace hypwave
