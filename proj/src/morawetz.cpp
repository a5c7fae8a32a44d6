#include "hypwave/morawetz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "hypwave/errors.hpp"

namespace hypwave::morawetz {

double multiplier_a_r(double r) {
  if (r < 0.0) throw InvalidArgument("multiplier_a_r: r must be nonnegative");
  return std::tanh(0.5 * r);
}

double multiplier_a_rr(double r) {
  const double c = std::cosh(0.5 * r);
  return 0.5 / (c * c);
}

double two_coth_a_r(double r) {
  if (r < 0.0) throw InvalidArgument("two_coth_a_r: r must be nonnegative");
  if (r == 0.0) return 1.0;
  return 2.0 * std::tanh(0.5 * r) / std::tanh(r);
}

BoundsReport multiplier_bounds_check(const RadialGrid& grid) {
  BoundsReport rep;
  rep.min_a_r = rep.min_one_minus_a_r = rep.min_lower = rep.min_upper =
      std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    const double a = multiplier_a_r(r);
    const double ac = 0.5 * two_coth_a_r(r);
    rep.min_a_r = std::min(rep.min_a_r, a);
    rep.min_one_minus_a_r = std::min(rep.min_one_minus_a_r, 1.0 - a);
    if (ac - 0.5 < rep.min_lower) {
      rep.min_lower = ac - 0.5;
      rep.argmin_lower = r;
    }
    if (1.0 - ac < rep.min_upper) {
      rep.min_upper = 1.0 - ac;
      rep.argmin_upper = r;
    }
  }
  rep.pass = rep.min_a_r >= 0.0 && rep.min_one_minus_a_r >= 0.0 && rep.min_lower >= 0.0 &&
             rep.min_upper >= 0.0;
  return rep;
}

namespace {

void require_phi(const FieldState& s, const char* op) {
  if (s.formulation != Formulation::phi2d) {
    throw InvalidArgument(std::string(op) + ": expected a phi2d state");
  }
}

}  // namespace

double virial(const FieldState& state) {
  require_phi(state, "virial");
  const auto d = d_dr(state.grid, state.f, Parity::odd);
  std::vector<double> g(state.grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = state.ft[i] * (multiplier_a_r(state.grid.r(i)) * d[i] + 0.5 * state.f[i]);
  }
  return integrate(state.grid, g, WeightKind::H2);
}

double I_functional(const FieldState& state, double lambda) {
  require_phi(state, "I_functional");
  require_lambda(lambda);
  std::vector<double> g(state.grid.size(), 0.0);  // every line vanishes at r = 0 since phi(0) = 0
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double r = state.grid.r(i);
    const double phi = state.f[i];
    const double P = p_lambda(lambda, r);
    const double c2P = std::cosh(2.0 * P);
    const double s2P = std::sinh(2.0 * P);
    const double q = std::sinh(P) / std::cosh(r);
    const double K = two_coth_a_r(r);
    const double A = cosh_m1(2.0 * phi);
    const double B = sinh_minus_id(2.0 * phi);
    const double S = std::sinh(2.0 * phi);
    const double line1 = c2P * S * phi + s2P * A * phi;
    const double line2 = -(c2P * A + s2P * B);
    const double line3 = (c2P * A + s2P * B) * K;
    const double line4 = -(s2P * q * A) * K;
    const double line5 = -(c2P * q * B) * K;
    g[i] = (line1 + line2 + line3 + line4 + line5) / std::sinh(r);
  }
  return integrate(state.grid, g, WeightKind::NONE);
}

double virial_rhs(const FieldState& state, double lambda) {
  require_phi(state, "virial_rhs");
  const auto d = d_dr(state.grid, state.f, Parity::odd);
  std::vector<double> g(state.grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = multiplier_a_rr(state.grid.r(i)) * d[i] * d[i];
  return -integrate(state.grid, g, WeightKind::H2) - 0.25 * I_functional(state, lambda);
}

VirialCheck virial_identity_residual(const EvolutionProblem& problem, const FieldState& state,
                                     double cfl) {
  if (problem.equation() != Equation::perturbed2d) {
    throw InvalidArgument("virial_identity_residual: needs a perturbed2d problem");
  }
  const double dt = cfl * problem.grid().dr();
  const FieldState mid = step_rk4(problem, state, dt);
  const FieldState end = step_rk4(problem, mid, dt);
  VirialCheck out;
  out.derivative = (virial(end) - virial(state)) / (2.0 * dt);
  out.rhs = virial_rhs(mid, problem.lambda());
  out.residual = std::fabs(out.derivative - out.rhs);
  return out;
}

double density(double lambda, double r, double phi) {
  if (!(r > 0.0)) throw InvalidArgument("density: r must be positive");
  const double P = p_lambda(lambda, r);
  const double t2 = std::tanh(2.0 * P);
  const double q = std::sinh(P) / std::cosh(r);
  const double K = two_coth_a_r(r);
  const double A = cosh_m1(2.0 * phi);
  const double B = sinh_minus_id(2.0 * phi);
  const double S = std::sinh(2.0 * phi);
  return S * phi + t2 * A * phi - A - t2 * B + (A + t2 * B) * K - (t2 * q * A + q * B) * K;
}

double c_lambda(double lambda) {
  require_lambda(lambda);
  // 1 - tanh(4 artanh l) = 2 (1-l)^4 / ((1+l)^4 + (1-l)^4)
  const double p = std::pow(1.0 + lambda, 4);
  const double m = std::pow(1.0 - lambda, 4);
  return (2.0 / 3.0) * (2.0 * m / (p + m));
}

double c_lambda_naive(double lambda) {
  require_lambda(lambda);
  return (2.0 / 3.0) * (1.0 - std::tanh(4.0 * std::atanh(lambda)));
}

double Q_polynomial(double s, double lambda) {
  const double l2 = lambda * lambda;
  return (((-l2 * s + 2.0 * lambda) * s + (1.0 - 0.25 * l2)) * s - 2.0 * lambda) * s + 0.25;
}

double Q_factored(double s, double lambda) {
  return (0.25 + s * s) * (1.0 - lambda * lambda * s * s) - 2.0 * lambda * s * (1.0 - s * s);
}

double dQ_ds(double s, double lambda) {
  const double l2 = lambda * lambda;
  return ((-4.0 * l2 * s + 6.0 * lambda) * s + 2.0 * (1.0 - 0.25 * l2)) * s - 2.0 * lambda;
}

double dQ_dlambda(double s, double lambda) {
  const double s2 = s * s;
  return -2.0 * lambda * s2 * (0.25 + s2) - 2.0 * s * (1.0 - s2);
}

InnerMinimum min_Q(double lambda, int scan_points) {
  if (scan_points < 4) throw InvalidArgument("min_Q: need at least 4 scan points");
  InnerMinimum best{0.0, Q_polynomial(0.0, lambda)};
  int k_best = 0;
  for (int k = 1; k <= scan_points; ++k) {
    const double s = static_cast<double>(k) / scan_points;
    const double v = Q_polynomial(s, lambda);
    if (v < best.value) {
      best = {s, v};
      k_best = k;
    }
  }
  // Refine on the stationary point bracketed by the neighbouring scan nodes.
  const double a0 = static_cast<double>(std::max(k_best - 1, 0)) / scan_points;
  const double b0 = static_cast<double>(std::min(k_best + 1, scan_points)) / scan_points;
  double a = a0, b = b0;
  double da = dQ_ds(a, lambda), db = dQ_ds(b, lambda);
  if (da <= 0.0 && db >= 0.0) {
    for (int it = 0; it < 200 && b - a > 0.0; ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      if (dQ_ds(m, lambda) < 0.0) {
        a = m;
      } else {
        b = m;
      }
    }
    for (double s : {a, b}) {
      const double v = Q_polynomial(s, lambda);
      if (v < best.value) best = {s, v};
    }
  }
  return best;
}

double max_dQ_dlambda(int points) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < points; ++i) {
    for (int j = 1; j < points; ++j) {
      const double s = static_cast<double>(i) / points;
      const double l = static_cast<double>(j) / points;
      worst = std::max(worst, dQ_dlambda(s, l));
    }
  }
  return worst;
}

LambdaEnclosure compute_Lambda(double tol, int scan_points) {
  if (!(tol > 0.0 && tol <= 1e-4)) throw InvalidArgument("compute_Lambda: tol must lie in (0, 1e-4]");
  auto m = [&](double l) { return min_Q(l, scan_points).value; };

  // Bisection needs lambda -> min_s Q nonincreasing; confirm it on a sample set.
  constexpr int kSamples = 50;
  double prev = m(0.5);
  for (int j = 1; j <= kSamples; ++j) {
    const double cur = m(0.5 + 0.25 * j / kSamples);
    if (cur > prev + 1e-15) {
      throw CertificationFailure("compute_Lambda: min_s Q(s, lambda) is not monotone in lambda");
    }
    prev = cur;
  }
  if (max_dQ_dlambda(200) > 0.0) {
    throw CertificationFailure("compute_Lambda: dQ/dlambda is positive somewhere on (0,1)^2");
  }

  LambdaEnclosure e;
  e.lo = 0.5;
  e.hi = 0.75;
  if (!(m(e.lo) >= 0.0) || !(m(e.hi) < 0.0)) {
    throw CertificationFailure("compute_Lambda: [0.5, 0.75] does not bracket the threshold");
  }
  while (e.hi - e.lo > tol) {
    const double mid = 0.5 * (e.lo + e.hi);
    if (m(mid) >= 0.0) {
      e.lo = mid;
    } else {
      e.hi = mid;
    }
    ++e.iterations;
  }
  e.m_lo = min_Q(e.lo, 10 * scan_points).value;
  e.m_hi = min_Q(e.hi, 10 * scan_points).value;
  if (!(e.m_lo >= 0.0) || !(e.m_hi < 0.0)) {
    throw CertificationFailure("compute_Lambda: enclosure not confirmed at 10x inner resolution");
  }
  return e;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "FAIL";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool InequalityRecord::conforms() const {
  switch (expectation) {
    case Expectation::must_hold:
      return status == Status::pass;
    case Expectation::must_fail:
      return status == Status::fail;
    case Expectation::unconstrained:
      return true;
  }
  return false;
}

namespace {

struct Point {
  double r = 0.0;
  double t2 = 0.0;  // tanh(2 P)
  double q = 0.0;   // sinh P / cosh r
  double K = 1.0;   // 2 coth r a_r
  double c = 0.0;   // c_lambda
};

Point make_point(double lambda, double r) {
  Point p;
  p.r = r;
  p.c = c_lambda(lambda);
  if (r > 0.0) {
    const double P = p_lambda(lambda, r);
    p.t2 = std::tanh(2.0 * P);
    p.q = std::sinh(P) / std::cosh(r);
    p.K = two_coth_a_r(r);
  }
  return p;
}

struct Terms {
  double A, B, S;  // cosh 2x - 1, sinh 2x - 2x, sinh 2x
};
Terms terms(double x) { return {cosh_m1(2.0 * x), sinh_minus_id(2.0 * x), std::sinh(2.0 * x)}; }

using MarginFn = double (*)(const Point&, double);

struct Inequality {
  const char* name;
  const char* domain;
  bool uses_r;
  bool uses_phi;
  bool phi_nonneg;
  MarginFn margin;
  MarginFn normalizer;  // known nonnegative factor that vanishes on equality cases
};

// Case 2 inequalities are written in phi = -varphi > 0.
const Inequality kInequalities[] = {
    {"pos1", "phi in [-5,5]", false, true, false,
     [](const Point&, double x) {
       const auto t = terms(x);
       return t.S * x - t.A - (2.0 / 3.0) * x * x * x * x;
     },
     [](const Point&, double x) { return std::pow(x, 6); }},
    {"pos2", "r in (0,20], phi in [0,5]", true, true, true,
     [](const Point& p, double x) {
       const auto t = terms(x);
       return p.t2 * (t.A * x - t.B);
     },
     [](const Point& p, double x) { return p.t2 * x * x * x; }},
    {"pos3", "r in (0,20], phi in [0,5]", true, true, true,
     [](const Point& p, double x) { return p.K * (1.0 - p.t2 * p.q) * cosh_m1(2.0 * x); },
     [](const Point& p, double x) { return p.K * cosh_m1(2.0 * x); }},
    {"pos4", "r in (0,20], phi in [0,5]", true, true, true,
     [](const Point& p, double x) { return p.K * (p.t2 - p.q) * sinh_minus_id(2.0 * x); },
     [](const Point& p, double x) { return p.K * p.t2 * sinh_minus_id(2.0 * x); }},
    {"neg1", "r in (0,20], -varphi in [0,5]", true, true, true,
     [](const Point& p, double x) {
       const auto t = terms(x);
       return (1.0 - p.t2) * (t.S * x - t.A) - p.c * x * x * x * x;
     },
     [](const Point&, double x) { return std::pow(x, 6); }},
    {"neg2", "r in (0,20], -varphi in [0,5]", true, true, true,
     [](const Point& p, double x) {
       const auto t = terms(x);
       return p.K * (1.0 - p.t2) * (t.A + p.q * t.B);
     },
     [](const Point& p, double x) { return p.K * (1.0 - p.t2) * x * x; }},
    {"neg3", "r in (0,20], -varphi in [0,5]", true, true, true,
     [](const Point& p, double x) {
       const auto t = terms(x);
       return p.t2 * ((t.S * x - t.A * x - t.A + t.B) + p.K * (1.0 - p.q) * (t.A - t.B));
     },
     [](const Point& p, double x) { return p.t2 * x * x; }},
    {"key", "r in (0,20]", true, false, false,
     [](const Point& p, double) { return p.K * (1.0 - p.q) - 0.75; },
     [](const Point&, double) { return 1.0; }},
    {"case2.3", "-varphi in [0,5]", false, true, true,
     [](const Point&, double x) {
       const double e = std::expm1(-2.0 * x);  // e^{-2x} - 1
       return -e * x - 0.25 * (e + 2.0 * x);
     },
     [](const Point&, double x) { return x * x; }},
    {"case2.3-derivative", "-varphi in [0,5]", false, true, true,
     [](const Point&, double x) { return -0.5 * std::expm1(-2.0 * x) + 2.0 * x * std::exp(-2.0 * x); },
     [](const Point&, double x) { return x; }},
    {"density", "r in (0,20], phi in [-5,5]", true, true, false,
     [](const Point& p, double x) {
       const auto t = terms(x);
       const double dens = t.S * x + p.t2 * t.A * x - t.A - p.t2 * t.B + (t.A + p.t2 * t.B) * p.K -
                           (p.t2 * p.q * t.A + p.q * t.B) * p.K;
       return dens - p.c * x * x * x * x;
     },
     [](const Point&, double x) { return x * x; }},
};

struct Extremum {
  double raw = std::numeric_limits<double>::infinity();
  double norm = std::numeric_limits<double>::infinity();
  double arg_r = 0.0;
  double arg_phi = 0.0;
  long normalized_points = 0;
};

void merge(Extremum& into, const Extremum& row) {
  into.raw = std::min(into.raw, row.raw);
  if (row.norm < into.norm) {
    into.norm = row.norm;
    into.arg_r = row.arg_r;
    into.arg_phi = row.arg_phi;
  }
  into.normalized_points += row.normalized_points;
}

Extremum scan_row(const Inequality& ineq, const Point& p, const ScanSettings& s) {
  Extremum ex;
  const int n = s.phi_points;
  const int k_lo = !ineq.uses_phi ? 0 : (ineq.phi_nonneg ? 0 : -n);
  const int k_hi = !ineq.uses_phi ? 0 : n;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double x = s.phi_max * static_cast<double>(k) / n;
    const double m = ineq.margin(p, x);
    ex.raw = std::min(ex.raw, m);
    const double w = ineq.normalizer(p, x);
    if (w > 0.0) {
      ++ex.normalized_points;
      const double v = m / w;
      if (v < ex.norm) {
        ex.norm = v;
        ex.arg_r = p.r;
        ex.arg_phi = x;
      }
    }
  }
  return ex;
}

Extremum scan(const Inequality& ineq, double lambda, const ScanSettings& s) {
  const int rows = ineq.uses_r ? s.r_points : 1;
  std::vector<Extremum> per_row(static_cast<std::size_t>(rows));
  auto row_point = [&](int j) {
    return ineq.uses_r ? make_point(lambda, s.r_max * static_cast<double>(j + 1) / s.r_points)
                       : make_point(lambda, 0.0);
  };
  if (s.parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (int j = 0; j < rows; ++j) per_row[static_cast<std::size_t>(j)] = scan_row(ineq, row_point(j), s);
  } else {
    for (int j = 0; j < rows; ++j) per_row[static_cast<std::size_t>(j)] = scan_row(ineq, row_point(j), s);
  }
  // Fixed reduction order keeps margins and arg-mins reproducible.
  Extremum total;
  for (const auto& row : per_row) merge(total, row);
  return total;
}

}  // namespace

std::vector<InequalityRecord> pointwise_inequalities_check(
    double lambda, const ScanSettings& settings, const std::optional<LambdaEnclosure>& enclosure) {
  require_lambda(lambda);
  if (settings.phi_points < 1 || settings.r_points < 1 || !(settings.phi_max > 0.0) ||
      !(settings.r_max > 0.0)) {
    throw InvalidArgument("pointwise_inequalities_check: invalid scan settings");
  }
  const LambdaEnclosure enc = enclosure ? *enclosure : compute_Lambda(1e-8);
  const bool above = lambda > enc.hi;
  const bool below = lambda <= enc.lo;

  std::vector<InequalityRecord> out;
  for (const auto& ineq : kInequalities) {
    const Extremum ex = scan(ineq, lambda, settings);
    InequalityRecord rec;
    rec.name = ineq.name;
    rec.domain = ineq.domain;
    rec.min_margin = ex.raw;
    rec.arg_r = ex.arg_r;
    rec.arg_phi = ex.arg_phi;
    if (ex.normalized_points == 0) {
      // e.g. every tanh(2P) factor vanishes at lambda = 0: the inequality reads 0 >= 0.
      rec.identity = true;
      rec.min_normalized = 0.0;
      rec.status = std::fabs(ex.raw) <= 1e-15 ? Status::pass : Status::fail;
    } else {
      rec.min_normalized = ex.norm;
      if (ex.norm >= kInconclusiveMargin) {
        rec.status = Status::pass;
      } else if (ex.norm <= -kInconclusiveMargin) {
        rec.status = Status::fail;
      } else {
        rec.status = Status::inconclusive;
      }
    }
    const std::string name = ineq.name;
    if (name == "key") {
      rec.expectation = below ? Expectation::must_hold
                              : (above ? Expectation::must_fail : Expectation::unconstrained);
    } else if ((name == "neg3" || name == "density") && !below) {
      rec.expectation = Expectation::unconstrained;
    }
    out.push_back(rec);
  }
  return out;
}

LowerBoundSampling I_lower_bound_sampling(double lambda, int samples, std::uint64_t seed) {
  require_lambda(lambda);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(0.5, 6.0), width(0.3, 1.5), amp(0.2, 3.0), coin(0.0, 1.0);
  const RadialGrid grid(20.0, 4000);
  const double c = c_lambda(lambda);
  LowerBoundSampling out;
  out.samples = samples;
  out.min_margin = out.min_relative_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    auto state = zero_state(Formulation::phi2d, lambda, grid);
    for (int b = 0; b < 3; ++b) {
      const double c0 = center(rng), sg = width(rng), sign = coin(rng) < 0.5 ? -1.0 : 1.0;
      for (std::size_t i = 1; i < grid.size(); ++i) {
        const double r = grid.r(i);
        const double x = r / sg;
        state.f[i] += sign * x * x *
                      (std::exp(-std::pow((r - c0) / sg, 2)) - std::exp(-std::pow((r + c0) / sg, 2)));
      }
    }
    double sup = 0.0;
    for (double v : state.f) sup = std::max(sup, std::fabs(v));
    const double target = amp(rng);
    for (double& v : state.f) v *= target / sup;

    std::vector<double> quartic(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) quartic[i] = std::pow(state.f[i], 4) / std::sinh(grid.r(i));
    const double rhs = c * integrate(grid, quartic, WeightKind::NONE);
    const double margin = I_functional(state, lambda) - rhs;
    out.min_margin = std::min(out.min_margin, margin);
    if (rhs > 0.0) out.min_relative_margin = std::min(out.min_relative_margin, margin / rhs);
  }
  out.pass = out.min_margin > 0.0;
  return out;
}

MorawetzCertificate build_certificate(double tol, double scan_lambda, const ScanSettings& settings) {
  MorawetzCertificate cert;
  cert.tol = tol;
  cert.enclosure = compute_Lambda(tol);
  for (double l : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.57716}) cert.c_table.emplace_back(l, c_lambda(l));
  cert.scan_lambda = scan_lambda;
  cert.inequality_scan = pointwise_inequalities_check(scan_lambda, settings, cert.enclosure);
  return cert;
}

std::string format_certificate(const MorawetzCertificate& cert) {
  std::ostringstream os;
  char buf[256];
  os << "# Morawetz positivity certificate\n";
  std::snprintf(buf, sizeof buf, "tolerance %.3e\n", cert.tol);
  os << buf;
  std::snprintf(buf, sizeof buf, "Lambda in [%.17g, %.17g]\n", cert.enclosure.lo, cert.enclosure.hi);
  os << buf;
  std::snprintf(buf, sizeof buf, "min_s Q(s, lo) = %.17g\nmin_s Q(s, hi) = %.17g\nbisection steps %d\n",
                cert.enclosure.m_lo, cert.enclosure.m_hi, cert.enclosure.iterations);
  os << buf;
  os << "\n# c_lambda = (2/3)(1 - tanh(4 artanh lambda))\n";
  for (const auto& [l, c] : cert.c_table) {
    std::snprintf(buf, sizeof buf, "c(%.5f) = %.17g\n", l, c);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "\n# pointwise inequalities at lambda = %.6g\n", cert.scan_lambda);
  os << buf;
  os << "# name status min_margin min_normalized arg_r arg_phi domain\n";
  for (const auto& rec : cert.inequality_scan) {
    std::snprintf(buf, sizeof buf, "%s %s %.17g %.17g %.17g %.17g %s%s\n", rec.name.c_str(),
                  to_string(rec.status), rec.min_margin, rec.min_normalized, rec.arg_r, rec.arg_phi,
                  rec.domain.c_str(), rec.identity ? " (identity)" : "");
    os << buf;
  }
  return os.str();
}

}  // namespace hypwave::morawetz
