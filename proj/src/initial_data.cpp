#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypwave/cli.hpp"
#include "hypwave/errors.hpp"

namespace hypwave::cli {

double bump_profile(const InitialData& d, double r) {
  const double x = r / d.sigma;
  const double c = d.center / d.sigma;
  return d.amplitude * x * x * (std::exp(-(x - c) * (x - c)) - std::exp(-(x + c) * (x + c)));
}

double bump_profile_dr(const InitialData& d, double r) {
  const double x = r / d.sigma;
  const double c = d.center / d.sigma;
  const double em = std::exp(-(x - c) * (x - c));
  const double ep = std::exp(-(x + c) * (x + c));
  const double g = em - ep;
  const double dg = -2.0 * (x - c) * em + 2.0 * (x + c) * ep;
  return d.amplitude / d.sigma * (2.0 * x * g + x * x * dg);
}

FieldState initial_state(const RunConfig& c) {
  if (c.equation == Equation::euclidean4d) {
    throw InvalidArgument("initial data families live on the hyperbolic side; euclidean4d is not a run target");
  }
  if (c.target == TargetKind::sphere && c.equation != Equation::wm2d) {
    throw InvalidArgument("the sphere target is only available for wm2d");
  }
  const RadialGrid grid(c.r_max, c.n);
  auto phi = zero_state(Formulation::phi2d, c.lambda, grid);
  const auto& d = c.initial;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double r = grid.r(i);
    switch (d.family) {
      case Family::zero:
      case Family::static_map:
        break;
      case Family::bump:
        phi.f[i] = bump_profile(d, r);
        if (d.velocity == Velocity::incoming) phi.ft[i] = bump_profile_dr(d, r);
        if (d.velocity == Velocity::outgoing) phi.ft[i] = -bump_profile_dr(d, r);
        break;
      case Family::kinetic:
        phi.ft[i] = bump_profile(d, r);
        break;
    }
  }
  // The frozen outer node carries the background value exactly.
  phi.f.back() = 0.0;
  phi.ft.back() = 0.0;

  switch (formulation_of(c.equation)) {
    case Formulation::phi2d:
      return phi;
    case Formulation::u4d:
      return lift_2d_to_4d(phi);
    case Formulation::psi2d: {
      if (c.target == TargetKind::hyperbolic) return to_psi2d(phi);
      phi.formulation = Formulation::psi2d;
      return phi;
    }
    case Formulation::v_euclidean4d:
      break;
  }
  throw InvalidArgument("unsupported formulation");
}

EvolutionProblem make_problem(const RunConfig& c) {
  const TargetGeometry geom = c.target == TargetKind::hyperbolic ? hyperbolic_target() : sphere_target();
  return EvolutionProblem(c.equation, geom, c.lambda, RadialGrid(c.r_max, c.n));
}

StepControl make_control(const RunConfig& c) {
  StepControl s;
  s.cfl = c.cfl;
  s.t_end = c.t_end;
  s.output_stride = c.output_stride;
  s.waive_causality = c.waive_causality;
  return s;
}

double conserved_energy(const EvolutionProblem& problem, const FieldState& state) {
  switch (problem.equation()) {
    case Equation::wm2d:
      return total_energy(state, problem.geometry());
    case Equation::perturbed2d:
    case Equation::nonlinear4d:
      return total_energy(to_psi2d(state), hyperbolic_target());
    case Equation::linear4d:
      return linear_energy_4d(state, problem.lambda());
    case Equation::linear4d_free:
      return linear_energy_4d(state, 0.0);
    case Equation::euclidean4d:
      return euclidean_energy(state);
  }
  return 0.0;
}

std::string checkpoint_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "checkpoint_%.6f.txt", t);
  return buf;
}

void write_checkpoint(const std::filesystem::path& path, const FieldState& s) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  char buf[128];
  out << "# formulation " << to_string(s.formulation) << "\n";
  std::snprintf(buf, sizeof buf, "# lambda %.17g\n# t %.17g\n# n r_max %d %.17g\n", s.lambda, s.t, s.grid.n(),
                s.grid.r_max());
  out << buf;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", s.grid.r(i), s.f[i], s.ft[i]);
    out << buf;
  }
}

FieldState read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::string line, form;
  double lambda = 0.0, t = 0.0, r_max = 0.0;
  int n = 0;
  auto header = [&](const char* tag) {
    if (!std::getline(in, line) || line.rfind(tag, 0) != 0) {
      throw InvalidArgument("checkpoint header: expected " + std::string(tag));
    }
    return std::istringstream(line.substr(std::string(tag).size()));
  };
  header("# formulation") >> form;
  header("# lambda") >> lambda;
  header("# t") >> t;
  header("# n r_max") >> n >> r_max;
  Formulation f = Formulation::psi2d;
  bool known = false;
  for (auto cand : {Formulation::psi2d, Formulation::phi2d, Formulation::u4d, Formulation::v_euclidean4d}) {
    if (form == to_string(cand)) {
      f = cand;
      known = true;
    }
  }
  if (!known) throw InvalidArgument("checkpoint: unknown formulation " + form);
  auto s = zero_state(f, lambda, RadialGrid(r_max, n));
  s.t = t;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    double r = 0.0;
    if (!(in >> r >> s.f[i] >> s.ft[i])) throw InvalidArgument("checkpoint: truncated node data");
  }
  return s;
}

}  // namespace hypwave::cli
