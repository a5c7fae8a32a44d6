#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "hypwave/cli.hpp"
#include "hypwave/diagnostics.hpp"
#include "hypwave/errors.hpp"

namespace hypwave::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw InvalidArgument("cannot write " + p.string());
  return out;
}

FieldState as_u4d(const FieldState& s) {
  return s.formulation == Formulation::u4d ? s : lift_2d_to_4d(to_phi2d(s));
}

FieldState as_psi(const FieldState& s) {
  if (s.formulation == Formulation::psi2d) return s;
  return to_psi2d(s);
}

}  // namespace

void apply_thread_env() {
  if (const char* env = std::getenv("HYPWAVE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
}

int cmd_simulate(const RunConfig& c, std::ostream& log) {
  std::optional<EvolutionProblem> problem;
  FieldState state;
  try {
    problem.emplace(make_problem(c));
    state = initial_state(c);
  } catch (const InvalidArgument& e) {
    log << "error: " << e.what() << "\n";
    return kUsage;
  }
  const fs::path out_dir(c.output_dir);
  fs::create_directories(out_dir);
  const TargetGeometry& geom = problem->geometry();
  const StepControl control = make_control(c);

  auto series = open_out(out_dir / "timeseries.csv");
  series << "t,total_energy,linear_energy_4d,interior_residual,s_norm_acc,morawetz_acc\n";
  std::optional<ScatteringIndicators> prev;
  FieldState last = state;
  double next_checkpoint = 0.0;

  Observer record = [&](const FieldState& s) {
    const FieldState psi = as_psi(s);
    const double energy = total_energy(psi, geom);
    const double lin = linear_energy_4d(as_u4d(s), c.lambda);
    prev = scattering_indicators(psi, c.lambda, prev);
    series << fmt17(s.t) << ',' << fmt17(energy) << ',' << fmt17(lin) << ',' << fmt17(prev->interior_residual)
           << ',' << fmt17(prev->s_norm_accumulated) << ',' << fmt17(prev->morawetz_accumulated) << '\n';
    if (s.t == 0.0 || (c.checkpoint_interval > 0.0 && s.t >= next_checkpoint - 1e-12)) {
      write_checkpoint(out_dir / checkpoint_name(s.t), s);
      if (c.checkpoint_interval > 0.0) {
        while (next_checkpoint <= s.t + 1e-12) next_checkpoint += c.checkpoint_interval;
      }
    }
    last = s;
  };

  auto meta = open_out(out_dir / "meta.txt");
  meta << format_config(c);
  const auto causality = check_causality(state, geom, control);
  meta << "# causality " << (causality.ok ? "ok" : (causality.waived ? "violated (waived)" : "violated"))
       << " support " << fmt17(causality.support) << " required_r_max " << fmt17(causality.required_r_max)
       << "\n";
  if (!causality.ok) {
    log << "warning: r_max " << c.r_max << " < support + t_end + 2 = " << causality.required_r_max
        << "; the outer boundary can influence the run\n";
  }

  const Observer observers[] = {record};
  try {
    const auto result = evolve(*problem, state, control, observers);
    series.flush();
    write_checkpoint(out_dir / checkpoint_name(result.state.t), result.state);
    meta << "# steps " << result.steps << " dt " << fmt17(result.dt) << "\n# status ok\n";
    log << "simulate: reached t = " << result.state.t << " in " << result.steps << " steps\n";
    return kOk;
  } catch (const NumericFailure& e) {
    series.flush();
    write_checkpoint(out_dir / checkpoint_name(last.t), last);
    auto report = open_out(out_dir / "blowup.txt");
    report << "failure_time " << fmt17(e.time()) << "\nreason " << e.what() << "\nlast_snapshot " << fmt17(last.t)
           << "\n";
    if (geom.kind() == TargetKind::sphere) {
      try {
        const FieldState psi = as_psi(last);
        const double mu = bubble_scale(psi);
        report << "bubble_scale " << fmt17(mu) << "\n";
        report << "bubble_distance " << fmt17(bubble_compare(psi, geom, mu)) << "\n";
      } catch (const std::exception& ex) {
        report << "bubble_scale undefined (" << ex.what() << ")\n";
      }
    }
    meta << "# status blow-up at t = " << fmt17(e.time()) << "\n";
    log << "simulate: numeric failure after t = " << e.time() << ": " << e.what() << "\n";
    return kBlowUp;
  }
}

int cmd_lambda_critical(double tol, const fs::path& out_dir, std::ostream& log) {
  if (!(tol >= 1e-10 && tol <= 1e-4)) {
    log << "error: --tol must lie in [1e-10, 1e-4]\n";
    return kUsage;
  }
  morawetz::MorawetzCertificate cert;
  try {
    cert = morawetz::build_certificate(tol, 0.5, morawetz::ScanSettings{});
  } catch (const CertificationFailure& e) {
    log << "certification failure: " << e.what() << "\n";
    return kCertification;
  }
  fs::create_directories(out_dir);
  auto out = open_out(out_dir / "certificate.txt");
  out << morawetz::format_certificate(cert);
  const auto& e = cert.enclosure;
  log << "Lambda in [" << fmt17(e.lo) << ", " << fmt17(e.hi) << "] width " << e.hi - e.lo << "\n";
  // The quoted value 0.57716... is a truncation: it names the interval [0.57716, 0.57717].
  const bool consistent = e.lo - 5e-6 <= 0.57717 && e.hi + 5e-6 >= 0.57716;
  if (!consistent) log << "enclosure is inconsistent with Lambda = 0.57716...\n";
  return consistent ? kOk : kAssertion;
}

int cmd_verify_morawetz(double lambda, bool expect_fail, const morawetz::ScanSettings& scan, int samples,
                        std::uint64_t seed, std::ostream& log) {
  using namespace morawetz;
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    log << "error: --lambda must lie in [0, 1)\n";
    return kUsage;
  }
  LambdaEnclosure enc;
  try {
    enc = compute_Lambda(1e-8);
  } catch (const CertificationFailure& e) {
    log << "certification failure: " << e.what() << "\n";
    return kCertification;
  }
  const auto recs = pointwise_inequalities_check(lambda, scan, enc);
  const auto lb = I_lower_bound_sampling(lambda, samples, seed);

  char buf[256];
  std::snprintf(buf, sizeof buf, "lambda %.6g, Lambda in [%.10f, %.10f]\n", lambda, enc.lo, enc.hi);
  log << buf;
  bool inconclusive = false, all_conform = true;
  const InequalityRecord* key = nullptr;
  for (const auto& r : recs) {
    std::snprintf(buf, sizeof buf, "%-20s %-12s margin %+.6e normalized %+.6e at r = %.4f, phi = %.4f%s\n",
                  r.name.c_str(), to_string(r.status), r.min_margin, r.min_normalized, r.arg_r, r.arg_phi,
                  r.identity ? " (identity)" : "");
    log << buf;
    if (r.status == Status::inconclusive && r.expectation != Expectation::unconstrained) inconclusive = true;
    if (!r.conforms()) all_conform = false;
    if (r.name == "key") key = &r;
  }
  std::snprintf(buf, sizeof buf, "I lower bound: %d samples, min margin %+.6e, min relative %+.6e\n", lb.samples,
                lb.min_margin, lb.min_relative_margin);
  log << buf;

  if (inconclusive) {
    log << "verdict: inconclusive margins\n";
    return kInconclusive;
  }
  if (lambda <= enc.lo) {
    if (expect_fail) {
      log << "verdict: expected failures did not occur (lambda is below Lambda)\n";
      return kAssertion;
    }
    const bool ok = all_conform && lb.pass;
    log << (ok ? "verdict: all inequalities hold\n" : "verdict: FAILURE\n");
    return ok ? kOk : kAssertion;
  }
  if (lambda > enc.hi) {
    const auto w = min_Q(lambda);
    std::snprintf(buf, sizeof buf, "witness: Q(%.6f, %.6g) = %+.6e; key inequality minimum at s = tanh(r/2) = %.6f\n",
                  w.s, lambda, w.value, std::tanh(0.5 * key->arg_r));
    log << buf;
    std::snprintf(buf, sizeof buf, "Q(1/2, %.6g) = %+.17g\n", lambda, Q_polynomial(0.5, lambda));
    log << buf;
    if (!expect_fail) {
      log << "verdict: FAILURE (key inequality violated; lambda exceeds Lambda)\n";
      return kAssertion;
    }
    log << (all_conform ? "verdict: expected failures reproduced\n" : "verdict: FAILURE\n");
    return all_conform ? kOk : kAssertion;
  }
  log << "verdict: lambda lies inside the Lambda enclosure\n";
  return kInconclusive;
}

int cmd_convergence(const RunConfig& c, int refinements, std::ostream& log) {
  if (!(c.t_end > 0.0)) {
    log << "error: convergence needs control.t_end > 0\n";
    return kUsage;
  }
  if (refinements < 2) {
    log << "error: --refinements must be at least 2\n";
    return kUsage;
  }
  std::vector<FieldState> finals;
  std::vector<double> drift;
  for (int k = 0; k <= refinements; ++k) {
    RunConfig ck = c;
    ck.n = c.n << k;
    try {
      const auto problem = make_problem(ck);
      const auto init = initial_state(ck);
      StepControl control = make_control(ck);
      control.output_stride = 1 << 30;
      const auto res = evolve(problem, init, control);
      drift.push_back(std::fabs(conserved_energy(problem, res.state) - conserved_energy(problem, init)));
      finals.push_back(res.state);
    } catch (const InvalidArgument& e) {
      log << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const NumericFailure& e) {
      log << "numeric failure at refinement " << k << ": " << e.what() << "\n";
      return kBlowUp;
    }
  }

  double scale = 0.0;
  for (double v : finals.back().f) scale = std::max(scale, std::fabs(v));
  std::vector<double> err;
  for (int k = 0; k < refinements; ++k) {
    double e = 0.0;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(c.n); ++i) {
      const std::size_t a = i << k, b = i << (k + 1);
      e = std::max(e, std::fabs(finals[k].f[a] - finals[k + 1].f[b]));
      e = std::max(e, std::fabs(finals[k].ft[a] - finals[k + 1].ft[b]));
    }
    err.push_back(e);
  }
  const double floor_level = 1e-12 * (1.0 + scale);
  const bool at_floor = std::all_of(err.begin(), err.end(), [&](double e) { return e <= floor_level; });

  fs::create_directories(c.output_dir);
  auto out = open_out(fs::path(c.output_dir) / "convergence.txt");
  out << "# n self_error energy_drift\n";
  for (int k = 0; k <= refinements; ++k) {
    out << (c.n << k) << ' ' << (k < refinements ? fmt17(err[k]) : std::string("-")) << ' ' << fmt17(drift[k])
        << '\n';
  }
  double min_order = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < refinements; ++k) {
    const double p = std::log2(err[k] / err[k + 1]);
    const double q = std::log2(drift[k] / drift[k + 1]);
    min_order = std::min(min_order, p);
    out << "order " << k << ' ' << fmt17(p) << " drift_order " << fmt17(q) << '\n';
    log << "refinement " << k << ": solution order " << p << ", energy drift order " << q << "\n";
  }
  if (at_floor) {
    out << "verdict floor\n";
    log << "errors at the roundoff floor (" << floor_level << "); order: floor\n";
    return kOk;
  }
  const bool ok = min_order >= 1.9;
  out << "verdict " << (ok ? "second-order" : "below-order") << "\n";
  log << "minimum observed order " << min_order << (ok ? " (>= 1.9)\n" : " (< 1.9)\n");
  return ok ? kOk : kAssertion;
}

int cmd_bubbling(const RunConfig& c, std::ostream& log) {
  if (c.target != TargetKind::sphere) {
    log << "error: bubbling needs the sphere target; hyperbolic-target wave maps are globally regular\n";
    return kUsage;
  }
  if (c.equation != Equation::wm2d) {
    log << "error: bubbling runs the wm2d equation\n";
    return kUsage;
  }
  std::optional<EvolutionProblem> problem;
  FieldState state;
  try {
    problem.emplace(make_problem(c));
    state = initial_state(c);
  } catch (const InvalidArgument& e) {
    log << "error: " << e.what() << "\n";
    return kUsage;
  }
  const fs::path out_dir(c.output_dir);
  fs::create_directories(out_dir);
  auto meta = open_out(out_dir / "meta.txt");
  meta << format_config(c);

  constexpr std::size_t kKeep = 5;
  std::deque<FieldState> history;
  const Observer keep = [&](const FieldState& s) {
    history.push_back(s);
    if (history.size() > kKeep) history.pop_front();
  };
  const Observer observers[] = {keep};
  double blowup_time = 0.0;
  try {
    evolve(*problem, state, make_control(c), observers);
    auto verdict = open_out(out_dir / "verdict.txt");
    verdict << "no concentration up to t = " << fmt17(c.t_end) << "\n";
    meta << "# status ok\n";
    log << "bubbling: no concentration up to t = " << c.t_end << "\n";
    return kOk;
  } catch (const NumericFailure& e) {
    // The failing step is the first unresolved one; take its end as the blow-up time.
    const double dt = c.t_end / std::ceil(c.t_end / (c.cfl * problem->grid().dr()) - 1e-9);
    blowup_time = e.time() + dt;
    meta << "# status blow-up at t = " << fmt17(e.time()) << "\n";
  }

  const std::vector<FieldState> snaps(history.begin(), history.end());
  const double mus[] = {0.25, 0.5, 0.75};
  auto csv = open_out(out_dir / "bubbling.csv");
  csv << "t,time_to_blowup,cone_energy,self_similar_0.25,self_similar_0.5,self_similar_0.75,kinetic_time_avg,"
         "concentration_scale,bubble_scale,bubble_distance\n";
  const TargetGeometry& geom = problem->geometry();
  double last_distance = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const std::span<const FieldState> upto(snaps.data(), k + 1);
    const auto d = cone_diagnostics(upto, geom, blowup_time, mus);
    double conc = std::numeric_limits<double>::quiet_NaN();
    double mu = conc, dist = conc;
    try {
      conc = concentration_scale(snaps[k], geom, d.time_to_blowup, 0.5);
    } catch (const UndefinedScale&) {
    }
    try {
      mu = bubble_scale(snaps[k]);
      dist = bubble_compare(snaps[k], geom, mu);
    } catch (const std::exception&) {
    }
    last_distance = dist;
    csv << fmt17(d.t) << ',' << fmt17(d.time_to_blowup) << ',' << fmt17(d.cone_energy);
    for (std::size_t m = 0; m < 3; ++m) {
      csv << ',' << (m < d.self_similar_energy.size() ? fmt17(d.self_similar_energy[m].second) : "nan");
    }
    csv << ',' << fmt17(d.kinetic_time_avg) << ',' << fmt17(conc) << ',' << fmt17(mu) << ',' << fmt17(dist) << '\n';
    write_checkpoint(out_dir / checkpoint_name(snaps[k].t), snaps[k]);
  }
  auto verdict = open_out(out_dir / "verdict.txt");
  verdict << "blow-up near t = " << fmt17(blowup_time) << "\nbubble_distance " << fmt17(last_distance) << "\n";
  log << "bubbling: blow-up near t = " << blowup_time << ", bubble distance " << last_distance << "\n";
  return kBlowUp;
}

}  // namespace hypwave::cli
