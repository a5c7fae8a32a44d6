#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hypwave/evolve.hpp"
#include "hypwave/model.hpp"
#include "hypwave/morawetz.hpp"

namespace hypwave::cli {

enum ExitCode : int {
  kOk = 0,
  kAssertion = 1,
  kUsage = 2,
  kBlowUp = 3,
  kCertification = 4,
  kInconclusive = 5,
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

enum class Family { zero, bump, static_map, kinetic };
enum class Velocity { zero, incoming, outgoing };

/// Perturbation profile phi0 = A (r/sigma)^2 [exp(-((r-r0)/sigma)^2) - exp(-((r+r0)/sigma)^2)].
/// The mirrored Gaussian keeps phi0 odd and smooth through r = 0.
struct InitialData {
  Family family = Family::zero;
  double amplitude = 1.0;
  double sigma = 0.5;
  double center = 1.0;
  Velocity velocity = Velocity::zero;
};

struct RunConfig {
  Equation equation = Equation::perturbed2d;
  TargetKind target = TargetKind::hyperbolic;
  double lambda = 0.0;
  double r_max = 20.0;
  int n = 2000;
  double cfl = 0.5;
  double t_end = 1.0;
  int output_stride = 100;
  /// Time between checkpoint files; 0 writes only the first and last state.
  double checkpoint_interval = 0.0;
  bool waive_causality = false;
  InitialData initial;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

/// Flat `key = value` lines, `#` comments, dotted keys. Throws ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// Re-parsable echo of every key.
std::string format_config(const RunConfig& config);

double bump_profile(const InitialData& data, double r);
double bump_profile_dr(const InitialData& data, double r);

/// Initial state in the formulation of config.equation.
FieldState initial_state(const RunConfig& config);
EvolutionProblem make_problem(const RunConfig& config);
StepControl make_control(const RunConfig& config);

/// Energy conserved by the configured equation.
double conserved_energy(const EvolutionProblem& problem, const FieldState& state);

void write_checkpoint(const std::filesystem::path& path, const FieldState& state);
FieldState read_checkpoint(const std::filesystem::path& path);
std::string checkpoint_name(double t);

int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_lambda_critical(double tol, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_verify_morawetz(double lambda, bool expect_fail, const morawetz::ScanSettings& scan,
                        int samples, std::uint64_t seed, std::ostream& log);
int cmd_convergence(const RunConfig& config, int refinements, std::ostream& log);
int cmd_bubbling(const RunConfig& config, std::ostream& log);

/// Applies HYPWAVE_THREADS to the OpenMP runtime if set.
void apply_thread_env();

}  // namespace hypwave::cli
