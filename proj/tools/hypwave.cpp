#include <iostream>

#include "CLI11.hpp"
#include "hypwave/cli.hpp"

using namespace hypwave;

namespace {

int with_config(const std::string& path, const std::string& out, const auto& run) {
  cli::RunConfig config;
  try {
    config = cli::load_config(path);
  } catch (const cli::ConfigError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return cli::kUsage;
  }
  if (!out.empty()) config.output_dir = out;
  return run(config);
}

}  // namespace

int main(int argc, char** argv) {
  cli::apply_thread_env();
  CLI::App app{"Equivariant wave maps on the hyperbolic plane"};
  app.require_subcommand(1);

  std::string config_path, out_dir, certificate_dir = ".";
  double tol = 1e-6, lambda = 0.0;
  bool expect_fail = false;
  int refinements = 3, samples = 20;
  std::uint64_t seed = 1;
  morawetz::ScanSettings scan;

  auto* simulate = app.add_subcommand("simulate", "evolve a configured run and write time series");
  simulate->add_option("--config", config_path, "run configuration")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir, "output directory (overrides output_dir)");

  auto* critical = app.add_subcommand("lambda-critical", "enclose the critical endpoint Lambda");
  critical->add_option("--tol", tol, "enclosure width, in [1e-10, 1e-4]");
  critical->add_option("--out", certificate_dir, "directory for certificate.txt");

  auto* verify = app.add_subcommand("verify-morawetz", "scan the pointwise Morawetz inequalities");
  verify->add_option("--lambda", lambda, "endpoint parameter in [0, 1)")->required();
  verify->add_flag("--expect-fail", expect_fail, "lambda above Lambda: the key inequality must fail");
  verify->add_option("--phi-max", scan.phi_max, "scan range |phi| <= phi-max");
  verify->add_option("--phi-points", scan.phi_points, "phi samples per sign");
  verify->add_option("--r-max", scan.r_max, "scan range 0 < r <= r-max");
  verify->add_option("--r-points", scan.r_points, "r samples");
  verify->add_option("--samples", samples, "random profiles for the I lower bound");
  verify->add_option("--seed", seed, "seed for the random profiles");

  auto* convergence = app.add_subcommand("convergence", "self-convergence study under grid refinement");
  convergence->add_option("--config", config_path, "run configuration")->required()->check(CLI::ExistingFile);
  convergence->add_option("--refinements", refinements, "number of grid halvings");
  convergence->add_option("--out", out_dir, "output directory (overrides output_dir)");

  auto* bubbling = app.add_subcommand("bubbling", "sphere-target concentration diagnostics");
  bubbling->add_option("--config", config_path, "run configuration")->required()->check(CLI::ExistingFile);
  bubbling->add_option("--out", out_dir, "output directory (overrides output_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*simulate) {
      return with_config(config_path, out_dir, [](const auto& c) { return cli::cmd_simulate(c, std::cout); });
    }
    if (*critical) return cli::cmd_lambda_critical(tol, certificate_dir, std::cout);
    if (*verify) return cli::cmd_verify_morawetz(lambda, expect_fail, scan, samples, seed, std::cout);
    if (*convergence) {
      return with_config(config_path, out_dir,
                         [&](const auto& c) { return cli::cmd_convergence(c, refinements, std::cout); });
    }
    if (*bubbling) {
      return with_config(config_path, out_dir, [](const auto& c) { return cli::cmd_bubbling(c, std::cout); });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kAssertion;
  }
  return cli::kUsage;
}
