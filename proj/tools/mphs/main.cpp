#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <mphs/errors.hpp>

#include "app.hpp"

namespace {

// Solver failures at this level are anything the library reports after a
// scenario validated: non-convergence, singular systems, unstable reduction
// targets. Bad input (malformed JSON, unknown kinds/suites, impossible
// shapes) is a configuration error instead.
bool is_config_error(const mphs::Error& e) {
  const std::string& code = e.code();
  return code == "InvalidArgument" || code.rfind("StructureError", 0) == 0 ||
         code == "PortMismatch";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"port-Hamiltonian multiphysics simulation toolkit"};
  app.set_version_flag("--version", mphs::cli::kToolVersion);
  app.require_subcommand(1);

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "simulate a scenario file and write its artifacts");
  run->add_option("file", scenario_path, "scenario JSON file")->required();

  std::string suite;
  auto* verify =
      app.add_subcommand("verify", "run invariant suites (structure|gradients|energy|oracle|all)");
  verify->add_option("suite", suite, "suite name")->required();

  mphs::cli::ReduceOptions reduce_options;
  auto* reduce = app.add_subcommand("reduce", "reduce an LTI system stored as JSON");
  reduce->add_option("file", reduce_options.input, "LTI JSON file")->required();
  reduce->add_option("--method", reduce_options.method, "reduction method (bt)");
  auto* order_opt = reduce->add_option("--order", reduce_options.order, "reduced order");
  auto* tol_opt =
      reduce->add_option("--tol", reduce_options.tol, "absolute error-bound target");
  order_opt->excludes(tol_opt);
  reduce->add_option("--output", reduce_options.output_prefix,
                     "output path prefix (default: input path without extension)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mphs::cli::kConfigError;
  }

  try {
    if (run->parsed()) return mphs::cli::run_scenario(scenario_path);
    if (verify->parsed()) return mphs::cli::run_verify(suite);
    return mphs::cli::run_reduce(reduce_options);
  } catch (const mphs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e) ? mphs::cli::kConfigError : mphs::cli::kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mphs::cli::kRuntimeError;
  }
}
