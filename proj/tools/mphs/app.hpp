#pragma once

#include <string>

namespace mphs::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes shared by every subcommand: success, failed verification checks,
// configuration/input errors, runtime/solver errors.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kRuntimeError = 3;

// `mphs run <scenario.json>`: simulate and write trajectory CSV, energy CSV,
// and a JSON manifest next to them.
int run_scenario(const std::string& path);

// `mphs verify <suite>` with suite in structure|gradients|energy|oracle|all.
// Prints a machine-readable JSON report; returns kCheckFailure when any
// check fails and throws InvalidArgument for an unknown suite name.
int run_verify(const std::string& suite);

struct ReduceOptions {
  std::string input;
  std::string method = "bt";
  int order = -1;     // requested order; mutually exclusive with tol
  double tol = -1.0;  // absolute error-bound target
  std::string output_prefix;  // default: input path minus extension
};

// `mphs reduce <lti.json> --method bt --order r`: writes the reduced model
// JSON and a sampled-error CSV, printing bound and sampled error.
int run_reduce(const ReduceOptions& options);

}  // namespace mphs::cli
