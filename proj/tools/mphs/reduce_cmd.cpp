#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>

#include <json.hpp>

#include <mphs/errors.hpp>
#include <mphs/io/csv.hpp>
#include <mphs/io/serialize.hpp>
#include <mphs/mor/reduce.hpp>

#include "app.hpp"

namespace mphs::cli {

int run_reduce(const ReduceOptions& options) {
  if (options.method != "bt")
    throw InvalidArgument("unknown reduction method '" + options.method +
                          "' (only 'bt' is available)");
  if (options.order < 0 && options.tol < 0.0)
    throw InvalidArgument("reduce needs --order or --tol");

  const mor::LtiSystem sys = io::lti_from_json(io::read_text_file(options.input));
  const mor::ReducedModel reduced = options.order >= 0
                                        ? mor::balanced_truncation(sys, options.order)
                                        : mor::balanced_truncation(sys, options.tol);

  std::string prefix = options.output_prefix;
  if (prefix.empty()) {
    std::filesystem::path p(options.input);
    p.replace_extension();
    prefix = p.string();
  }

  const std::string model_path = prefix + "_reduced.json";
  const std::string error_path = prefix + "_error.csv";
  io::write_text_file(model_path, io::to_json(reduced));

  const auto samples = mor::sampled_error(sys, reduced.system(), 200);
  double max_gain = 0.0;
  std::string csv = "omega,gain\n";
  for (const auto& sample : samples) {
    max_gain = std::max(max_gain, sample.gain);
    csv += io::format_double(sample.omega) + "," + io::format_double(sample.gain) + "\n";
  }
  io::write_text_file(error_path, csv);

  nlohmann::json summary;
  summary["input"] = options.input;
  summary["full_order"] = static_cast<int>(sys.A.rows());
  summary["reduced_order"] = reduced.order();
  summary["error_bound"] = reduced.error_bound;
  summary["max_sampled_error"] = max_gain;
  summary["artifacts"] = {{"model", model_path}, {"error_samples", error_path}};
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

}  // namespace mphs::cli
