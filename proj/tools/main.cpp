// v2xrelay: runs the relay-selection experiments and writes plot-ready CSV.
//
//   v2xrelay run <experiment> --config <path> --seed <u64> --out <dir>
//                [--trials N] [--l-min A --l-max B]
//   v2xrelay validate --config <path>
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible scenario,
// 4 internal invariant violation.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "v2x/error.hpp"
#include "v2x/harness/config.hpp"
#include "v2x/harness/experiment.hpp"

namespace {

using namespace v2x::harness;

void print_failure(int code, const std::string& kind, const std::string& message) {
  std::cerr << nlohmann::json{{"exit_code", code}, {"kind", kind}, {"message", message}}.dump()
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative two-hop relay selection experiments"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  std::string experiment;
  std::string config_path;
  RunOptions options;
  std::string out_dir = "out";
  std::size_t trials = 0;
  std::size_t l_min = 0;
  std::size_t l_max = 0;

  auto* run = app.add_subcommand("run", "Run an experiment and write CSV output");
  run->add_option("experiment", experiment, "fig3 | fig4 | fig5 | chain-check | bound-check | orchestrate")
      ->required();
  run->add_option("--config", config_path, "Scenario configuration file")->required();
  run->add_option("--seed", options.seed, "Master seed")->required();
  run->add_option("--out", out_dir, "Output directory (overridden by $V2XRELAY_OUT_DIR)");
  auto* trials_opt = run->add_option("--trials", trials, "Trials / populations / instances");
  auto* lmin_opt = run->add_option("--l-min", l_min, "Smallest relay count");
  auto* lmax_opt = run->add_option("--l-max", l_max, "Largest relay count");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a configuration file and echo it");
  validate->add_option("--config", validate_path, "Scenario configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  try {
    if (*validate) {
      const auto config = load_config(validate_path);
      nlohmann::json echo = config.to_json();
      echo["config_sha256"] = config.digest;
      std::cout << echo.dump(2) << '\n';
      return kExitOk;
    }

    if (!is_known_experiment(experiment)) {
      print_failure(kExitConfigError, "config_error", "unknown experiment '" + experiment + "'");
      return kExitConfigError;
    }
    const auto config = load_config(config_path);
    options.out_dir = out_dir;
    if (const char* env = std::getenv(std::string(kOutDirEnv).c_str()); env && *env) {
      options.out_dir = env;
      options.out_dir_override = env;
    }
    if (*trials_opt) options.trials = trials;
    if (*lmin_opt) options.l_min = l_min;
    if (*lmax_opt) options.l_max = l_max;

    const RunManifest manifest = run_experiment(experiment, config, options);
    if (manifest.exit_code != kExitOk) {
      std::cerr << manifest.failure.dump() << '\n';
    } else {
      std::cout << "wrote " << manifest.outputs.size() << " files to " << manifest.out_dir.string()
                << '\n';
    }
    return manifest.exit_code;
  } catch (const v2x::Error& e) {
    const int code = e.code() == v2x::ErrorCode::InvalidConfig ? kExitConfigError
                                                               : kExitInvariantViolation;
    print_failure(code, code == kExitConfigError ? "config_error" : "invariant_violation",
                  e.what());
    return code;
  } catch (const std::exception& e) {
    print_failure(kExitInvariantViolation, "internal_error", e.what());
    return kExitInvariantViolation;
  }
}
