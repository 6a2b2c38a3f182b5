// ovalflow <experiment-kind> --config <path> [--out <dir>] [--seed <int>]
//
// Exit codes: 0 success, 2 configuration error, 3 pipeline error. Errors are
// reported as one JSON object on standard error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ovalflow/harness.hpp"

namespace {

int config_failure(const std::vector<std::string>& messages) {
  std::cerr << nlohmann::json{{"error", "config"}, {"messages", messages}}.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric fully nonlinear curvature flow experiments"};
  std::string kind;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("experiment", kind,
                 "validate-speed | run-flow | compare | ancient-pipeline | backward-limit")
      ->required();
  app.add_option("--config", config_path, "JSON experiment config")->required();
  app.add_option("--out", out_dir, "output directory (default: $OVALFLOW_OUTPUT_ROOT/<kind>)");
  app.add_option("--seed", seed, "override the config seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return config_failure({e.what()});
  }

  const auto parsed_kind = ovalflow::parse_experiment_kind(kind);
  if (!parsed_kind) return config_failure({"experiment: unknown kind '" + kind + "'"});

  std::ifstream is(config_path);
  if (!is) return config_failure({"config: cannot read " + config_path});
  std::stringstream text;
  text << is.rdbuf();

  ovalflow::ExperimentConfig cfg;
  try {
    cfg = ovalflow::parse_config(text.str());
  } catch (const ovalflow::ConfigErrors& e) {
    return config_failure(e.messages());
  }
  if (cfg.experiment != *parsed_kind) {
    return config_failure({"experiment: command line asks for '" + kind + "' but the config is '" +
                           std::string(ovalflow::to_string(cfg.experiment)) + "'"});
  }
  if (seed) {
    cfg.seed = *seed;
    cfg.samples.seed = *seed;
  }

  std::filesystem::path dir = out_dir;
  if (dir.empty()) dir = cfg.output_dir;
  if (dir.empty()) {
    const char* root = std::getenv("OVALFLOW_OUTPUT_ROOT");
    dir = std::filesystem::path(root && *root ? root : "ovalflow_out") / kind;
  }

  ovalflow::RunOutcome outcome;
  try {
    outcome = ovalflow::run_experiment(cfg, dir);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "pipeline"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  }
  if (!outcome.complete) {
    std::cerr << nlohmann::json{{"error", "pipeline"},
                                {"message", outcome.error},
                                {"output_dir", dir.string()}}
                     .dump()
              << "\n";
    return 3;
  }
  std::cout << nlohmann::json{{"output_dir", dir.string()}, {"files", outcome.files.size()}}.dump()
            << "\n";
  return 0;
}
