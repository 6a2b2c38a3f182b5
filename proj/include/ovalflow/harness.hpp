#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ovalflow/ancient.hpp"
#include "ovalflow/barriers.hpp"
#include "ovalflow/errors.hpp"
#include "ovalflow/initdata.hpp"
#include "ovalflow/solver.hpp"

namespace ovalflow {

enum class ExperimentKind { validate_speed, run_flow, compare, ancient_pipeline, backward_limit };
std::string_view to_string(ExperimentKind k);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view s);

struct InitialSpec {
  std::string type = "ellipsoid";  ///< cap | ellipsoid | sphere
  double a = 2.0;
  double epsilon0 = 0.1;
  double radius = 1.0;
};

struct BarrierSpec {
  BarrierKind kind = BarrierKind::sphere;
  double R0 = 1.0;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::run_flow;
  std::string speed = "H";
  int n = 2;
  int J = 1;
  int m = 400;
  InitialSpec initial;
  SolverConfig solver;
  std::vector<double> family;
  std::vector<double> K;
  std::vector<BarrierSpec> barriers;
  std::optional<InitialSpec> other;  ///< second flow for compare
  int random_pairs = 0;              ///< extra seeded nested pairs for compare
  int random_pairs_m = 64;
  SamplingSpec samples;
  ThetaWindow window;
  int profile_files = 11;  ///< profile snapshots written by run-flow
  std::string output_dir;
  std::uint64_t seed = 0;
};

/// Configuration problem; messages() holds every validation failure found.
class ConfigErrors : public ConfigError {
 public:
  explicit ConfigErrors(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  std::vector<std::string> messages_;
};

/// Parses a JSON document into a validated config. Syntax errors carry a
/// line:column position; semantic errors are all collected before throwing.
ExperimentConfig parse_config(std::string_view text);

void to_json(nlohmann::json& j, const ExperimentConfig& cfg);

SymmetricProfile build_initial(const ExperimentConfig& cfg, const InitialSpec& spec);

struct RunOutcome {
  bool complete = false;
  std::vector<std::filesystem::path> files;  ///< relative to the output directory
  std::string error;
};

/// Runs one experiment, writing artifacts and manifest.json into out_dir.
/// Pipeline errors are caught: the manifest then records complete = false and
/// the error, and the partial outputs stay in place.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

std::string sha256_hex(std::string_view data);

}  // namespace ovalflow
