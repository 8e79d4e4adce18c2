#pragma once

#include "reldom/representation.hpp"

#include <cstdint>
#include <optional>

namespace reldom {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One requested check; `type` selects the operation, the remaining fields
/// are its parameters (each check type accepts a fixed key set, anything
/// else is rejected at parse time).
struct CheckRequest {
  std::string type;
  int max_word_length = 8;
  double max_bracket_hi = -1;  // when >= 0, enumerate only words with bracket hi below this
  std::string mode = "bracket";  // bracket | exact
  int n_max = 8;
  long long rate_power = 1LL << 40;
  double mu_cap = -1;
  int samples = 1000;
  int peripheral = -1;  // -1: all peripherals
  double delta0_floor = 0;
  double qg_lower = 4, qg_upper = 4;
  int tail_depth = 5;
  double tolerance = 1e-9;
  double stable_upper_max = -1;
  std::string floyd_function = "geometric";
  double floyd_parameter = 0.5;
  int ball_radius = 10;
  double bound_l = -1;  // property U slack; defaults to 2*max|f| + 5
  std::string path_letter;
  std::vector<std::string> path_points;
  int path_steps = 20;
  int graph_radius = 6;
  int graph_depth = 6;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  GeneratorSet gens;
  std::optional<Representation> rep;
  std::vector<CheckRequest> checks;
};

/// Parses the structured-text configuration. Unknown keys anywhere are an
/// error, with a location diagnostic.
ExperimentConfig parse_config_text(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct RunResult {
  int exit_code = 0;  // 0 certified, 2 refuted, 3 inconclusive (1: bad config, thrown earlier)
  std::vector<std::string> report_files;
  std::string summary;  // the summary JSON text
};

/// Runs every requested check, writing one JSON report per check plus CSV
/// point clouds, deterministically for a fixed seed.
RunResult run_experiment(const ExperimentConfig& config);

/// Unions the point clouds of two gap-fit reports and refits; the merge is
/// associative and commutative.
std::string merge_gap_reports(const std::vector<std::string>& report_texts);

}  // namespace reldom
