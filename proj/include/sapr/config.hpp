#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sapr/alternating_projections.hpp"
#include "sapr/scene_sim.hpp"

namespace sapr {

struct GridSpec {
  int rows = 0;
  int cols = 0;
  double extent = 0.9;
};

/// Everything a run needs, resolved from a flat key = value config file.
struct RunConfig {
  // scenario
  double frequency_hz = 40e9;
  int aperture_rows = 7;
  int aperture_cols = 7;
  double spacing_lambda = 0.5;
  std::vector<Source> sources;  // positions ingested from mm
  PlaneEmbedding embedding;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;

  GridSpec stage1_grid{11, 11, 0.9};
  GridSpec stage2_grid{21, 21, 0.9};
  GridSpec eval_grid{41, 41, 1.0};

  double stage1_l1_weight = 1.0;
  double stage2_l1_weight = 1e-3;
  double lp_tol = 1e-8;
  int lp_max_iter = 100;

  ApConfig ap;

  std::string output_dir = "out";
  bool emit_svg = true;

  Scenario scenario() const;
  PipelineConfig pipeline_config() const;
};

struct ConfigIssue {
  bool is_error = false;
  std::string message;
};

struct ParsedConfig {
  RunConfig config;
  std::vector<ConfigIssue> issues;
  std::map<std::string, std::string> raw;  // keys as given

  bool ok() const {
    for (const auto& i : issues) {
      if (i.is_error) return false;
    }
    return true;
  }
};

// Parse a flat key = value file ('#' comments). Unknown keys are errors;
// violations collect into issues rather than throwing.
ParsedConfig parse_config_file(const std::string& path);
ParsedConfig parse_config_text(const std::string& text);

// Every effective parameter, resolved, as ordered key/value lines.
std::vector<std::pair<std::string, std::string>> effective_parameters(
    const RunConfig& config);

}  // namespace sapr
