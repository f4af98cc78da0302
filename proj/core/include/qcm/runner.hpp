#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcm/fractal.hpp"
#include "qcm/gauge.hpp"
#include "qcm/lab.hpp"
#include "qcm/seqnorm.hpp"

namespace qcm {

inline constexpr std::array<std::string_view, 9> kExperiments = {
    "gauge-check", "cantor-export", "rho",          "k-upper",    "ampliation",
    "scaling",     "small-set",     "singular-demo", "shift-check"};

struct WeightConfig {
  /// rho | harmonic | custom
  std::string kind = "rho";
  /// rho only: when set, the start index comes from choose_start_index.
  std::optional<double> epsilon;
  int m_max = 4;
  double horizon = 1e6;
  std::int64_t start_index = 1;
  std::vector<double> values;
};

enum class OutputFormat { csv, json, both };

struct RunConfig {
  std::string experiment;
  GaugeSpec gauge;
  int n = 1;
  int depth = 6;
  int level_lo = 1;
  int level_hi = 5;
  WeightConfig weights;

  // Experiment parameters; each experiment reads its own subset.
  std::vector<double> a_list = {2, 4, 8};
  double x_probe = 1e-10;
  int export_level = 0;
  std::size_t count = 1000;
  int level = 4;
  std::vector<int> m_list = {2, 4, 8, 16};
  double epsilon = 0.05;
  std::vector<int> word_lengths = {0, 1, 2, 3};
  std::vector<int> rel_depths = {1, 2, 3, 4};
  int rel_depth = 3;
  int rel_fine = 5;
  std::vector<int> shifts = {1, 2, 4};
  std::vector<int> ks = {1, 2, 4};
  std::vector<int> levels = {1, 2, 3, 4, 5, 6};
  ShrinkingKind kind = ShrinkingKind::single;

  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::both;

  /// Fully resolved config (defaults filled in), in the input schema.
  nlohmann::json to_json() const;
};

/// Throws ConfigError listing every problem, each prefixed by its JSON path.
RunConfig parse_config(std::string_view text);
RunConfig parse_config(const nlohmann::json& document);
inline RunConfig parse_config(const char* text) { return parse_config(std::string_view(text)); }

/// Weights long enough for every norm the experiment evaluates.
WeightSequence build_weights(const RunConfig& config);
std::size_t required_weight_count(const RunConfig& config);

struct RunOutput {
  ExperimentResult result;
  std::optional<GeometryDocument> geometry;
};

RunOutput dispatch(const RunConfig& config, unsigned threads);

/// Deterministic file contents; never includes timings or thread counts.
std::string render_json(const RunOutput& output, const RunConfig& config);

/// Writes <out>/<experiment>.csv and/or .json (plus .geometry.json for
/// cantor-export). Returns the paths written. Throws std::runtime_error on I/O failure.
std::vector<std::filesystem::path> write_outputs(const RunOutput& output, const RunConfig& config);

}  // namespace qcm
