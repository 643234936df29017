#pragma once

// Experiment configuration in a flat `key = value` text format. Keys carry
// dotted section prefixes (scenario., experiment., training., learner., mean.,
// bench., output.); `#` starts a comment; lists are comma separated.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mig/detector.hpp"

namespace mig::harness {

struct BenchConfig {
  std::vector<int> dims = {8, 16, 32};
  int k = 16;
  int m = 4;
  int repetitions = 20;
};

struct ExperimentConfig {
  ClutterScenario scenario;
  std::vector<Measure> measures = {Measure::Airm, Measure::Lem, Measure::Jbld, Measure::Skld};
  std::vector<int> target_dims = {8, 6, 4, 2};
  std::vector<double> k_multipliers = {1.0, 1.5, 2.0};
  std::vector<double> scr_db = {0, 5, 10, 15, 20, 25};
  double pfa = 1e-2;
  int trials_threshold = 10000;
  int trials_pd = 500;
  int training_j = 2000;
  int training_k = 2000;
  double training_scr_db = 25.0;
  LearnerConfig learner;
  MeanConfig mean;
  BenchConfig bench;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = MIG_THREADS or hardware concurrency
  std::filesystem::path output_dir = "out";

  void validate() const;
  /// Secondary count for a target dimension and multiplier, rounded to nearest.
  static int secondary_count(int m, double multiplier);
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical text; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const ExperimentConfig& cfg);

/// Shortest decimal that round-trips the double.
std::string format_double(double v);

}  // namespace mig::harness
