#pragma once

// Experiment orchestration: training data, projection learning, Pd sweeps,
// distance scatter and timing benchmarks. Each run writes CSV files, a
// gnuplot script next to each CSV, and manifest.json into the output directory.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mig/harness/config.hpp"

namespace mig::harness {

inline constexpr const char* kCsvHeader =
    "detector,measure,M,K,scr_db,threshold,empirical_pfa,pd,trials";

struct RunError {
  std::string scope;  // e.g. "learn JBLD M=4" or "mig-proj JBLD M=4 K=4"
  std::string message;
};

struct CurveRecord {
  std::string detector;  // mig-proj, mig, amf, amf-known
  std::string measure;   // AIRM, LEM, JBLD, SKLD, or none for the AMF baselines
  int m = 0;
  int k = 0;
  double threshold = 0.0;
  double empirical_pfa = 0.0;
  std::vector<DetectionRow> rows;
  std::filesystem::path csv;
  std::optional<std::string> error;
};

struct LearnRecord {
  Measure measure = Measure::Jbld;
  int m = 0;
  std::optional<LearnedProjection> result;
  double seconds = 0.0;
  std::optional<std::string> error;
};

struct SweepResult {
  std::vector<LearnRecord> learned;
  std::vector<CurveRecord> curves;
  std::vector<RunError> errors;
  double seconds = 0.0;
};

struct TrainingOutput {
  TrainingSet set;
  std::filesystem::path clutter_file;
  std::filesystem::path target_file;
};

struct DistanceSummary {
  Measure measure = Measure::Jbld;
  double clutter_mean = 0.0;
  double clutter_std = 0.0;
  double target_mean = 0.0;
  double target_std = 0.0;
  /// (target_mean - clutter_mean) / sqrt((clutter_var + target_var) / 2).
  double separation() const;
};

struct DistanceResult {
  std::vector<DistanceSummary> summaries;
  std::vector<RunError> errors;
};

struct BenchRow {
  std::string kind;  // mean or gradient
  std::string name;
  int n = 0;
  int k = 0;
  int m = 0;
  double median_seconds = 0.0;
  int repetitions = 0;
  std::string complexity;
};

/// Writes training_clutter.migw and training_target.migw (stacks).
TrainingOutput run_gen_training(const ExperimentConfig& cfg);

/// Learns W per (measure, M) on the training set, writing W_<measure>_M<m>.migw
/// and trace_<measure>_M<m>.csv. Uses `training` when given.
std::vector<LearnRecord> run_learn_projection(const ExperimentConfig& cfg,
                                              const std::optional<TrainingSet>& training = std::nullopt);

SweepResult run_sweep(const ExperimentConfig& cfg);

/// distances.csv: index,class,<measure>... with squared distances of every
/// training element to the geometric mean of the clutter-only subset.
DistanceResult run_distances(const ExperimentConfig& cfg);

/// bench.csv: median wall time per mean and per gradient at each configured N.
std::vector<BenchRow> run_bench(const ExperimentConfig& cfg);

/// Reads a training directory written by run_gen_training.
TrainingSet load_training(const std::filesystem::path& dir, double scr_db);

std::string csv_file_name(const std::string& detector, const std::string& measure, int m, int k);

}  // namespace mig::harness
