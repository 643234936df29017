#pragma once

// Detection pipeline: HPD observations, CCM estimation by geometric mean,
// distance statistics with optional projection, AMF baselines, and Monte
// Carlo threshold / Pd estimation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mig/projection.hpp"
#include "mig/scenario.hpp"

namespace mig {

enum class DetectorKind {
  Mig,       // d^2(f_W(R_G), f_W(R_D)), or unprojected when no W
  Amf,       // adaptive matched filter with the secondary sample covariance
  AmfKnown,  // matched filter with the scenario's true clutter covariance
};

struct DetectorSpec {
  DetectorKind kind = DetectorKind::Mig;
  Measure measure = Measure::Jbld;
  std::optional<StiefelMatrix> projection;
  double threshold = 0.0;
  std::string id;

  void validate(Index data_dim) const;
};

struct DetectionRow {
  double scr_db = 0.0;
  double threshold = 0.0;
  double empirical_pfa = 0.0;
  double pd = 0.0;
  int trials = 0;
};

struct DetectionCurve {
  std::string detector;
  std::vector<DetectionRow> rows;
  void validate() const;
};

HpdMatrix ccm_estimate(Measure m, const HpdSet& secondary, const MeanConfig& cfg = {});

/// Squared measure between R_G and R_D, compressed by the projection when present.
double mig_statistic(const DetectorSpec& spec, const HpdMatrix& r_g, const HpdMatrix& r_d);

/// |p^H S^{-1} x|^2 / (p^H S^{-1} p) with S = (1/K) sum x_k x_k^H. S is loaded
/// by 1e-6 tr(S)/N I when K < 2N.
double amf_statistic(const CVector& x, const std::vector<CVector>& secondary, const CVector& p);

/// Same form with a known covariance in place of S.
double amf_known_statistic(const CVector& x, const HpdMatrix& c, const CVector& p);

/// True when amf_statistic loads the SCM for this secondary count.
inline bool amf_uses_loading(std::size_t k, Index n) { return static_cast<Index>(k) < 2 * n; }

/// Value at rank ceil(pfa * n) of the statistics sorted descending.
double threshold_from_statistics(std::vector<double> statistics, double pfa);

/// Evaluates several detectors on one trial, sharing observations and means.
class DetectorBank {
 public:
  DetectorBank(std::vector<DetectorSpec> specs, ClutterScenario scenario, int secondary_count,
               MeanConfig mean = {});

  std::vector<double> statistics(const TrialData& trial) const;
  /// Draws trial `index` of `stage` and evaluates it.
  std::vector<double> run_trial(std::optional<double> scr_db, std::uint64_t seed, Stage stage,
                                std::uint64_t index) const;

  const std::vector<DetectorSpec>& specs() const noexcept { return specs_; }
  std::vector<DetectorSpec>& specs() noexcept { return specs_; }
  const ClutterScenario& scenario() const noexcept { return scenario_; }
  int secondary_count() const noexcept { return k_; }

 private:
  std::vector<DetectorSpec> specs_;
  ClutterScenario scenario_;
  int k_;
  MeanConfig mean_;
  HpdMatrix cov_;
  ClutterSampler sampler_;
  CVector p_;
  CMatrix cov_inv_;
  std::vector<Measure> measures_;  // distinct measures of the MIG detectors
};

/// statistics[trial][detector] for n_trials independent trials.
std::vector<std::vector<double>> simulate_statistics(const DetectorBank& bank,
                                                     std::optional<double> scr_db, int n_trials,
                                                     std::uint64_t seed, Stage stage,
                                                     unsigned threads = 0);

/// Per-detector CFAR thresholds from one shared set of clutter-only trials.
std::vector<double> estimate_thresholds(const DetectorBank& bank, double pfa, int n_trials,
                                        std::uint64_t seed, unsigned threads = 0);

/// Fraction of trials whose statistic exceeds each detector's threshold.
std::vector<double> exceedance_rates(const DetectorBank& bank, std::optional<double> scr_db,
                                     int n_trials, std::uint64_t seed, Stage stage,
                                     unsigned threads = 0);

/// Single-detector forms.
double estimate_threshold(const DetectorSpec& spec, const ClutterScenario& sc, int secondary_count,
                          double pfa, int n_trials, std::uint64_t seed, const MeanConfig& mean = {},
                          unsigned threads = 0);
double estimate_pd(const DetectorSpec& spec, const ClutterScenario& sc, int secondary_count,
                   double scr_db, int n_trials, std::uint64_t seed, const MeanConfig& mean = {},
                   unsigned threads = 0);

void validate_threshold_request(double pfa, int n_trials);

}  // namespace mig
