#include "mig/detector.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "mig/parallel.hpp"

namespace mig {

void DetectorSpec::validate(Index data_dim) const {
  if (std::isnan(threshold)) throw ValidationError("detector '" + id + "': threshold is NaN");
  if (projection && projection->ambient() != data_dim) {
    std::ostringstream os;
    os << "detector '" << id << "': projection ambient dimension " << projection->ambient()
       << " does not match data dimension " << data_dim;
    throw ValidationError(os.str());
  }
}

void DetectionCurve::validate() const {
  for (const auto& r : rows) {
    if (!(r.empirical_pfa >= 0.0 && r.empirical_pfa <= 1.0) || !(r.pd >= 0.0 && r.pd <= 1.0)) {
      throw ValidationError("detection curve '" + detector + "': probability outside [0, 1]");
    }
    if (r.trials <= 0) throw ValidationError("detection curve '" + detector + "': trials must be > 0");
  }
}

HpdMatrix ccm_estimate(Measure m, const HpdSet& secondary, const MeanConfig& cfg) {
  return geometric_mean(m, secondary, cfg);
}

double mig_statistic(const DetectorSpec& spec, const HpdMatrix& r_g, const HpdMatrix& r_d) {
  if (r_g.order() != r_d.order()) {
    throw ValidationError("mig_statistic: R_G and R_D orders differ");
  }
  spec.validate(r_g.order());
  if (spec.projection) {
    return sq_dist(spec.measure, compress(*spec.projection, r_g), compress(*spec.projection, r_d));
  }
  return sq_dist(spec.measure, r_g, r_d);
}

namespace {

double matched_filter(const Eigen::LLT<CMatrix>& llt, const CVector& x, const CVector& p) {
  const CVector y = llt.solve(p);  // S^{-1} p
  const double num = std::norm(y.dot(x));  // |p^H S^{-1} x|^2
  const double den = p.dot(y).real();
  return num / den;
}

}  // namespace

double amf_statistic(const CVector& x, const std::vector<CVector>& secondary, const CVector& p) {
  const Index n = x.size();
  if (p.size() != n) throw ValidationError("amf_statistic: steering and data lengths differ");
  if (secondary.empty()) throw ValidationError("amf_statistic: no secondary data");
  CMatrix s = CMatrix::Zero(n, n);
  for (const auto& v : secondary) {
    if (v.size() != n) throw ValidationError("amf_statistic: secondary vector length mismatch");
    s.noalias() += v * v.adjoint();
  }
  s /= static_cast<double>(secondary.size());
  if (amf_uses_loading(secondary.size(), n)) {
    s.diagonal().array() += 1e-6 * s.trace().real() / static_cast<double>(n);
  }
  Eigen::LLT<CMatrix> llt(s);
  if (llt.info() != Eigen::Success) throw NumericError("amf_statistic: sample covariance is singular");
  return matched_filter(llt, x, p);
}

double amf_known_statistic(const CVector& x, const HpdMatrix& c, const CVector& p) {
  if (x.size() != c.order() || p.size() != c.order()) {
    throw ValidationError("amf_known_statistic: dimension mismatch");
  }
  Eigen::LLT<CMatrix> llt(c.matrix());
  if (llt.info() != Eigen::Success) throw NumericError("amf_known_statistic: covariance is singular");
  return matched_filter(llt, x, p);
}

void validate_threshold_request(double pfa, int n_trials) {
  if (!(pfa > 0.0 && pfa < 1.0)) throw ValidationError("pfa must lie in (0, 1)");
  if (static_cast<double>(n_trials) < 10.0 / pfa - 1e-9) {
    std::ostringstream os;
    os << "threshold estimation needs at least " << std::ceil(10.0 / pfa - 1e-9)
       << " trials for pfa " << pfa << ", got " << n_trials;
    throw ValidationError(os.str());
  }
}

double threshold_from_statistics(std::vector<double> statistics, double pfa) {
  if (statistics.empty()) throw ValidationError("threshold_from_statistics: no statistics");
  if (!(pfa > 0.0 && pfa < 1.0)) throw ValidationError("pfa must lie in (0, 1)");
  const auto n = statistics.size();
  auto rank = static_cast<std::size_t>(std::ceil(pfa * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(statistics.begin(), statistics.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   statistics.end(), std::greater<>());
  return statistics[rank - 1];
}

DetectorBank::DetectorBank(std::vector<DetectorSpec> specs, ClutterScenario scenario,
                           int secondary_count, MeanConfig mean)
    : specs_(std::move(specs)),
      scenario_(std::move(scenario)),
      k_(secondary_count),
      mean_(std::move(mean)),
      cov_(clutter_cov(scenario_)),
      sampler_(cov_),
      p_(steering(scenario_.n, scenario_.f_s)),
      cov_inv_(detail::inv_hpd(cov_.matrix())) {
  if (k_ < 1) throw ValidationError("detector bank: secondary count must be positive");
  if (scenario_.interference.count > k_) {
    std::ostringstream os;
    os << "detector bank: " << scenario_.interference.count << " interferers exceed K = " << k_;
    throw ValidationError(os.str());
  }
  mean_.validate(static_cast<std::size_t>(k_));
  for (const auto& s : specs_) {
    s.validate(scenario_.n);
    if (s.kind == DetectorKind::Mig &&
        std::find(measures_.begin(), measures_.end(), s.measure) == measures_.end()) {
      measures_.push_back(s.measure);
    }
  }
}

std::vector<double> DetectorBank::statistics(const TrialData& trial) const {
  std::vector<CMatrix> secondary;
  secondary.reserve(trial.secondary.size());
  for (const auto& x : trial.secondary) secondary.push_back(build_hpd_observation(x).matrix());
  const CMatrix r_d = build_hpd_observation(trial.cut).matrix();

  std::vector<CMatrix> means(measures_.size());
  for (std::size_t i = 0; i < measures_.size(); ++i) {
    means[i] = detail::geometric_mean(measures_[i], secondary, mean_);
  }
  auto mean_for = [&](Measure m) -> const CMatrix& {
    const auto it = std::find(measures_.begin(), measures_.end(), m);
    return means[static_cast<std::size_t>(it - measures_.begin())];
  };

  std::vector<double> out;
  out.reserve(specs_.size());
  for (const auto& s : specs_) {
    switch (s.kind) {
      case DetectorKind::Mig: {
        const CMatrix& r_g = mean_for(s.measure);
        if (s.projection) {
          const CMatrix& w = s.projection->matrix();
          out.push_back(detail::sq_dist(s.measure, hermitian_part(w.adjoint() * r_g * w),
                                        hermitian_part(w.adjoint() * r_d * w)));
        } else {
          out.push_back(detail::sq_dist(s.measure, r_g, r_d));
        }
        break;
      }
      case DetectorKind::Amf:
        out.push_back(amf_statistic(trial.cut, trial.secondary, p_));
        break;
      case DetectorKind::AmfKnown: {
        const CVector y = cov_inv_ * p_;
        out.push_back(std::norm(y.dot(trial.cut)) / p_.dot(y).real());
        break;
      }
    }
  }
  return out;
}

std::vector<double> DetectorBank::run_trial(std::optional<double> scr_db, std::uint64_t seed,
                                            Stage stage, std::uint64_t index) const {
  Rng rng(seed, stream_id(stage, index));
  return statistics(draw_trial(scenario_, sampler_, k_, scr_db, rng));
}

std::vector<std::vector<double>> simulate_statistics(const DetectorBank& bank,
                                                     std::optional<double> scr_db, int n_trials,
                                                     std::uint64_t seed, Stage stage,
                                                     unsigned threads) {
  if (n_trials < 1) throw ValidationError("simulate_statistics: need at least one trial");
  std::vector<std::vector<double>> out(static_cast<std::size_t>(n_trials));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    out[i] = bank.run_trial(scr_db, seed, stage, static_cast<std::uint64_t>(i));
  });
  return out;
}

std::vector<double> estimate_thresholds(const DetectorBank& bank, double pfa, int n_trials,
                                        std::uint64_t seed, unsigned threads) {
  validate_threshold_request(pfa, n_trials);
  const auto stats = simulate_statistics(bank, std::nullopt, n_trials, seed, Stage::Threshold, threads);
  std::vector<double> thresholds;
  thresholds.reserve(bank.specs().size());
  std::vector<double> column(stats.size());
  for (std::size_t d = 0; d < bank.specs().size(); ++d) {
    for (std::size_t t = 0; t < stats.size(); ++t) column[t] = stats[t][d];
    thresholds.push_back(threshold_from_statistics(column, pfa));
  }
  return thresholds;
}

std::vector<double> exceedance_rates(const DetectorBank& bank, std::optional<double> scr_db,
                                     int n_trials, std::uint64_t seed, Stage stage,
                                     unsigned threads) {
  const auto stats = simulate_statistics(bank, scr_db, n_trials, seed, stage, threads);
  std::vector<double> rates(bank.specs().size(), 0.0);
  for (const auto& row : stats) {
    for (std::size_t d = 0; d < rates.size(); ++d) {
      if (row[d] > bank.specs()[d].threshold) rates[d] += 1.0;
    }
  }
  for (auto& r : rates) r /= static_cast<double>(stats.size());
  return rates;
}

double estimate_threshold(const DetectorSpec& spec, const ClutterScenario& sc, int secondary_count,
                          double pfa, int n_trials, std::uint64_t seed, const MeanConfig& mean,
                          unsigned threads) {
  const DetectorBank bank({spec}, sc, secondary_count, mean);
  return estimate_thresholds(bank, pfa, n_trials, seed, threads).front();
}

double estimate_pd(const DetectorSpec& spec, const ClutterScenario& sc, int secondary_count,
                   double scr_db, int n_trials, std::uint64_t seed, const MeanConfig& mean,
                   unsigned threads) {
  if (n_trials < 100) throw ValidationError("estimate_pd: need at least 100 trials");
  const DetectorBank bank({spec}, sc, secondary_count, mean);
  return exceedance_rates(bank, scr_db, n_trials, seed, Stage::Detection, threads).front();
}

}  // namespace mig
