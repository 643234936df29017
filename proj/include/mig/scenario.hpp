#pragma once

// Generative model of a nonhomogeneous clutter environment: Gaussian-shaped
// clutter covariance plus thermal noise, a Doppler-shifted point target, and
// interferers injected into chosen secondary cells.

#include <cstdint>
#include <optional>
#include <vector>

#include "mig/means.hpp"
#include "mig/rng.hpp"

namespace mig {

struct InterferenceSpec {
  int count = 2;
  double f_i = 0.22;
  double inr_db = 20.0;
  /// Interferers occupy secondary cells [0, count).
  bool in_null_trials = true;
};

struct ClutterScenario {
  int n = 8;
  double cnr_db = 25.0;
  double rho = 0.95;
  double f_c = 0.1;
  double sigma_n2 = 1.0;
  double f_s = 0.2;
  InterferenceSpec interference;

  void validate() const;
  double clutter_power() const;       // sigma_c^2 = sigma_n^2 10^{cnr/10}
  double interference_power() const;  // sigma_n^2 10^{inr/10}
  /// |alpha|^2 for a given SCR, with SCR = |alpha|^2 / sigma_c^2.
  double target_power(double scr_db) const;
};

/// Unit-norm steering vector, entry k = exp(-i 2 pi f_d k) / sqrt(N).
CVector steering(int n, double f_d);

/// C = sigma_c^2 C0 + sigma_n^2 I with [C0]_{ij} = rho^{|i-j|} exp(i 2 pi f_c (i - j)).
HpdMatrix clutter_cov(const ClutterScenario& sc);

struct TargetComponent {
  Complex alpha;
  CVector p;
};

struct InterferenceComponent {
  Complex amplitude;
  double f_i;
};

/// Draws one snapshot c + alpha p + beta s(f_i), c ~ CN(0, C).
class ClutterSampler {
 public:
  explicit ClutterSampler(const HpdMatrix& c);
  CVector draw(Rng& rng, const std::optional<TargetComponent>& target = std::nullopt,
               const std::optional<InterferenceComponent>& interference = std::nullopt) const;
  const CMatrix& factor() const noexcept { return l_; }

 private:
  CMatrix l_;
};

CVector draw_vector(const HpdMatrix& c, const std::optional<TargetComponent>& target,
                    const std::optional<InterferenceComponent>& interference, Rng& rng);

/// Lag-correlation estimate r_l = (1/N) sum_i x_i conj(x_{i+l}), then
/// R = r r^H + tr(r r^H) I.
HpdMatrix build_hpd_observation(const CVector& x);

struct TrainingSet {
  std::vector<HpdMatrix> clutter_only;
  std::vector<HpdMatrix> with_target;
  double scr_db = 0.0;

  /// Clutter-only elements first, then the target-bearing ones.
  HpdSet combined() const;
};

TrainingSet gen_training(const ClutterScenario& sc, int j, int k, double scr_db, std::uint64_t seed);

/// Raw snapshots of one detection trial.
struct TrialData {
  std::vector<CVector> secondary;
  CVector cut;
};

/// Generates a trial's secondary cells and CUT. The target (when scr_db is set)
/// is added to the CUT with uniform random phase. The same rng stream with and
/// without a target yields the same clutter.
TrialData draw_trial(const ClutterScenario& sc, const ClutterSampler& sampler, int k,
                     std::optional<double> scr_db, Rng& rng);

}  // namespace mig
