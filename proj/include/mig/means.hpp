#pragma once

#include <optional>
#include <vector>

#include "mig/geometry.hpp"

namespace mig {

/// A non-empty collection of HPD matrices sharing one order.
class HpdSet {
 public:
  explicit HpdSet(std::vector<HpdMatrix> matrices);

  std::size_t size() const noexcept { return items_.size(); }
  Index order() const noexcept { return items_.front().order(); }
  const HpdMatrix& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }
  const std::vector<HpdMatrix>& items() const noexcept { return items_; }

 private:
  std::vector<HpdMatrix> items_;
};

enum class AirmSolver {
  Karcher,            // Riemannian descent on the manifold, initialized at the LEM mean
  LogDomainFixedPoint  // the relaxed fixed-point recursion with the iterate held as a logarithm
};

struct MeanConfig {
  int max_iterations = 200;
  double residual_tolerance = 1e-10;
  /// Relaxation a of the log-domain AIRM recursion, in (1 - 1/K, 1). Defaults to 1 - 1/(2K).
  std::optional<double> airm_relaxation;
  AirmSolver airm_solver = AirmSolver::Karcher;
  /// History depth of Anderson mixing on the JBLD fixed-point map; 0 runs the
  /// plain recursion, which contracts slowly when the set spans many scales.
  int jbld_anderson_depth = 5;

  void validate(std::size_t set_size) const;
};

/// Minimizer of sum_k d^2(R_k, R) for the chosen measure.
HpdMatrix geometric_mean(Measure m, const HpdSet& set, const MeanConfig& cfg = {});

/// (1/K) sum_k R_k. Not a geometric mean; used for initialization and timing baselines.
HpdMatrix arithmetic_mean(const HpdSet& set);

/// (1/|set|) sum_i d^2(R_i, mean).
double variance(Measure m, const HpdSet& set, const HpdMatrix& mean);

/// ||sum_k Log(M^{-1/2} R_k M^{-1/2})||_F, zero exactly at the Karcher mean.
double airm_stationarity(const HpdSet& set, const HpdMatrix& mean);

/// One application of the JBLD fixed-point map to `current`.
HpdMatrix jbld_fixed_point_map(const HpdSet& set, const HpdMatrix& current);

namespace detail {
CMatrix lem_mean(const std::vector<CMatrix>& set);
CMatrix skld_mean(const std::vector<CMatrix>& set);
CMatrix jbld_map(const std::vector<CMatrix>& set, const CMatrix& r);
CMatrix jbld_mean(const std::vector<CMatrix>& set, const MeanConfig& cfg);
CMatrix airm_mean(const std::vector<CMatrix>& set, const MeanConfig& cfg);
CMatrix geometric_mean(Measure m, const std::vector<CMatrix>& set, const MeanConfig& cfg);
}  // namespace detail

}  // namespace mig
