#include "mig/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mig {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
}  // namespace

void ClutterScenario::validate() const {
  if (n < 2) throw ValidationError("scenario: dimension must be at least 2");
  if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("scenario: rho must lie in (0, 1)");
  if (!(sigma_n2 > 0.0)) throw ValidationError("scenario: sigma_n2 must be positive");
  if (interference.count < 0) throw ValidationError("scenario: interference count must be >= 0");
  if (!std::isfinite(cnr_db) || !std::isfinite(f_c) || !std::isfinite(f_s) ||
      !std::isfinite(interference.f_i) || !std::isfinite(interference.inr_db)) {
    throw ValidationError("scenario: non-finite parameter");
  }
}

double ClutterScenario::clutter_power() const { return sigma_n2 * db_to_linear(cnr_db); }
double ClutterScenario::interference_power() const {
  return sigma_n2 * db_to_linear(interference.inr_db);
}
double ClutterScenario::target_power(double scr_db) const {
  return clutter_power() * db_to_linear(scr_db);
}

CVector steering(int n, double f_d) {
  if (n < 1) throw ValidationError("steering: length must be at least 1");
  CVector p(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) p(k) = std::polar(norm, -kTwoPi * f_d * k);
  return p;
}

HpdMatrix clutter_cov(const ClutterScenario& sc) {
  sc.validate();
  const double sigma_c2 = sc.clutter_power();
  CMatrix c(sc.n, sc.n);
  for (int i = 0; i < sc.n; ++i) {
    for (int j = 0; j < sc.n; ++j) {
      const int lag = i - j;
      c(i, j) = sigma_c2 * std::pow(sc.rho, std::abs(lag)) * std::polar(1.0, kTwoPi * sc.f_c * lag);
    }
    c(i, i) += sc.sigma_n2;
  }
  return HpdMatrix(c);
}

ClutterSampler::ClutterSampler(const HpdMatrix& c) : l_(chol_hpd(c)) {}

CVector ClutterSampler::draw(Rng& rng, const std::optional<TargetComponent>& target,
                             const std::optional<InterferenceComponent>& interference) const {
  CVector x = l_.triangularView<Eigen::Lower>() * rng.complex_normal_vector(l_.rows());
  if (target) x += target->alpha * target->p;
  if (interference) {
    x += interference->amplitude * steering(static_cast<int>(l_.rows()), interference->f_i);
  }
  return x;
}

CVector draw_vector(const HpdMatrix& c, const std::optional<TargetComponent>& target,
                    const std::optional<InterferenceComponent>& interference, Rng& rng) {
  return ClutterSampler(c).draw(rng, target, interference);
}

HpdMatrix build_hpd_observation(const CVector& x) {
  const Index n = x.size();
  if (n < 1) throw ValidationError("build_hpd_observation: empty vector");
  if (x.squaredNorm() == 0.0) {
    throw ValidationError("build_hpd_observation: zero input gives a degenerate loading term");
  }
  CVector r(n);
  for (Index l = 0; l < n; ++l) {
    Complex acc = 0.0;
    for (Index i = 0; i + l < n; ++i) acc += x(i) * std::conj(x(i + l));
    r(l) = acc / static_cast<double>(n);
  }
  const double load = r.squaredNorm();  // tr(r r^H)
  CMatrix out = r * r.adjoint();
  out.diagonal().array() += load;
  return HpdMatrix::assume(out);
}

HpdSet TrainingSet::combined() const {
  std::vector<HpdMatrix> all = clutter_only;
  all.insert(all.end(), with_target.begin(), with_target.end());
  return HpdSet(std::move(all));
}

TrainingSet gen_training(const ClutterScenario& sc, int j, int k, double scr_db, std::uint64_t seed) {
  sc.validate();
  if (j < 1 || k < 1) throw ValidationError("gen_training: J and K must be positive");
  const ClutterSampler sampler(clutter_cov(sc));
  const CVector p = steering(sc.n, sc.f_s);
  const double amplitude = std::sqrt(sc.target_power(scr_db));
  TrainingSet out;
  out.scr_db = scr_db;
  out.clutter_only.reserve(j);
  out.with_target.reserve(k);
  for (int i = 0; i < j; ++i) {
    Rng rng(seed, stream_id(Stage::Training, static_cast<std::uint64_t>(i)));
    out.clutter_only.push_back(build_hpd_observation(sampler.draw(rng)));
  }
  for (int i = 0; i < k; ++i) {
    Rng rng(seed, stream_id(Stage::Training, static_cast<std::uint64_t>(j + i)));
    const Complex alpha = amplitude * rng.unit_phase();
    out.with_target.push_back(build_hpd_observation(sampler.draw(rng, TargetComponent{alpha, p})));
  }
  return out;
}

TrialData draw_trial(const ClutterScenario& sc, const ClutterSampler& sampler, int k,
                     std::optional<double> scr_db, Rng& rng) {
  if (k < 1) throw ValidationError("draw_trial: need at least one secondary cell");
  if (sc.interference.count > k) {
    std::ostringstream os;
    os << "draw_trial: " << sc.interference.count << " interferers but only " << k
       << " secondary cells";
    throw ValidationError(os.str());
  }
  // Phases are drawn unconditionally so H0 and H1 trials share clutter draws.
  const Complex target_phase = rng.unit_phase();
  const bool interfere = scr_db.has_value() || sc.interference.in_null_trials;
  const double beta = std::sqrt(sc.interference_power());
  TrialData t;
  t.secondary.reserve(k);
  for (int i = 0; i < k; ++i) {
    const Complex phase = rng.unit_phase();
    std::optional<InterferenceComponent> jam;
    if (interfere && i < sc.interference.count) jam = InterferenceComponent{beta * phase, sc.interference.f_i};
    t.secondary.push_back(sampler.draw(rng, std::nullopt, jam));
  }
  std::optional<TargetComponent> target;
  if (scr_db) target = TargetComponent{std::sqrt(sc.target_power(*scr_db)) * target_phase, steering(sc.n, sc.f_s)};
  t.cut = sampler.draw(rng, target);
  return t;
}

}  // namespace mig
