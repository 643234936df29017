#include "mig/means.hpp"

#include <cmath>
#include <sstream>

namespace mig {

HpdSet::HpdSet(std::vector<HpdMatrix> matrices) : items_(std::move(matrices)) {
  if (items_.empty()) throw ValidationError("HpdSet: empty set");
  const Index n = items_.front().order();
  for (std::size_t i = 1; i < items_.size(); ++i) {
    if (items_[i].order() != n) {
      std::ostringstream os;
      os << "HpdSet: element " << i << " has order " << items_[i].order() << ", expected " << n;
      throw ValidationError(os.str());
    }
  }
}

void MeanConfig::validate(std::size_t set_size) const {
  if (max_iterations < 1) throw ValidationError("MeanConfig: max_iterations must be positive");
  if (!(residual_tolerance > 0.0)) throw ValidationError("MeanConfig: residual_tolerance must be > 0");
  if (airm_relaxation && set_size > 1) {
    const double k = static_cast<double>(set_size);
    const double a = *airm_relaxation;
    if (!(a > 1.0 - 1.0 / k && a < 1.0)) {
      std::ostringstream os;
      os << "MeanConfig: airm_relaxation " << a << " outside (" << 1.0 - 1.0 / k << ", 1)";
      throw ValidationError(os.str());
    }
  }
}

namespace detail {

namespace {

std::vector<CMatrix> raw(const HpdSet& set) {
  std::vector<CMatrix> out;
  out.reserve(set.size());
  for (const auto& m : set) out.push_back(m.matrix());
  return out;
}

double relative_change(const CMatrix& next, const CMatrix& prev) {
  const double denom = prev.norm();
  return denom > 0.0 ? (next - prev).norm() / denom : (next - prev).norm();
}

CMatrix arithmetic(const std::vector<CMatrix>& set) {
  CMatrix acc = CMatrix::Zero(set.front().rows(), set.front().cols());
  for (const auto& r : set) acc += r;
  return acc / static_cast<double>(set.size());
}

struct KarcherState {
  CMatrix sqrt_r;
  CMatrix inv_sqrt_r;
  CMatrix tangent;  // sum_k Log(R^{-1/2} R_k R^{-1/2})
  double cost = 0.0;
};

KarcherState karcher_state(const std::vector<CMatrix>& set, const CMatrix& r) {
  const SpectralDecomposition e = eig(r);
  if (!(e.eigenvalues(e.eigenvalues.size() - 1) > 0.0)) {
    throw NumericError("AIRM mean: iterate lost positive definiteness");
  }
  KarcherState s;
  s.sqrt_r = e.apply([](double x) { return std::sqrt(x); });
  s.inv_sqrt_r = e.apply([](double x) { return 1.0 / std::sqrt(x); });
  s.tangent = CMatrix::Zero(r.rows(), r.cols());
  for (const auto& rk : set) {
    const SpectralDecomposition ek = eig(hermitian_part(s.inv_sqrt_r * rk * s.inv_sqrt_r));
    RVector logs = ek.eigenvalues.unaryExpr([](double x) { return std::log(x); });
    s.cost += logs.squaredNorm();
    s.tangent += ek.basis * logs.asDiagonal() * ek.basis.adjoint();
  }
  s.tangent = hermitian_part(s.tangent);
  return s;
}

double log_scale(const std::vector<CMatrix>& set) {
  double acc = 0.0;
  for (const auto& r : set) acc += log_hpd(r).norm();
  return std::max(1.0, acc / static_cast<double>(set.size()));
}

CMatrix airm_karcher(const std::vector<CMatrix>& set, const MeanConfig& cfg) {
  const double k = static_cast<double>(set.size());
  CMatrix r = lem_mean(set);
  KarcherState st = karcher_state(set, r);
  double step = 1.0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (st.tangent.norm() < cfg.residual_tolerance * k) return r;
    bool accepted = false;
    for (int halving = 0; halving < 50; ++halving) {
      const CMatrix candidate =
          hermitian_part(st.sqrt_r * exp_hermitian(st.tangent * (step / k)) * st.sqrt_r);
      KarcherState next = karcher_state(set, candidate);
      // Near the mean the cost decrease falls below its own round-off; the
      // stationarity residual is then the reliable merit.
      const bool cost_flat = std::abs(next.cost - st.cost) <= 1e-13 * std::max(st.cost, 1e-300);
      if (next.cost < st.cost || (cost_flat && next.tangent.norm() < st.tangent.norm())) {
        const double change = relative_change(candidate, r);
        const bool full_step = step == 1.0;
        r = candidate;
        st = std::move(next);
        accepted = true;
        step = std::min(1.0, 2.0 * step);
        if (full_step && change < cfg.residual_tolerance) return r;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent left at working precision
  }
  const double residual = st.tangent.norm();
  if (residual <= 1e-6 * k * log_scale(set)) return r;
  std::ostringstream os;
  os << "AIRM mean: no convergence after " << cfg.max_iterations
     << " iterations, stationarity residual " << residual;
  throw NumericError(os.str());
}

CMatrix airm_log_domain(const std::vector<CMatrix>& set, const MeanConfig& cfg) {
  const double k = static_cast<double>(set.size());
  const double a = cfg.airm_relaxation.value_or(1.0 - 1.0 / (2.0 * k));
  std::vector<CMatrix> inverses;
  inverses.reserve(set.size());
  for (const auto& r : set) inverses.push_back(inv_hpd(r));

  CMatrix l = CMatrix::Zero(set.front().rows(), set.front().cols());
  for (const auto& r : set) l += log_hpd(r);
  l /= k;
  double change = 0.0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const CMatrix half = exp_hermitian(0.5 * l);
    CMatrix sum = CMatrix::Zero(l.rows(), l.cols());
    // the recursion sums from the second element on
    for (std::size_t j = 1; j < inverses.size(); ++j) {
      sum += log_hpd(hermitian_part(half * inverses[j] * half));
    }
    const CMatrix next = hermitian_part(a * l + (a - 1.0) * sum);
    change = (next - l).norm() / std::max(1.0, l.norm());
    l = next;
    if (change < cfg.residual_tolerance) return exp_hermitian(l);
  }
  std::ostringstream os;
  os << "AIRM log-domain recursion: no convergence after " << cfg.max_iterations
     << " iterations, last change " << change;
  throw NumericError(os.str());
}

}  // namespace

CMatrix lem_mean(const std::vector<CMatrix>& set) {
  CMatrix acc = CMatrix::Zero(set.front().rows(), set.front().cols());
  for (const auto& r : set) acc += log_hpd(r);
  return exp_hermitian(hermitian_part(acc / static_cast<double>(set.size())));
}

CMatrix skld_mean(const std::vector<CMatrix>& set) {
  CMatrix a = CMatrix::Zero(set.front().rows(), set.front().cols());
  CMatrix b = a;
  for (const auto& r : set) {
    a += inv_hpd(r);
    b += r;
  }
  const SpectralDecomposition ea = eig(hermitian_part(a));
  const CMatrix a_half = ea.apply([](double x) { return std::sqrt(x); });
  const CMatrix a_inv_half = ea.apply([](double x) { return 1.0 / std::sqrt(x); });
  const CMatrix middle = eig(hermitian_part(a_half * b * a_half)).apply([](double x) {
    return std::sqrt(x);
  });
  return hermitian_part(a_inv_half * middle * a_inv_half);
}

CMatrix jbld_map(const std::vector<CMatrix>& set, const CMatrix& r) {
  CMatrix acc = CMatrix::Zero(r.rows(), r.cols());
  for (const auto& rk : set) acc += inv_hpd(0.5 * (r + rk));
  return inv_hpd(hermitian_part(acc / static_cast<double>(set.size())));
}

namespace {

// Hermitian matrix <-> real coordinates, so mixing weights stay real.
Eigen::VectorXd to_real(const CMatrix& m) {
  Eigen::VectorXd v(2 * m.size());
  for (Index i = 0; i < m.size(); ++i) {
    v(2 * i) = m.data()[i].real();
    v(2 * i + 1) = m.data()[i].imag();
  }
  return v;
}

CMatrix from_real(const Eigen::VectorXd& v, Index n) {
  CMatrix m(n, n);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(v(2 * i), v(2 * i + 1));
  return hermitian_part(m);
}

bool positive_definite(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  return llt.info() == Eigen::Success;
}

}  // namespace

CMatrix jbld_mean(const std::vector<CMatrix>& set, const MeanConfig& cfg) {
  const Index n = set.front().rows();
  const int depth = std::max(0, cfg.jbld_anderson_depth);
  CMatrix r = arithmetic(set);
  std::vector<Eigen::VectorXd> d_res, d_img;  // history of residual and image differences
  Eigen::VectorXd prev_res, prev_img;
  double change = 0.0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const CMatrix image = jbld_map(set, r);
    change = relative_change(image, r);
    if (change < cfg.residual_tolerance) return image;
    if (depth == 0) {
      r = image;
      continue;
    }
    const Eigen::VectorXd img = to_real(image);
    const Eigen::VectorXd res = img - to_real(r);
    if (prev_res.size() > 0) {
      d_res.push_back(res - prev_res);
      d_img.push_back(img - prev_img);
      if (static_cast<int>(d_res.size()) > depth) {
        d_res.erase(d_res.begin());
        d_img.erase(d_img.begin());
      }
    }
    prev_res = res;
    prev_img = img;
    CMatrix next = image;
    if (!d_res.empty()) {
      Eigen::MatrixXd f(res.size(), static_cast<Index>(d_res.size()));
      Eigen::MatrixXd g(res.size(), static_cast<Index>(d_img.size()));
      for (std::size_t c = 0; c < d_res.size(); ++c) {
        f.col(static_cast<Index>(c)) = d_res[c];
        g.col(static_cast<Index>(c)) = d_img[c];
      }
      const Eigen::VectorXd gamma = f.colPivHouseholderQr().solve(res);
      const CMatrix mixed = from_real(img - g * gamma, n);
      if (mixed.allFinite() && positive_definite(mixed)) {
        next = mixed;
      } else {
        d_res.clear();
        d_img.clear();
      }
    }
    r = next;
  }
  std::ostringstream os;
  os << "JBLD mean: fixed point did not converge after " << cfg.max_iterations
     << " iterations, last relative change " << change;
  throw NumericError(os.str());
}

CMatrix airm_mean(const std::vector<CMatrix>& set, const MeanConfig& cfg) {
  return cfg.airm_solver == AirmSolver::Karcher ? airm_karcher(set, cfg) : airm_log_domain(set, cfg);
}

CMatrix geometric_mean(Measure m, const std::vector<CMatrix>& set, const MeanConfig& cfg) {
  if (set.empty()) throw ValidationError("geometric_mean: empty set");
  cfg.validate(set.size());
  if (set.size() == 1) return set.front();
  switch (m) {
    case Measure::Lem: return lem_mean(set);
    case Measure::Skld: return skld_mean(set);
    case Measure::Jbld: return jbld_mean(set, cfg);
    case Measure::Airm: return airm_mean(set, cfg);
  }
  throw ValidationError("geometric_mean: unknown measure");
}

}  // namespace detail

HpdMatrix geometric_mean(Measure m, const HpdSet& set, const MeanConfig& cfg) {
  return HpdMatrix::assume(detail::geometric_mean(m, detail::raw(set), cfg));
}

HpdMatrix arithmetic_mean(const HpdSet& set) {
  return HpdMatrix::assume(detail::arithmetic(detail::raw(set)));
}

double variance(Measure m, const HpdSet& set, const HpdMatrix& mean) {
  if (mean.order() != set.order()) {
    std::ostringstream os;
    os << "variance: mean order " << mean.order() << " does not match set order " << set.order();
    throw ValidationError(os.str());
  }
  double acc = 0.0;
  for (const auto& r : set) acc += sq_dist(m, r, mean);
  return acc / static_cast<double>(set.size());
}

double airm_stationarity(const HpdSet& set, const HpdMatrix& mean) {
  if (mean.order() != set.order()) throw ValidationError("airm_stationarity: order mismatch");
  const CMatrix inv_sqrt = inv_sqrt_hpd(mean).matrix();
  CMatrix acc = CMatrix::Zero(mean.order(), mean.order());
  for (const auto& r : set) acc += detail::log_hpd(hermitian_part(inv_sqrt * r.matrix() * inv_sqrt));
  return acc.norm();
}

HpdMatrix jbld_fixed_point_map(const HpdSet& set, const HpdMatrix& current) {
  if (current.order() != set.order()) throw ValidationError("jbld_fixed_point_map: order mismatch");
  return HpdMatrix::assume(detail::jbld_map(detail::raw(set), current.matrix()));
}

}  // namespace mig
