#include "mig/projection.hpp"

#include <cmath>
#include <sstream>

#include "mig/rng.hpp"

namespace mig {

namespace {

// Thin QR with the triangular factor's diagonal made real and positive.
CMatrix orthonormalize(const CMatrix& a) {
  const Index n = a.rows();
  const Index m = a.cols();
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, m);
  const double scale = std::max(a.norm(), 1e-300);
  for (Index j = 0; j < m; ++j) {
    const Complex r = qr.matrixQR()(j, j);
    const double mag = std::abs(r);
    if (mag <= 1e-14 * scale) {
      std::ostringstream os;
      os << "retract: rank deficiency in column " << j << " (|R_jj| = " << mag << ")";
      throw NumericError(os.str());
    }
    q.col(j) *= r / mag;
  }
  return q;
}

void require_compatible(const StiefelMatrix& w, Index order, const char* what) {
  if (order != w.ambient()) {
    std::ostringstream os;
    os << what << ": matrix order " << order << " does not match projection ambient dimension "
       << w.ambient();
    throw ValidationError(os.str());
  }
}

CMatrix compress_raw(const CMatrix& w, const CMatrix& r) {
  return hermitian_part(w.adjoint() * r * w);
}

std::vector<CMatrix> compress_all(const CMatrix& w, const std::vector<CMatrix>& data) {
  std::vector<CMatrix> out;
  out.reserve(data.size());
  for (const auto& r : data) out.push_back(compress_raw(w, r));
  return out;
}

double mean_sq_dist(Measure m, const std::vector<CMatrix>& compressed, const CMatrix& z) {
  double acc = 0.0;
  if (m == Measure::Lem) {
    const CMatrix log_z = detail::log_hpd(z);
    for (const auto& v : compressed) acc += detail::lem_sq_dist_logs(detail::log_hpd(v), log_z);
  } else {
    for (const auto& v : compressed) acc += detail::sq_dist(m, v, z);
  }
  return acc / static_cast<double>(compressed.size());
}

// Per-element factor G_i such that grad psi = scale * sum_i R_i W G_i.
CMatrix gradient_factor(Measure m, const CMatrix& v, const CMatrix& z, const CMatrix& log_z,
                        const CMatrix& z_inv, std::size_t index) {
  Eigen::LLT<CMatrix> llt(v);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "euclid_grad: compressed element " << index << " is numerically singular";
    throw NumericError(os.str());
  }
  switch (m) {
    case Measure::Lem: {
      // V^{-1} Log V - int_0^1 M(s)^{-1} Log Z M(s)^{-1} ds
      const SpectralDecomposition ev = detail::eig(v);
      const CMatrix inv_log = ev.apply([](double x) { return std::log(x) / x; });
      return inv_log - dlog_kernel(ev, HermitianMatrix::assume(log_z)).matrix();
    }
    case Measure::Airm: {
      // V^{-1} Log(Z V^{-1}) = V^{-1/2} Log(V^{-1/2} Z V^{-1/2}) V^{-1/2}
      const SpectralDecomposition ev = detail::eig(v);
      const CMatrix inv_half = ev.apply([](double x) { return 1.0 / std::sqrt(x); });
      const CMatrix inner = detail::log_hpd(hermitian_part(inv_half * z * inv_half));
      return inv_half * inner * inv_half;
    }
    case Measure::Jbld: {
      const CMatrix v_inv = llt.solve(CMatrix::Identity(v.rows(), v.cols()));
      return 2.0 * detail::inv_hpd(v + z) - v_inv;
    }
    case Measure::Skld: {
      const CMatrix v_inv = llt.solve(CMatrix::Identity(v.rows(), v.cols()));
      return z_inv - v_inv * z * v_inv;
    }
  }
  throw ValidationError("euclid_grad: unknown measure");
}

double gradient_scale(Measure m, std::size_t count) {
  const double n = static_cast<double>(count);
  switch (m) {
    case Measure::Lem: return -4.0 / n;
    case Measure::Airm: return 4.0 / n;
    case Measure::Jbld:
    case Measure::Skld: return -1.0 / n;
  }
  return 0.0;
}

CMatrix euclid_grad_raw(Measure m, const CMatrix& w, const std::vector<CMatrix>& data,
                        const CMatrix& z) {
  const CMatrix log_z = m == Measure::Lem ? detail::log_hpd(z) : CMatrix();
  const CMatrix z_inv = m == Measure::Skld ? detail::inv_hpd(z) : CMatrix();
  CMatrix acc = CMatrix::Zero(w.rows(), w.cols());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const CMatrix rw = data[i] * w;
    const CMatrix v = hermitian_part(w.adjoint() * rw);
    acc += rw * gradient_factor(m, v, z, log_z, z_inv, i);
  }
  return gradient_scale(m, data.size()) * acc;
}

CMatrix riem_grad_raw(const CMatrix& w, const CMatrix& g) {
  return g - w * hermitian_part(w.adjoint() * g);
}

std::vector<CMatrix> raw(const HpdSet& set) {
  std::vector<CMatrix> out;
  out.reserve(set.size());
  for (const auto& m : set) out.push_back(m.matrix());
  return out;
}

bool all_identical(const std::vector<CMatrix>& data) {
  for (std::size_t i = 1; i < data.size(); ++i) {
    if ((data[i] - data[0]).norm() > 1e-14 * data[0].norm()) return false;
  }
  return true;
}

}  // namespace

StiefelMatrix::StiefelMatrix(const CMatrix& w, double tol) : w_(w) {
  if (w.cols() < 1 || w.cols() > w.rows()) {
    std::ostringstream os;
    os << "StiefelMatrix: need 1 <= m <= n, got " << w.rows() << "x" << w.cols();
    throw ValidationError(os.str());
  }
  const double defect = orthonormality_defect();
  if (!(defect <= tol)) {
    std::ostringstream os;
    os << "StiefelMatrix: orthonormality defect " << defect << " exceeds " << tol;
    throw ValidationError(os.str());
  }
}

StiefelMatrix StiefelMatrix::coordinate(Index n, Index m) {
  return StiefelMatrix(CMatrix::Identity(n, m));
}

StiefelMatrix StiefelMatrix::random(Index n, Index m, std::uint64_t seed) {
  if (m < 1 || m > n) throw ValidationError("StiefelMatrix::random: need 1 <= m <= n");
  Rng rng(seed, stream_id(Stage::Init, 0));
  return StiefelMatrix(orthonormalize(rng.complex_normal_matrix(n, m)));
}

double StiefelMatrix::orthonormality_defect() const {
  return (w_.adjoint() * w_ - CMatrix::Identity(w_.cols(), w_.cols())).norm();
}

void LearnerConfig::validate() const {
  if (outer_iterations < 1 || rgd_iterations < 1) {
    throw ValidationError("LearnerConfig: iteration counts must be positive");
  }
  if (!(initial_step > 0.0)) throw ValidationError("LearnerConfig: initial_step must be > 0");
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0)) {
    throw ValidationError("LearnerConfig: armijo_shrink must lie in (0, 1)");
  }
  if (!(armijo_slope > 0.0 && armijo_slope < 1.0)) {
    throw ValidationError("LearnerConfig: armijo_slope must lie in (0, 1)");
  }
  if (!(tolerance > 0.0)) throw ValidationError("LearnerConfig: tolerance must be > 0");
}

HpdMatrix compress(const StiefelMatrix& w, const HpdMatrix& r) {
  require_compatible(w, r.order(), "compress");
  CMatrix v = compress_raw(w.matrix(), r.matrix());
  Eigen::LLT<CMatrix> llt(v);
  if (llt.info() != Eigen::Success) throw NumericError("compress: W^H R W is not positive definite");
  return HpdMatrix::assume(v);
}

HpdSet compress(const StiefelMatrix& w, const HpdSet& data) {
  std::vector<HpdMatrix> out;
  out.reserve(data.size());
  for (const auto& r : data) out.push_back(compress(w, r));
  return HpdSet(std::move(out));
}

double psi_loss(Measure m, const StiefelMatrix& w, const HpdSet& data, const HpdMatrix& z) {
  require_compatible(w, data.order(), "psi_loss");
  if (z.order() != w.target()) throw ValidationError("psi_loss: Z order does not match target dimension");
  return -mean_sq_dist(m, compress_all(w.matrix(), raw(data)), z.matrix());
}

CMatrix euclid_grad(Measure m, const StiefelMatrix& w, const HpdSet& data, const HpdMatrix& z) {
  require_compatible(w, data.order(), "euclid_grad");
  if (z.order() != w.target()) {
    throw ValidationError("euclid_grad: Z order does not match target dimension");
  }
  return euclid_grad_raw(m, w.matrix(), raw(data), z.matrix());
}

CMatrix riem_grad(const StiefelMatrix& w, const CMatrix& g) {
  if (g.rows() != w.ambient() || g.cols() != w.target()) {
    std::ostringstream os;
    os << "riem_grad: gradient is " << g.rows() << "x" << g.cols() << ", expected " << w.ambient()
       << "x" << w.target();
    throw ValidationError(os.str());
  }
  return riem_grad_raw(w.matrix(), g);
}

StiefelMatrix retract(const StiefelMatrix& w, const CMatrix& d, double step) {
  if (d.rows() != w.ambient() || d.cols() != w.target()) {
    throw ValidationError("retract: direction shape does not match W");
  }
  if (step == 0.0 || d.norm() == 0.0) return w;
  return StiefelMatrix(orthonormalize(w.matrix() + step * d));
}

LearnedProjection learn_projection(Measure m, const HpdSet& data, Index target_dim,
                                   const LearnerConfig& cfg) {
  cfg.validate();
  const Index n = data.order();
  if (target_dim < 1 || target_dim > n) {
    std::ostringstream os;
    os << "learn_projection: target dimension " << target_dim << " outside [1, " << n << "]";
    throw ValidationError(os.str());
  }
  const std::vector<CMatrix> samples = raw(data);

  StiefelMatrix w = StiefelMatrix::random(n, target_dim, cfg.seed);
  auto solve_mean = [&](const CMatrix& wm) {
    return detail::geometric_mean(m, compress_all(wm, samples), cfg.mean);
  };

  LearnedProjection out{w, m, 0.0, {}, false, 0, 0.0, 0.0};
  if (all_identical(samples)) {
    out.zero_variance = true;
    out.objective_trace.push_back(0.0);
    return out;
  }

  CMatrix z = solve_mean(w.matrix());
  double var = mean_sq_dist(m, compress_all(w.matrix(), samples), z);
  out.objective_trace.push_back(var);
  out.initial_riem_grad_norm = riem_grad_raw(w.matrix(), euclid_grad_raw(m, w.matrix(), samples, z)).norm();

  int inner_budget = cfg.rgd_iterations;
  for (int outer = 0; outer < cfg.outer_iterations && inner_budget > 0; ++outer) {
    StiefelMatrix trial = w;
    double psi = -var;
    int accepted = 0;
    for (int l = 0; l < inner_budget; ++l) {
      const CMatrix g = euclid_grad_raw(m, trial.matrix(), samples, z);
      const CMatrix d = riem_grad_raw(trial.matrix(), g);
      const double d2 = d.squaredNorm();
      if (d2 <= 1e-24 * std::max(g.squaredNorm(), 1e-300)) break;  // stationary
      double step = cfg.initial_step;
      bool found = false;
      for (int h = 0; h < 60; ++h) {
        StiefelMatrix cand = retract(trial, d, -step);
        const double psi_c = -mean_sq_dist(m, compress_all(cand.matrix(), samples), z);
        if (psi_c <= psi - cfg.armijo_slope * step * d2) {
          if (cfg.on_step) cfg.on_step(outer, l, cand, psi, psi_c);
          trial = std::move(cand);
          psi = psi_c;
          found = true;
          break;
        }
        step *= cfg.armijo_shrink;
      }
      if (!found) {
        // descent lost in round-off near a critical point
        if (d.norm() <= 1e-6 * g.norm() || cfg.initial_step * d2 <= 1e-12 * std::abs(psi)) break;
        std::ostringstream os;
        os << "learn_projection: no Armijo step after 60 reductions (outer " << outer << ", inner "
           << l << ", psi " << psi << ", |grad| " << d.norm() << ")";
        throw NumericError(os.str());
      }
      ++accepted;
    }
    if (accepted == 0) break;

    const CMatrix z_next = solve_mean(trial.matrix());
    const double var_next = mean_sq_dist(m, compress_all(trial.matrix(), samples), z_next);
    if (var_next < var - 1e-12 * std::abs(var)) {
      // the stale mean let the inner loop overshoot; retry from w with fewer steps
      inner_budget /= 2;
      continue;
    }
    out.accepted_steps += accepted;
    const double change = var_next - var;
    w = std::move(trial);
    z = z_next;
    var = var_next;
    out.objective_trace.push_back(var);
    if (std::abs(change) < cfg.tolerance * std::max(1.0, std::abs(var))) break;
  }
  out.w = w;
  out.final_variance = var;
  out.final_riem_grad_norm = riem_grad_raw(w.matrix(), euclid_grad_raw(m, w.matrix(), samples, z)).norm();
  return out;
}

}  // namespace mig
