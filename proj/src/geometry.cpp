#include "mig/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace mig {

std::string to_string(Measure m) {
  switch (m) {
    case Measure::Airm: return "AIRM";
    case Measure::Lem: return "LEM";
    case Measure::Jbld: return "JBLD";
    case Measure::Skld: return "SKLD";
  }
  return "?";
}

Measure parse_measure(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  for (Measure m : kAllMeasures) {
    if (to_string(m) == up) return m;
  }
  throw ValidationError("unknown geometric measure '" + std::string(name) + "'");
}

namespace detail {

namespace {

double airm(const CMatrix& x, const CMatrix& y) {
  // eigenvalues of X^{-1/2} Y X^{-1/2} equal those of L^{-1} Y L^{-H} with X = L L^H
  Eigen::LLT<CMatrix> llt(x);
  if (llt.info() != Eigen::Success) throw NumericError("AIRM: first argument is not positive definite");
  CMatrix t = llt.matrixL().solve(y);
  t = llt.matrixL().solve(t.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(t), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("AIRM: eigenvalue iteration did not converge");
  double acc = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (!(lam > 0.0)) throw DomainError("AIRM: non-positive generalized eigenvalue");
    const double l = std::log(lam);
    acc += l * l;
  }
  return acc;
}

double jbld(const CMatrix& x, const CMatrix& y) {
  return logdet_hpd(0.5 * (x + y)) - 0.5 * (logdet_hpd(x) + logdet_hpd(y));
}

double trace_solve(const Eigen::LLT<CMatrix>& llt, const CMatrix& rhs) {
  return llt.solve(rhs).trace().real();
}

double skld(const CMatrix& x, const CMatrix& y) {
  Eigen::LLT<CMatrix> lx(x), ly(y);
  if (lx.info() != Eigen::Success || ly.info() != Eigen::Success) {
    throw NumericError("SKLD: argument is not positive definite");
  }
  return 0.5 * (trace_solve(ly, x) + trace_solve(lx, y)) - static_cast<double>(x.rows());
}

}  // namespace

double lem_sq_dist_logs(const CMatrix& log_x, const CMatrix& log_y) {
  return (log_x - log_y).squaredNorm();
}

double sq_dist(Measure m, const CMatrix& x, const CMatrix& y) {
  double d = 0.0;
  switch (m) {
    case Measure::Airm: d = airm(x, y); break;
    case Measure::Lem: d = lem_sq_dist_logs(log_hpd(x), log_hpd(y)); break;
    case Measure::Jbld: d = jbld(x, y); break;
    case Measure::Skld: d = skld(x, y); break;
  }
  return std::max(d, 0.0);
}

}  // namespace detail

double sq_dist(Measure m, const HpdMatrix& x, const HpdMatrix& y) {
  if (x.order() != y.order()) {
    std::ostringstream os;
    os << "sq_dist: order mismatch (" << x.order() << " vs " << y.order() << ")";
    throw ValidationError(os.str());
  }
  return detail::sq_dist(m, x.matrix(), y.matrix());
}

}  // namespace mig
