#include "mig/matlin.hpp"

#include <cmath>
#include <sstream>

namespace mig {

namespace {

void require_square_finite(const CMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entry");
}

void require_hermitian(const CMatrix& m, double rel_tol, const char* what) {
  require_square_finite(m, what);
  const double defect = hermitian_defect(m);
  if (defect > rel_tol) {
    std::ostringstream os;
    os << what << ": not Hermitian (relative defect " << defect << ")";
    throw ValidationError(os.str());
  }
}

void require_positive(const RVector& eigenvalues, const char* what) {
  // eigenvalues are descending
  const double smallest = eigenvalues(eigenvalues.size() - 1);
  if (!(smallest > 0.0)) {
    std::ostringstream os;
    os << what << ": non-positive eigenvalue " << smallest;
    throw DomainError(os.str());
  }
}

}  // namespace

double hermitian_defect(const CMatrix& a) {
  const double norm = a.norm();
  if (norm == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / norm;
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

HermitianMatrix::HermitianMatrix(const CMatrix& m, double rel_tol) {
  require_hermitian(m, rel_tol, "HermitianMatrix");
  m_ = hermitian_part(m);
}

HermitianMatrix HermitianMatrix::assume(const CMatrix& m) { return {Trusted{}, hermitian_part(m)}; }

HpdMatrix::HpdMatrix(const CMatrix& m, double rel_tol) {
  require_hermitian(m, rel_tol, "HpdMatrix");
  m_ = hermitian_part(m);
  const RVector ev = detail::eig(m_).eigenvalues;
  const double largest = ev(0);
  const double smallest = ev(ev.size() - 1);
  if (!(smallest > kHpdConditionFloor * largest) || !(largest > 0.0)) {
    std::ostringstream os;
    os << "HpdMatrix: smallest eigenvalue " << smallest << " not above " << kHpdConditionFloor
       << " x largest (" << largest << ")";
    throw DomainError(os.str());
  }
}

HpdMatrix HpdMatrix::assume(const CMatrix& m) { return {Trusted{}, hermitian_part(m)}; }

CMatrix SpectralDecomposition::reassemble() const {
  return basis * eigenvalues.asDiagonal() * basis.adjoint();
}

namespace detail {

SpectralDecomposition eig(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eig_hermitian: QR iteration did not converge within "
       << Eigen::SelfAdjointEigenSolver<CMatrix>::m_maxIterations << " x n sweeps (n=" << h.rows()
       << ")";
    throw NumericError(os.str());
  }
  // Eigen sorts ascending; reverse to descending.
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.basis = solver.eigenvectors().rowwise().reverse();
  return out;
}

CMatrix log_hpd(const CMatrix& p) {
  const SpectralDecomposition e = eig(p);
  require_positive(e.eigenvalues, "log");
  return e.apply([](double x) { return std::log(x); });
}

CMatrix exp_hermitian(const CMatrix& h) {
  return eig(h).apply([](double x) { return std::exp(x); });
}

CMatrix inv_hpd(const CMatrix& p) {
  Eigen::LLT<CMatrix> llt(p);
  if (llt.info() != Eigen::Success) throw NumericError("inverse: matrix is not positive definite");
  return hermitian_part(llt.solve(CMatrix::Identity(p.rows(), p.cols())));
}

}  // namespace detail

SpectralDecomposition eig_hermitian(const HermitianMatrix& h) { return detail::eig(h.matrix()); }

SpectralDecomposition eig_hermitian(const CMatrix& h) {
  require_hermitian(h, kHermitianTolerance, "eig_hermitian");
  return detail::eig(hermitian_part(h));
}

HermitianMatrix apply_spectral(const HpdMatrix& p, SpectralFunction f) {
  const SpectralDecomposition e = detail::eig(p.matrix());
  switch (f) {
    case SpectralFunction::Exp:
      return HermitianMatrix::assume(e.apply([](double x) { return std::exp(x); }));
    case SpectralFunction::Log:
      require_positive(e.eigenvalues, "log");
      return HermitianMatrix::assume(e.apply([](double x) { return std::log(x); }));
    case SpectralFunction::Sqrt:
      require_positive(e.eigenvalues, "sqrt");
      return HermitianMatrix::assume(e.apply([](double x) { return std::sqrt(x); }));
    case SpectralFunction::InvSqrt:
      require_positive(e.eigenvalues, "inv_sqrt");
      return HermitianMatrix::assume(e.apply([](double x) { return 1.0 / std::sqrt(x); }));
    case SpectralFunction::Inv:
      require_positive(e.eigenvalues, "inv");
      return HermitianMatrix::assume(e.apply([](double x) { return 1.0 / x; }));
  }
  throw ValidationError("apply_spectral: unknown function");
}

HermitianMatrix log_hpd(const HpdMatrix& p) { return apply_spectral(p, SpectralFunction::Log); }

HpdMatrix exp_hermitian(const HermitianMatrix& h) {
  return HpdMatrix::assume(detail::exp_hermitian(h.matrix()));
}

HpdMatrix sqrt_hpd(const HpdMatrix& p) {
  return HpdMatrix::assume(apply_spectral(p, SpectralFunction::Sqrt).matrix());
}

HpdMatrix inv_sqrt_hpd(const HpdMatrix& p) {
  return HpdMatrix::assume(apply_spectral(p, SpectralFunction::InvSqrt).matrix());
}

HpdMatrix inv_hpd(const HpdMatrix& p) {
  return HpdMatrix::assume(apply_spectral(p, SpectralFunction::Inv).matrix());
}

CMatrix chol_hpd(const HpdMatrix& p) {
  Eigen::LLT<CMatrix> llt(p.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericError("chol_hpd: matrix lost positive definiteness during factorization");
  }
  return llt.matrixL();
}

double logdet_hpd(const CMatrix& p) {
  Eigen::LLT<CMatrix> llt(p);
  if (llt.info() != Eigen::Success) throw NumericError("logdet: matrix is not positive definite");
  const CMatrix& l = llt.matrixLLT();
  double acc = 0.0;
  for (Index i = 0; i < l.rows(); ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc;
}

double log_divided_difference(double a, double b) {
  const double gap = a - b;
  if (std::abs(gap) < 1e-12 * std::max(a, b)) return 1.0 / a;
  if (std::abs(gap) > 0.5 * std::max(a, b)) return (std::log(a) - std::log(b)) / gap;
  // log1p keeps precision when a and b are close but not coincident
  return std::log1p(gap / b) / gap;
}

HermitianMatrix dlog_kernel(const SpectralDecomposition& v_eig, const HermitianMatrix& l) {
  const Index n = v_eig.eigenvalues.size();
  if (l.order() != n) {
    std::ostringstream os;
    os << "dlog_kernel: order mismatch (" << n << " vs " << l.order() << ")";
    throw ValidationError(os.str());
  }
  require_positive(v_eig.eigenvalues, "dlog_kernel");
  const CMatrix& u = v_eig.basis;
  CMatrix t = u.adjoint() * l.matrix() * u;
  const RVector& lam = v_eig.eigenvalues;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) t(i, j) *= log_divided_difference(lam(i), lam(j));
  }
  return HermitianMatrix::assume(u * t * u.adjoint());
}

HermitianMatrix dlog_kernel(const HpdMatrix& v, const HermitianMatrix& l) {
  if (l.order() != v.order()) {
    std::ostringstream os;
    os << "dlog_kernel: order mismatch (" << v.order() << " vs " << l.order() << ")";
    throw ValidationError(os.str());
  }
  return dlog_kernel(detail::eig(v.matrix()), l);
}

}  // namespace mig
