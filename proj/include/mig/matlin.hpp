#pragma once

// Complex Hermitian linear algebra: spectral factorizations, matrix functions
// on the HPD cone, and the Frechet derivative of the matrix logarithm.

#include <complex>
#include <Eigen/Dense>

#include "mig/errors.hpp"

namespace mig {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTolerance = 1e-12;
// Smallest eigenvalue must exceed this fraction of the largest.
inline constexpr double kHpdConditionFloor = 1e-12;

/// Relative Hermitian defect ||A - A^H||_F / ||A||_F (0 for the zero matrix).
double hermitian_defect(const CMatrix& a);

/// (A + A^H) / 2.
CMatrix hermitian_part(const CMatrix& a);

class HermitianMatrix {
 public:
  /// Validates square shape, finiteness and Hermitian symmetry within `rel_tol`,
  /// then stores the exact Hermitian part.
  explicit HermitianMatrix(const CMatrix& m, double rel_tol = kHermitianTolerance);

  /// Skips validation; stores the Hermitian part of `m`. For values that are
  /// Hermitian by construction.
  static HermitianMatrix assume(const CMatrix& m);

  const CMatrix& matrix() const noexcept { return m_; }
  Index order() const noexcept { return m_.rows(); }

 private:
  struct Trusted {};
  HermitianMatrix(Trusted, CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

class HpdMatrix {
 public:
  /// Full check: Hermitian within tolerance and smallest eigenvalue greater than
  /// kHpdConditionFloor times the largest. Throws ValidationError / DomainError.
  explicit HpdMatrix(const CMatrix& m, double rel_tol = kHermitianTolerance);

  /// Symmetrizes only. For values that are HPD by construction (congruences,
  /// exponentials, loaded covariances); matrix functions re-check positivity.
  static HpdMatrix assume(const CMatrix& m);

  const CMatrix& matrix() const noexcept { return m_; }
  Index order() const noexcept { return m_.rows(); }
  HermitianMatrix hermitian() const { return HermitianMatrix::assume(m_); }

 private:
  struct Trusted {};
  HpdMatrix(Trusted, CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

struct SpectralDecomposition {
  RVector eigenvalues;  // descending
  CMatrix basis;        // unitary, columns are eigenvectors

  /// basis * diag(g(eigenvalues)) * basis^H
  template <class F>
  CMatrix apply(F&& g) const {
    RVector v = eigenvalues.unaryExpr(g);
    return basis * v.asDiagonal() * basis.adjoint();
  }
  CMatrix reassemble() const;
};

SpectralDecomposition eig_hermitian(const HermitianMatrix& h);
/// Validates `h` is Hermitian (relative tolerance) first.
SpectralDecomposition eig_hermitian(const CMatrix& h);

enum class SpectralFunction { Exp, Log, Sqrt, InvSqrt, Inv };

/// U diag(f(lambda)) U^H for HPD input. Throws DomainError naming the first
/// non-positive eigenvalue for the functions that need positivity.
HermitianMatrix apply_spectral(const HpdMatrix& p, SpectralFunction f);

HermitianMatrix log_hpd(const HpdMatrix& p);
HpdMatrix exp_hermitian(const HermitianMatrix& h);
HpdMatrix sqrt_hpd(const HpdMatrix& p);
HpdMatrix inv_sqrt_hpd(const HpdMatrix& p);
HpdMatrix inv_hpd(const HpdMatrix& p);

/// Lower-triangular L with positive real diagonal and L L^H = P.
CMatrix chol_hpd(const HpdMatrix& p);

/// log det P through the Cholesky factor. Throws NumericError if P is not
/// numerically positive definite.
double logdet_hpd(const CMatrix& p);

/// Integral over s in [0, 1] of M(s)^{-1} L M(s)^{-1}, M(s) = (V - I)s + I,
/// i.e. the derivative of Log at V in direction L. Evaluated in V's eigenbasis
/// with first divided differences of the natural logarithm.
HermitianMatrix dlog_kernel(const HpdMatrix& v, const HermitianMatrix& l);
HermitianMatrix dlog_kernel(const SpectralDecomposition& v_eig, const HermitianMatrix& l);

/// First divided difference of ln at (a, b); 1/a when the two coincide to
/// within 1e-12 relative.
double log_divided_difference(double a, double b);

// Unchecked variants used in inner loops; the caller guarantees HPD input.
namespace detail {
SpectralDecomposition eig(const CMatrix& h);
CMatrix log_hpd(const CMatrix& p);
CMatrix exp_hermitian(const CMatrix& h);
CMatrix inv_hpd(const CMatrix& p);
}  // namespace detail

}  // namespace mig
