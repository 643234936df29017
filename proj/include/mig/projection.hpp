#pragma once

// Unsupervised discriminative projection: learn W on the complex Stiefel
// manifold so that the compressed set {W^H R_i W} has maximal variance about
// its own geometric mean.

#include <cstdint>
#include <functional>
#include <vector>

#include "mig/means.hpp"

namespace mig {

/// n x m complex matrix with orthonormal columns.
class StiefelMatrix {
 public:
  /// Throws ValidationError if m > n or ||W^H W - I||_F > tol.
  explicit StiefelMatrix(const CMatrix& w, double tol = 1e-10);

  /// First m columns of the n x n identity.
  static StiefelMatrix coordinate(Index n, Index m);
  /// Thin QR of a seeded complex Gaussian matrix.
  static StiefelMatrix random(Index n, Index m, std::uint64_t seed);

  const CMatrix& matrix() const noexcept { return w_; }
  Index ambient() const noexcept { return w_.rows(); }
  Index target() const noexcept { return w_.cols(); }
  double orthonormality_defect() const;

 private:
  CMatrix w_;
};

struct LearnerConfig {
  int outer_iterations = 50;
  int rgd_iterations = 20;
  double initial_step = 1.0;
  double armijo_shrink = 0.5;
  double armijo_slope = 1e-4;
  double tolerance = 1e-8;
  std::uint64_t seed = 1;
  MeanConfig mean;
  /// Called after each accepted inner step with (outer, inner, W, psi before, psi after).
  std::function<void(int, int, const StiefelMatrix&, double, double)> on_step;

  void validate() const;
};

struct LearnedProjection {
  StiefelMatrix w;
  Measure measure;
  double final_variance = 0.0;
  std::vector<double> objective_trace;  // variance about the re-solved mean, per outer iteration
  bool zero_variance = false;           // data degenerate; w is the initialization
  int accepted_steps = 0;
  double initial_riem_grad_norm = 0.0;
  double final_riem_grad_norm = 0.0;
};

/// W^H R W.
HpdMatrix compress(const StiefelMatrix& w, const HpdMatrix& r);
HpdSet compress(const StiefelMatrix& w, const HpdSet& data);

/// -(1/|data|) sum_i d^2(W^H R_i W, Z).
double psi_loss(Measure m, const StiefelMatrix& w, const HpdSet& data, const HpdMatrix& z);

/// Euclidean gradient of psi_loss in W with respect to Re tr(A^H B).
CMatrix euclid_grad(Measure m, const StiefelMatrix& w, const HpdSet& data, const HpdMatrix& z);

/// G - W sym(W^H G), sym(A) = (A + A^H) / 2.
CMatrix riem_grad(const StiefelMatrix& w, const CMatrix& g);

/// QR retraction: Q factor of W + step D, normalized so R has a positive real diagonal.
StiefelMatrix retract(const StiefelMatrix& w, const CMatrix& d, double step);

/// Alternates Riemannian descent on psi over W with re-solving Z as the
/// geometric mean of the compressed set.
LearnedProjection learn_projection(Measure m, const HpdSet& data, Index target_dim,
                                   const LearnerConfig& cfg = {});

}  // namespace mig
