#include "doctest.h"
#include "oracles.hpp"

#include "mig/projection.hpp"

using namespace mig;

namespace {

double rel_err(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

// -(1/N) sum d^2(W^H R_i W, Z) for any W, using only the oracle distances.
double oracle_psi(Measure m, const CMatrix& w, const HpdSet& data, const CMatrix& z) {
  double acc = 0.0;
  for (const auto& r : data) {
    const CMatrix v = hermitian_part(w.adjoint() * r.matrix() * w);
    switch (m) {
      case Measure::Airm: acc += oracle::airm_sq(v, z); break;
      case Measure::Lem: acc += oracle::lem(v, z); break;
      case Measure::Jbld: acc += oracle::jbld(v, z); break;
      case Measure::Skld: acc += oracle::skld(v, z); break;
    }
  }
  return -acc / static_cast<double>(data.size());
}

CMatrix sym(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

TEST_CASE("StiefelMatrix construction") {
  CHECK_THROWS_AS(StiefelMatrix(CMatrix::Ones(3, 2)), ValidationError);
  CHECK_THROWS_AS(StiefelMatrix(CMatrix::Identity(2, 3)), ValidationError);
  const auto w = StiefelMatrix::random(6, 3, 5);
  CHECK(w.orthonormality_defect() <= 1e-12);
  CHECK(StiefelMatrix::random(6, 3, 5).matrix() == w.matrix());
  CHECK(StiefelMatrix::random(6, 3, 6).matrix() != w.matrix());
}

TEST_CASE("compress") {
  Rng rng(41, 0);
  const CMatrix r = oracle::random_hpd(5, rng, 50.0);
  CHECK(rel_err(compress(StiefelMatrix::coordinate(5, 3), HpdMatrix(r)).matrix(), r.topLeftCorner(3, 3)) < 1e-15);

  const StiefelMatrix u(oracle::random_unitary(5, rng));
  const auto ev = eig_hermitian(compress(u, HpdMatrix(r)).matrix()).eigenvalues;
  CHECK((ev - eig_hermitian(r).eigenvalues).norm() <= 1e-10 * ev.norm());

  const auto w = StiefelMatrix::random(5, 2, 3);
  CHECK(eig_hermitian(compress(w, HpdMatrix(r)).matrix()).eigenvalues.minCoeff() > 0.0);
  CHECK_THROWS_AS(compress(w, HpdMatrix(CMatrix::Identity(4, 4))), ValidationError);
}

TEST_CASE("psi_loss") {
  Rng rng(42, 0);
  const HpdMatrix r(oracle::random_hpd(4, rng));
  const auto id = StiefelMatrix::coordinate(4, 4);
  for (Measure m : kAllMeasures) CHECK(psi_loss(m, id, HpdSet({r, r}), r) == doctest::Approx(0.0));

  const HpdSet data = oracle::random_set(5, 8, rng);
  const auto w = StiefelMatrix::random(5, 3, 1);
  for (Measure m : kAllMeasures) {
    const HpdSet c = compress(w, data);
    const HpdMatrix z = geometric_mean(m, c);
    CHECK(psi_loss(m, w, data, z) == doctest::Approx(-variance(m, c, z)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(psi_loss(Measure::Lem, w, data, HpdMatrix(CMatrix::Identity(2, 2))), ValidationError);
}

TEST_CASE("euclidean gradients agree with finite differences") {
  Rng rng(43, 0);
  const HpdSet data = oracle::random_set(6, 8, rng, 20.0);
  const auto w = StiefelMatrix::random(6, 3, 2);
  const HpdMatrix z(oracle::random_hpd(3, rng, 5.0, 2.0));
  for (Measure m : kAllMeasures) {
    CAPTURE(to_string(m));
    const CMatrix g = euclid_grad(m, w, data, z);
    const CMatrix fd = oracle::fd_gradient([&](const CMatrix& x) { return oracle_psi(m, x, data, z.matrix()); },
                                           w.matrix());
    CHECK(oracle::cosine(g, fd) >= 0.999);
    CHECK(rel_err(g, fd) <= 1e-4);
  }
}

TEST_CASE("LEM gradient with quadrature in place of the closed form") {
  Rng rng(44, 0);
  const HpdSet data = oracle::random_set(5, 6, rng, 20.0);
  const auto w = StiefelMatrix::random(5, 3, 4);
  const HpdMatrix z = geometric_mean(Measure::Lem, compress(w, data));
  const CMatrix log_z = log_hpd(z).matrix();
  CMatrix q = CMatrix::Zero(5, 3);
  for (const auto& r : data) {
    const CMatrix v = hermitian_part(w.matrix().adjoint() * r.matrix() * w.matrix());
    const CMatrix term = v.inverse() * oracle::logm(v) - oracle::dlog_quadrature(v, log_z);
    q += r.matrix() * w.matrix() * term;
  }
  q *= -4.0 / static_cast<double>(data.size());
  CHECK(rel_err(euclid_grad(Measure::Lem, w, data, z), q) <= 1e-7);
}

TEST_CASE("single datum at the mean is stationary") {
  Rng rng(45, 0);
  const HpdMatrix r(oracle::random_hpd(4, rng, 10.0));
  const StiefelMatrix u(oracle::random_unitary(4, rng));
  const HpdMatrix z = compress(u, r);
  for (Measure m : kAllMeasures) {
    const CMatrix g = euclid_grad(m, u, HpdSet({r}), z);
    CHECK(riem_grad(u, g).norm() <= 1e-10 * std::max(1.0, g.norm()));
  }
}

TEST_CASE("riem_grad") {
  Rng rng(46, 0);
  const auto w = StiefelMatrix::random(6, 3, 7);
  const CMatrix h0 = rng.complex_normal_matrix(3, 3);
  CHECK(riem_grad(w, w.matrix() * (h0 + h0.adjoint())).norm() <= 1e-12);

  const CMatrix p = CMatrix::Identity(6, 6) - w.matrix() * w.matrix().adjoint();
  const CMatrix g_perp = p * rng.complex_normal_matrix(6, 3);
  CHECK(rel_err(riem_grad(w, g_perp), g_perp) <= 1e-12);

  const CMatrix g = rng.complex_normal_matrix(6, 3);
  CHECK(sym(w.matrix().adjoint() * riem_grad(w, g)).norm() <= 1e-12 * g.norm());
  CHECK_THROWS_AS(riem_grad(w, CMatrix::Zero(6, 2)), ValidationError);
}

TEST_CASE("retract") {
  Rng rng(47, 0);
  const auto w = StiefelMatrix::random(6, 3, 8);
  const CMatrix d = riem_grad(w, rng.complex_normal_matrix(6, 3));
  CHECK(retract(w, d, 0.0).matrix() == w.matrix());
  const auto c = StiefelMatrix::coordinate(6, 3);
  CHECK(retract(c, CMatrix::Zero(6, 3), 0.7).matrix() == c.matrix());
  CHECK(retract(w, d, 3.0).orthonormality_defect() <= 1e-10);

  const double e1 = (retract(w, d, 1e-3).matrix() - (w.matrix() + 1e-3 * d)).norm();
  const double e2 = (retract(w, d, 1e-4).matrix() - (w.matrix() + 1e-4 * d)).norm();
  CHECK(e2 / e1 == doctest::Approx(1e-2).epsilon(0.05));

  CMatrix degenerate = CMatrix::Zero(6, 3);
  degenerate.col(1) = -w.matrix().col(1);
  CHECK_THROWS_AS(retract(w, degenerate, 1.0), NumericError);
}

TEST_CASE("learn_projection invariants") {
  Rng rng(48, 0);
  const HpdSet data = oracle::random_set(6, 12, rng, 20.0);
  for (Measure m : kAllMeasures) {
    CAPTURE(to_string(m));
    LearnerConfig cfg;
    cfg.outer_iterations = 10;
    const auto res = learn_projection(m, data, 3, cfg);
    CHECK(res.w.orthonormality_defect() <= 1e-10);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
      CHECK(res.objective_trace[i] >= res.objective_trace[i - 1] * (1.0 - 1e-12));
    }
    CHECK(res.final_variance == doctest::Approx(res.objective_trace.back()));
    const HpdSet c = compress(res.w, data);
    CHECK(oracle::rel_diff(variance(m, c, geometric_mean(m, c)), res.final_variance) <= 1e-9);
  }
}

TEST_CASE("full dimension reproduces the unprojected variance") {
  Rng rng(49, 0);
  const HpdSet data = oracle::random_set(4, 8, rng, 20.0);
  for (Measure m : kAllMeasures) {
    const auto res = learn_projection(m, data, 4);
    CHECK(oracle::rel_diff(res.final_variance, variance(m, data, geometric_mean(m, data))) <= 1e-6);
  }
}

TEST_CASE("right-unitary invariance of the objective") {
  Rng rng(50, 0);
  const HpdSet data = oracle::random_set(6, 8, rng, 20.0);
  const auto w = StiefelMatrix::random(6, 3, 9);
  const StiefelMatrix wu(w.matrix() * oracle::random_unitary(3, rng));
  for (Measure m : kAllMeasures) {
    const HpdSet a = compress(w, data), b = compress(wu, data);
    CHECK(oracle::rel_diff(variance(m, a, geometric_mean(m, a)), variance(m, b, geometric_mean(m, b))) <= 1e-8);
  }
}

TEST_CASE("two separated clusters beat random search") {
  Rng rng(51, 0);
  std::vector<HpdMatrix> v;
  const CMatrix base = oracle::random_hpd(4, rng, 5.0);
  for (int i = 0; i < 10; ++i) {
    const CMatrix g = 0.05 * rng.complex_normal_matrix(4, 4);
    const CMatrix p = hermitian_part((i < 5 ? 1.0 : 50.0) * base + g * g.adjoint());
    v.emplace_back(p);
  }
  const HpdSet data(v);
  for (Measure m : kAllMeasures) {
    CAPTURE(to_string(m));
    const auto res = learn_projection(m, data, 1);
    double best = 0.0;
    for (int t = 0; t < 100; ++t) {
      const HpdSet c = compress(StiefelMatrix::random(4, 1, 1000 + t), data);
      best = std::max(best, variance(m, c, geometric_mean(m, c)));
    }
    CHECK(res.final_variance >= best * (1.0 - 1e-9));
  }
}

TEST_CASE("stationarity at convergence") {
  Rng rng(52, 0);
  const HpdSet data = oracle::random_set(5, 10, rng, 20.0);
  for (Measure m : kAllMeasures) {
    CAPTURE(to_string(m));
    LearnerConfig cfg;
    cfg.outer_iterations = 200;
    cfg.tolerance = 1e-14;
    const auto res = learn_projection(m, data, 2, cfg);
    CHECK(res.final_riem_grad_norm <= 1e-4 * res.initial_riem_grad_norm);
  }
}

TEST_CASE("degenerate data returns the initialization") {
  Rng rng(53, 0);
  const HpdMatrix p(oracle::random_hpd(4, rng));
  const auto res = learn_projection(Measure::Jbld, HpdSet({p, p, p}), 2);
  CHECK(res.zero_variance);
  CHECK(res.w.matrix() == StiefelMatrix::random(4, 2, LearnerConfig{}.seed).matrix());
}

TEST_CASE("learner argument validation") {
  Rng rng(54, 0);
  const HpdSet data = oracle::random_set(4, 4, rng);
  CHECK_THROWS_AS(learn_projection(Measure::Lem, data, 0), ValidationError);
  CHECK_THROWS_AS(learn_projection(Measure::Lem, data, 5), ValidationError);
  LearnerConfig bad;
  bad.armijo_shrink = 1.5;
  CHECK_THROWS_AS(learn_projection(Measure::Lem, data, 2, bad), ValidationError);
}
