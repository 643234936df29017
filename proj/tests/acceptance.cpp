// Acceptance checks for the whole pipeline. Prints one PASS/FAIL line per
// criterion. With arguments, runs only the listed criteria (1-9).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "mig/harness/experiments.hpp"
#include "mig/harness/matrix_io.hpp"
#include "mig/parallel.hpp"
#include "oracles.hpp"

using namespace mig;
using namespace mig::harness;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      failures.push_back(what);
      pass = false;
    }
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel_err(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("migdet_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void geometry_axioms(Outcome& o) {
  const auto t0 = Clock::now();
  Rng rng(101, 0);
  const int pairs = 1000;
  double worst_self = 0.0, worst_sym = 0.0, worst_inv = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const Index n = 1 + t % 8;
    const CMatrix x = oracle::random_hpd(n, rng, 1e3, std::exp(2.0 * rng.normal()));
    const CMatrix y = oracle::random_hpd(n, rng, 1e3, std::exp(2.0 * rng.normal()));
    const CMatrix a = oracle::random_invertible(n, rng);
    const CMatrix u = oracle::random_unitary(n, rng);
    const HpdMatrix hx(x), hy(y);
    const double scale = 1.0 + log_hpd(hx).matrix().squaredNorm();
    for (Measure m : kAllMeasures) {
      worst_self = std::max(worst_self, sq_dist(m, hx, hx) / scale);
      const double d = sq_dist(m, hx, hy);
      worst_sym = std::max(worst_sym, oracle::rel_diff(d, sq_dist(m, hy, hx)));
      const CMatrix& tm = m == Measure::Lem ? u : a;
      const double dt = sq_dist(m, HpdMatrix(hermitian_part(tm * x * tm.adjoint())),
                                HpdMatrix(hermitian_part(tm * y * tm.adjoint())));
      worst_inv = std::max(worst_inv, oracle::rel_diff(d, dt));
    }
  }
  const double secs = seconds_since(t0);
  o.require(worst_self <= 1e-12, "self distance");
  o.require(worst_sym <= 1e-10, "symmetry");
  o.require(worst_inv <= 1e-8, "invariance");
  o.require(secs < 30.0, "runtime");
  o.detail << " pairs=" << pairs << " self=" << worst_self << " sym=" << worst_sym << " inv=" << worst_inv
           << " time=" << secs << "s";
}

HpdSet scalars(std::initializer_list<double> v) {
  std::vector<HpdMatrix> out;
  for (double x : v) out.emplace_back(CMatrix::Constant(1, 1, Complex(x, 0.0)));
  return HpdSet(out);
}

void means(Outcome& o) {
  double worst_scalar = 0.0;
  for (Measure m : kAllMeasures) {
    worst_scalar = std::max(worst_scalar, std::abs(geometric_mean(m, scalars({1.0, 4.0})).matrix()(0, 0).real() - 2.0));
  }
  o.require(worst_scalar <= 1e-8, "scalar {1,4}");

  Rng rng(102, 0);
  double riccati = 0.0, jbld = 0.0, airm = 0.0, idem = 0.0, perm = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Index n = 2 + t % 6;
    const HpdSet s = oracle::random_set(n, 3 + t % 5, rng, 100.0);
    const CMatrix r = geometric_mean(Measure::Skld, s).matrix();
    CMatrix a = CMatrix::Zero(n, n), b = CMatrix::Zero(n, n);
    for (const auto& x : s) {
      a += x.matrix().inverse();
      b += x.matrix();
    }
    riccati = std::max(riccati, (r * a * r - b).norm() / b.norm());

    const HpdMatrix rj = geometric_mean(Measure::Jbld, s);
    jbld = std::max(jbld, rel_err(jbld_fixed_point_map(s, rj).matrix(), rj.matrix()));

    const HpdMatrix ra = geometric_mean(Measure::Airm, s);
    double log_scale = 0.0;
    for (const auto& x : s) log_scale = std::max(log_scale, log_hpd(x).matrix().norm());
    airm = std::max(airm, airm_stationarity(s, ra) / (static_cast<double>(s.size()) * std::max(1.0, log_scale)));

    const HpdMatrix p(oracle::random_hpd(n, rng, 100.0));
    std::vector<HpdMatrix> rev(s.items().rbegin(), s.items().rend());
    for (Measure m : kAllMeasures) {
      idem = std::max(idem, rel_err(geometric_mean(m, HpdSet({p, p, p})).matrix(), p.matrix()));
      perm = std::max(perm, rel_err(geometric_mean(m, HpdSet(rev)).matrix(), geometric_mean(m, s).matrix()));
    }
  }
  o.require(riccati <= 1e-10, "SKLD Riccati residual");
  o.require(jbld <= 1e-8, "JBLD fixed point residual");
  o.require(airm <= 1e-6, "AIRM stationarity");
  o.require(idem <= 1e-9, "idempotence");
  o.require(perm <= 1e-10, "permutation invariance");
  o.detail << " scalar=" << worst_scalar << " riccati=" << riccati << " jbld=" << jbld << " airm=" << airm
           << " idem=" << idem << " perm=" << perm;
}

void dlog(Outcome& o) {
  Rng rng(103, 0);
  double worst = 0.0;
  int cases = 0;
  for (double cond : {1.0, 10.0, 1e2, 1e3}) {
    for (int t = 0; t < 25; ++t, ++cases) {
      const CMatrix v = oracle::random_hpd(5, rng, cond, std::exp(rng.normal()));
      const CMatrix g = rng.complex_normal_matrix(5, 5);
      const CMatrix l = g + g.adjoint();
      worst = std::max(worst, rel_err(dlog_kernel(HpdMatrix(v), HermitianMatrix(l)).matrix(),
                                      oracle::dlog_quadrature(v, l, 64)));
    }
  }
  o.require(worst <= 1e-8, "quadrature agreement");
  o.detail << " cases=" << cases << " worst_rel=" << worst;
}

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

void gradients(Outcome& o) {
  const auto t0 = Clock::now();
  Rng rng(104, 0);
  double worst = 1.0;
  for (int trial = 0; trial < 3; ++trial) {
    const HpdSet data = oracle::random_set(6, 8, rng, 20.0);
    const auto w = StiefelMatrix::random(6, 3, 10 + static_cast<std::uint64_t>(trial));
    for (Measure m : kAllMeasures) {
      const HpdMatrix z = geometric_mean(m, compress(w, data));
      const CMatrix g = euclid_grad(m, w, data, z);
      const CMatrix fd = oracle::fd_gradient(
          [&](const CMatrix& x) { return oracle_psi(m, x, data, z.matrix()); }, w.matrix());
      const double c = oracle::cosine(g, fd);
      worst = std::min(worst, c);
      o.detail << " " << to_string(m) << "=" << c;
    }
  }
  const double secs = seconds_since(t0);
  o.require(worst >= 0.999, "cosine");
  o.require(secs < 60.0, "runtime");
  o.detail << " time=" << secs << "s";
}

void rgd(Outcome& o) {
  Rng rng(105, 0);
  const HpdSet data = oracle::random_set(6, 16, rng, 50.0);
  double worst_defect = 0.0;
  int steps = 0, non_decreasing = 0, trace_drops = 0;
  for (Measure m : kAllMeasures) {
    LearnerConfig cfg;
    cfg.on_step = [&](int, int, const StiefelMatrix& w, double before, double after) {
      ++steps;
      worst_defect = std::max(worst_defect, w.orthonormality_defect());
      if (!(after < before)) ++non_decreasing;
    };
    const auto res = learn_projection(m, data, 3, cfg);
    worst_defect = std::max(worst_defect, res.w.orthonormality_defect());
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
      if (res.objective_trace[i] < res.objective_trace[i - 1]) ++trace_drops;
    }
  }
  double full = 0.0;
  const HpdSet small = oracle::random_set(4, 10, rng, 50.0);
  for (Measure m : kAllMeasures) {
    const auto res = learn_projection(m, small, 4);
    full = std::max(full, oracle::rel_diff(res.final_variance, variance(m, small, geometric_mean(m, small))));
  }
  o.require(worst_defect <= 1e-10, "orthonormality");
  o.require(non_decreasing == 0, "psi not strictly decreasing on an accepted step");
  o.require(trace_drops == 0, "objective trace decreased");
  o.require(full <= 1e-6, "m = n variance");
  o.detail << " steps=" << steps << " defect=" << worst_defect << " m=n rel=" << full;
}

const CurveRecord* find_curve(const SweepResult& r, const std::string& det, const std::string& measure) {
  for (const auto& c : r.curves) {
    if (c.detector == det && c.measure == measure) return &c;
  }
  return nullptr;
}

void detection(Outcome& o) {
  ExperimentConfig cfg;
  cfg.target_dims = {4};
  cfg.k_multipliers = {1.0};
  cfg.output_dir = scratch("detection");
  const auto t0 = Clock::now();
  const SweepResult res = run_sweep(cfg);
  const double secs = seconds_since(t0);
  o.require(res.errors.empty(), "run errors");

  bool pfa_ok = true, mono_ok = true;
  for (const auto& c : res.curves) {
    if (c.error) continue;
    pfa_ok = pfa_ok && c.empirical_pfa >= 0.005 && c.empirical_pfa <= 0.015;
    for (std::size_t i = 1; i < c.rows.size(); ++i) mono_ok = mono_ok && c.rows[i].pd >= c.rows[i - 1].pd - 0.05;
  }
  o.require(pfa_ok, "(a) empirical pfa");
  o.require(mono_ok, "(b) monotone pd");

  const auto* jp = find_curve(res, "mig-proj", "JBLD");
  const auto* ju = find_curve(res, "mig", "JBLD");
  const auto* amf = find_curve(res, "amf", "none");
  bool c_ok = jp && ju && !jp->error && !ju->error;
  int c_points = 0;
  if (c_ok) {
    for (std::size_t i = 0; i < ju->rows.size(); ++i) {
      if (ju->rows[i].pd >= 0.3 && ju->rows[i].pd <= 0.7) {
        ++c_points;
        c_ok = c_ok && jp->rows[i].pd >= ju->rows[i].pd - 0.03;
        o.detail << " (c) scr=" << ju->rows[i].scr_db << " proj=" << jp->rows[i].pd << " unproj=" << ju->rows[i].pd;
      }
    }
  }
  o.require(c_ok && c_points > 0, "(c) projected vs unprojected JBLD");

  bool d_ok = amf && !amf->error;
  std::ostringstream worst;
  double worst_gap = 1.0;
  for (const auto& c : res.curves) {
    if (!d_ok || (c.detector != "mig" && c.detector != "mig-proj")) continue;
    if (c.error) {
      d_ok = false;
      continue;
    }
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
      const double gap = c.rows[i].pd - (amf->rows[i].pd - 0.03);
      if (gap < worst_gap) {
        worst_gap = gap;
        worst.str("");
        worst << c.detector << " " << c.measure << " scr=" << c.rows[i].scr_db << " pd=" << c.rows[i].pd
              << " amf=" << amf->rows[i].pd;
      }
    }
  }
  d_ok = d_ok && worst_gap >= 0.0;
  o.require(d_ok, "(d) MIG vs AMF at K=M, worst " + worst.str());
  o.require(secs < 600.0, "runtime");

  o.detail << " |";
  for (const auto& c : res.curves) {
    o.detail << " " << c.detector << "/" << c.measure << " pfa=" << c.empirical_pfa << " pd=[";
    for (std::size_t i = 0; i < c.rows.size(); ++i) o.detail << (i ? "," : "") << c.rows[i].pd;
    o.detail << "]";
  }
  o.detail << " threads=" << resolve_threads(cfg.threads) << " time=" << secs << "s";
}

void complexity(Outcome& o) {
  ExperimentConfig cfg;
  cfg.bench.dims = {8, 16, 32};
  cfg.bench.k = 16;
  cfg.output_dir = scratch("bench");
  const auto rows = run_bench(cfg);
  std::map<std::string, double> at32;
  std::map<std::string, std::vector<double>> by_name;
  for (const auto& r : rows) {
    if (r.kind != "mean") continue;
    by_name[r.name].push_back(r.median_seconds);
    if (r.n == 32) at32[r.name] = r.median_seconds;
  }
  bool arithmetic_fastest = true;
  for (const auto& [name, t] : at32) {
    if (name != "arithmetic") arithmetic_fastest = arithmetic_fastest && at32["arithmetic"] < t;
  }
  o.require(arithmetic_fastest, "arithmetic mean fastest");
  o.require(2.0 * at32["LEM"] <= at32["AIRM"], "LEM at least 2x faster than AIRM");
  o.require(at32["SKLD"] < at32["AIRM"], "SKLD faster than AIRM");
  o.detail << " N=32 K=16:";
  for (const auto& [name, t] : at32) o.detail << " " << name << "=" << t;
}

void distances(Outcome& o) {
  ExperimentConfig cfg;
  cfg.output_dir = scratch("distances");
  const auto res = run_distances(cfg);
  o.require(res.errors.empty(), "run errors");
  o.require(res.summaries.size() == 4, "all four measures");
  for (const auto& s : res.summaries) {
    o.require(s.clutter_mean < s.target_mean, to_string(s.measure) + " ordering");
    o.require(s.separation() >= 1.0, to_string(s.measure) + " separation");
    o.detail << " " << to_string(s.measure) << " clutter=" << s.clutter_mean << " target=" << s.target_mean
             << " sep=" << s.separation();
  }
}

void reproducibility(Outcome& o) {
  ExperimentConfig cfg;
  cfg.target_dims = {4, 2};
  cfg.k_multipliers = {1.0, 2.0};
  cfg.scr_db = {0, 10, 20};
  cfg.trials_threshold = 1000;
  cfg.trials_pd = 200;
  cfg.training_j = 100;
  cfg.training_k = 100;
  cfg.seed = 7;
  std::vector<std::map<std::string, std::string>> runs;
  for (unsigned threads : {1u, 4u}) {
    cfg.threads = threads;
    cfg.output_dir = scratch("repro_" + std::to_string(threads));
    run_sweep(cfg);
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(cfg.output_dir)) {
      if (e.path().extension() == ".csv" || e.path().extension() == ".migw") {
        files[e.path().filename().string()] = slurp(e.path());
      }
    }
    runs.push_back(std::move(files));
  }
  o.require(!runs[0].empty() && runs[0] == runs[1], "serial and parallel outputs differ");
  o.detail << " files=" << runs[0].size() << " threads=1 vs 4";
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {1, {"geometry axioms", geometry_axioms}},
      {2, {"means", means}},
      {3, {"dlog kernel vs quadrature", dlog}},
      {4, {"gradients vs finite differences", gradients}},
      {5, {"RGD loop invariants", rgd}},
      {6, {"desk-scale detection", detection}},
      {7, {"complexity trends", complexity}},
      {8, {"distance separation", distances}},
      {9, {"reproducibility", reproducibility}},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [k, v] : criteria) selected.insert(k);
  }
  int failed = 0;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << k << "\n";
      return 1;
    }
    Outcome o;
    try {
      it->second.second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << k << " (" << it->second.first << "): " << (o.pass ? "PASS" : "FAIL")
              << o.detail.str();
    for (std::size_t i = 0; i < o.failures.size(); ++i) std::cout << (i ? "; " : " | failed: ") << o.failures[i];
    std::cout << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
