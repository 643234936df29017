#include "mig/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mig/harness/matrix_io.hpp"
#include "mig/parallel.hpp"

namespace mig::harness {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
  os << text;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// FNV-1a; identifies the configuration a run was produced from.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json manifest_base(const ExperimentConfig& cfg, const std::string& command) {
  const std::string text = to_config_text(cfg);
  Json j;
  j["command"] = command;
  j["version"] = "migdet 0.1.0";
  j["run_id"] = hex64(fnv1a(text) ^ mix64(cfg.seed));
  j["started_utc"] = utc_now();
  j["seed"] = cfg.seed;
  j["threads"] = resolve_threads(cfg.threads);
  j["config"] = text;
  return j;
}

Json errors_json(const std::vector<RunError>& errors) {
  Json arr = Json::array();
  for (const auto& e : errors) arr.push_back({{"scope", e.scope}, {"message", e.message}});
  return arr;
}

void write_manifest(const fs::path& dir, const Json& j) { write_text(dir / "manifest.json", j.dump(2) + "\n"); }

std::string quote(const std::string& s) { return "'" + s + "'"; }

std::string gnuplot_preamble(const std::string& png, const std::string& title, const std::string& xlabel,
                             const std::string& ylabel) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set terminal pngcairo size 800,600\n"
     << "set output " << quote(png) << "\n"
     << "set title " << quote(title) << "\n"
     << "set xlabel " << quote(xlabel) << "\n"
     << "set ylabel " << quote(ylabel) << "\n"
     << "set key bottom right\n"
     << "set grid\n";
  return os.str();
}

void write_pd_script(const fs::path& script, const std::string& title,
                     const std::vector<std::pair<std::string, std::string>>& series) {
  std::ostringstream os;
  os << gnuplot_preamble(script.stem().string() + ".png", title, "SCR (dB)", "P_d")
     << "set yrange [0:1]\nplot ";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) os << ", \\\n     ";
    os << quote(series[i].first) << " using 5:8 skip 1 with linespoints title " << quote(series[i].second);
  }
  os << "\n";
  write_text(script, os.str());
}

std::vector<CMatrix> raw(const std::vector<HpdMatrix>& v) {
  std::vector<CMatrix> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.matrix());
  return out;
}

std::string learn_scope(Measure m, int target) {
  return "learn " + to_string(m) + " M=" + std::to_string(target);
}

LearnerConfig learner_for(const ExperimentConfig& cfg) {
  LearnerConfig lc = cfg.learner;
  lc.seed = cfg.seed;
  lc.mean = cfg.mean;
  return lc;
}

std::vector<LearnRecord> learn_all(const ExperimentConfig& cfg, const TrainingSet& training) {
  std::vector<LearnRecord> recs;
  for (int target : cfg.target_dims) {
    for (Measure m : cfg.measures) {
      LearnRecord r;
      r.measure = m;
      r.m = target;
      recs.push_back(r);
    }
  }
  const HpdSet data = training.combined();
  const LearnerConfig lc = learner_for(cfg);
  parallel_for(recs.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    auto& r = recs[i];
    const auto t0 = Clock::now();
    try {
      r.result = learn_projection(r.measure, data, r.m, lc);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = seconds_since(t0);
  });
  return recs;
}

void write_learned(const fs::path& dir, const LearnRecord& r) {
  if (!r.result) return;
  const std::string tag = to_string(r.measure) + "_M" + std::to_string(r.m);
  write_matrix(dir / ("W_" + tag + ".migw"), r.result->w.matrix());
  std::ostringstream os;
  os << "iteration,variance\n";
  for (std::size_t i = 0; i < r.result->objective_trace.size(); ++i) {
    os << i << ',' << format_double(r.result->objective_trace[i]) << '\n';
  }
  write_text(dir / ("trace_" + tag + ".csv"), os.str());
}

Json learn_json(const LearnRecord& r) {
  Json j;
  j["measure"] = to_string(r.measure);
  j["M"] = r.m;
  j["seconds"] = r.seconds;
  if (r.result) {
    j["final_variance"] = r.result->final_variance;
    j["outer_iterations"] = r.result->objective_trace.size();
    j["accepted_steps"] = r.result->accepted_steps;
    j["zero_variance"] = r.result->zero_variance;
    j["initial_riem_grad_norm"] = r.result->initial_riem_grad_norm;
    j["final_riem_grad_norm"] = r.result->final_riem_grad_norm;
  }
  j["error"] = r.error ? Json(*r.error) : Json(nullptr);
  return j;
}

struct Pending {
  CurveRecord rec;
  DetectorSpec spec;
};

using BankEval = std::function<std::vector<double>(const DetectorBank&)>;

// Runs `eval` on one bank holding every detector still alive. If that fails,
// each detector is retried alone and only the failing ones are marked.
std::vector<double> evaluate(std::vector<Pending>& ps, const ExperimentConfig& cfg, int k,
                             const BankEval& eval, const std::string& stage) {
  std::vector<double> out(ps.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!ps[i].rec.error) alive.push_back(i);
  }
  if (alive.empty()) return out;
  try {
    std::vector<DetectorSpec> specs;
    for (auto i : alive) specs.push_back(ps[i].spec);
    const DetectorBank bank(std::move(specs), cfg.scenario, k, cfg.mean);
    const auto v = eval(bank);
    for (std::size_t a = 0; a < alive.size(); ++a) out[alive[a]] = v[a];
    return out;
  } catch (const std::exception&) {
  }
  for (auto i : alive) {
    try {
      const DetectorBank bank({ps[i].spec}, cfg.scenario, k, cfg.mean);
      out[i] = eval(bank).front();
    } catch (const std::exception& e) {
      ps[i].rec.error = stage + ": " + e.what();
    }
  }
  return out;
}

std::string curve_csv(const CurveRecord& c) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : c.rows) {
    os << c.detector << ',' << c.measure << ',' << c.m << ',' << c.k << ',' << format_double(r.scr_db)
       << ',' << format_double(r.threshold) << ',' << format_double(r.empirical_pfa) << ','
       << format_double(r.pd) << ',' << r.trials << '\n';
  }
  return os.str();
}

Json curve_json(const CurveRecord& c) {
  Json j;
  j["detector"] = c.detector;
  j["measure"] = c.measure;
  j["M"] = c.m;
  j["K"] = c.k;
  j["threshold"] = c.threshold;
  j["empirical_pfa"] = c.empirical_pfa;
  j["csv"] = c.csv.empty() ? Json(nullptr) : Json(c.csv.filename().string());
  j["error"] = c.error ? Json(*c.error) : Json(nullptr);
  return j;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class F>
double time_median(int reps, F&& f) {
  f();  // warm-up
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    t.push_back(seconds_since(t0));
  }
  return median(std::move(t));
}

CMatrix bench_hpd(Index n, std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed, stream_id(Stage::Bench, index));
  const CMatrix g = rng.complex_normal_matrix(n, n);
  return hermitian_part(g * g.adjoint() / static_cast<double>(n) + 0.1 * CMatrix::Identity(n, n));
}

}  // namespace

double DistanceSummary::separation() const {
  const double pooled = std::sqrt(0.5 * (clutter_std * clutter_std + target_std * target_std));
  return (target_mean - clutter_mean) / pooled;
}

std::string csv_file_name(const std::string& detector, const std::string& measure, int m, int k) {
  return detector + "_" + measure + "_M" + std::to_string(m) + "_K" + std::to_string(k) + ".csv";
}

TrainingSet load_training(const fs::path& dir, double scr_db) {
  TrainingSet t;
  t.scr_db = scr_db;
  for (const auto& a : read_matrices(dir / "training_clutter.migw")) t.clutter_only.emplace_back(a);
  for (const auto& a : read_matrices(dir / "training_target.migw")) t.with_target.emplace_back(a);
  return t;
}

TrainingOutput run_gen_training(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  ensure_dir(cfg.output_dir);
  TrainingOutput out;
  out.set = gen_training(cfg.scenario, cfg.training_j, cfg.training_k, cfg.training_scr_db, cfg.seed);
  out.clutter_file = cfg.output_dir / "training_clutter.migw";
  out.target_file = cfg.output_dir / "training_target.migw";
  write_matrices(out.clutter_file, raw(out.set.clutter_only));
  write_matrices(out.target_file, raw(out.set.with_target));
  Json j = manifest_base(cfg, "gen-training");
  j["files"] = {out.clutter_file.filename().string(), out.target_file.filename().string()};
  j["wall_seconds"] = seconds_since(t0);
  j["errors"] = Json::array();
  write_manifest(cfg.output_dir, j);
  return out;
}

std::vector<LearnRecord> run_learn_projection(const ExperimentConfig& cfg,
                                              const std::optional<TrainingSet>& training) {
  cfg.validate();
  const auto t0 = Clock::now();
  ensure_dir(cfg.output_dir);
  const TrainingSet set = training ? *training
                                   : gen_training(cfg.scenario, cfg.training_j, cfg.training_k,
                                                  cfg.training_scr_db, cfg.seed);
  if (set.clutter_only.empty() || set.clutter_only.front().order() != cfg.scenario.n) {
    throw ValidationError("learn-projection: training matrices do not match scenario.n");
  }
  auto recs = learn_all(cfg, set);
  std::vector<RunError> errors;
  Json learned = Json::array();
  for (const auto& r : recs) {
    write_learned(cfg.output_dir, r);
    if (r.error) errors.push_back({learn_scope(r.measure, r.m), *r.error});
    learned.push_back(learn_json(r));
  }
  Json j = manifest_base(cfg, "learn-projection");
  j["learned"] = learned;
  j["wall_seconds"] = seconds_since(t0);
  j["errors"] = errors_json(errors);
  write_manifest(cfg.output_dir, j);
  return recs;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  ensure_dir(cfg.output_dir);
  const unsigned threads = resolve_threads(cfg.threads);
  SweepResult res;

  const TrainingSet training =
      gen_training(cfg.scenario, cfg.training_j, cfg.training_k, cfg.training_scr_db, cfg.seed);
  res.learned = learn_all(cfg, training);
  for (const auto& r : res.learned) {
    write_learned(cfg.output_dir, r);
    if (r.error) res.errors.push_back({learn_scope(r.measure, r.m), *r.error});
  }
  auto learned_for = [&](Measure m, int target) -> const LearnRecord& {
    return *std::find_if(res.learned.begin(), res.learned.end(),
                         [&](const LearnRecord& r) { return r.measure == m && r.m == target; });
  };

  for (int target : cfg.target_dims) {
    for (double mult : cfg.k_multipliers) {
      const int k = ExperimentConfig::secondary_count(target, mult);
      std::vector<Pending> ps;
      auto add = [&](std::string detector, std::string measure_label, DetectorKind kind, Measure m,
                     std::optional<StiefelMatrix> w) {
        Pending p;
        p.rec.detector = std::move(detector);
        p.rec.measure = std::move(measure_label);
        p.rec.m = target;
        p.rec.k = k;
        p.spec.kind = kind;
        p.spec.measure = m;
        p.spec.projection = std::move(w);
        p.spec.id = p.rec.detector + " " + p.rec.measure;
        ps.push_back(std::move(p));
      };
      for (Measure m : cfg.measures) {
        const auto& lr = learned_for(m, target);
        if (lr.result) {
          add("mig-proj", to_string(m), DetectorKind::Mig, m, lr.result->w);
        } else {
          add("mig-proj", to_string(m), DetectorKind::Mig, m, std::nullopt);
          ps.back().rec.error = "projection unavailable: " + lr.error.value_or("unknown");
        }
        add("mig", to_string(m), DetectorKind::Mig, m, std::nullopt);
      }
      add("amf", "none", DetectorKind::Amf, Measure::Jbld, std::nullopt);
      add("amf-known", "none", DetectorKind::AmfKnown, Measure::Jbld, std::nullopt);

      const auto thresholds = evaluate(
          ps, cfg, k,
          [&](const DetectorBank& b) {
            return estimate_thresholds(b, cfg.pfa, cfg.trials_threshold, cfg.seed, threads);
          },
          "threshold");
      for (std::size_t i = 0; i < ps.size(); ++i) {
        ps[i].spec.threshold = thresholds[i];
        ps[i].rec.threshold = thresholds[i];
      }
      const auto pfa = evaluate(
          ps, cfg, k,
          [&](const DetectorBank& b) {
            return exceedance_rates(b, std::nullopt, cfg.trials_threshold, cfg.seed, Stage::PfaCheck,
                                    threads);
          },
          "pfa check");
      for (std::size_t i = 0; i < ps.size(); ++i) ps[i].rec.empirical_pfa = pfa[i];
      for (double scr : cfg.scr_db) {
        const auto pd = evaluate(
            ps, cfg, k,
            [&](const DetectorBank& b) {
              return exceedance_rates(b, scr, cfg.trials_pd, cfg.seed, Stage::Detection, threads);
            },
            "pd at " + format_double(scr) + " dB");
        for (std::size_t i = 0; i < ps.size(); ++i) {
          ps[i].rec.rows.push_back({scr, ps[i].rec.threshold, ps[i].rec.empirical_pfa, pd[i], cfg.trials_pd});
        }
      }

      std::vector<std::pair<std::string, std::string>> series;
      const std::string block = "M=" + std::to_string(target) + " K=" + std::to_string(k);
      for (auto& p : ps) {
        auto& c = p.rec;
        if (c.error) {
          c.rows.clear();
          res.errors.push_back({c.detector + " " + c.measure + " " + block, *c.error});
        } else {
          c.csv = cfg.output_dir / csv_file_name(c.detector, c.measure, target, k);
          write_text(c.csv, curve_csv(c));
          fs::path gp = c.csv;
          gp.replace_extension(".gp");
          write_pd_script(gp, c.detector + " " + c.measure + " " + block,
                          {{c.csv.filename().string(), c.detector + " " + c.measure}});
          series.emplace_back(c.csv.filename().string(), c.detector + " " + c.measure);
        }
        res.curves.push_back(std::move(c));
      }
      if (!series.empty()) {
        write_pd_script(cfg.output_dir / ("pd_M" + std::to_string(target) + "_K" + std::to_string(k) + ".gp"),
                        "P_d vs SCR, " + block, series);
      }
    }
  }
  res.seconds = seconds_since(t0);

  Json j = manifest_base(cfg, "sweep");
  j["metadata"] = {
      {"scr_definition", "SCR = |alpha|^2 / sigma_c^2 with uniform random target phase"},
      {"amf_loading", "1e-6 tr(S)/N added to the diagonal of S when K < 2N"},
      {"threshold_rule", "value at rank ceil(pfa * trials) of the null statistics sorted descending"},
      {"detection_rule", "statistic > threshold"},
  };
  Json learned = Json::array();
  for (const auto& r : res.learned) learned.push_back(learn_json(r));
  j["learned"] = learned;
  Json detectors = Json::array();
  for (const auto& c : res.curves) detectors.push_back(curve_json(c));
  j["detectors"] = detectors;
  j["wall_seconds"] = res.seconds;
  j["errors"] = errors_json(res.errors);
  write_manifest(cfg.output_dir, j);
  return res;
}

DistanceResult run_distances(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  ensure_dir(cfg.output_dir);
  const TrainingSet t =
      gen_training(cfg.scenario, cfg.training_j, cfg.training_k, cfg.training_scr_db, cfg.seed);
  const auto clutter = raw(t.clutter_only);
  const auto target = raw(t.with_target);
  const std::size_t j_count = clutter.size();
  const std::size_t total = j_count + target.size();

  DistanceResult res;
  std::vector<Measure> done;
  std::vector<std::vector<double>> columns;
  for (Measure m : cfg.measures) {
    try {
      const CMatrix mean = detail::geometric_mean(m, clutter, cfg.mean);
      std::vector<double> col(total);
      parallel_for(total, resolve_threads(cfg.threads), [&](std::size_t i) {
        col[i] = detail::sq_dist(m, i < j_count ? clutter[i] : target[i - j_count], mean);
      });
      auto stats = [&](std::size_t b, std::size_t e) {
        const double n = static_cast<double>(e - b);
        const double mu = std::accumulate(col.begin() + static_cast<std::ptrdiff_t>(b),
                                          col.begin() + static_cast<std::ptrdiff_t>(e), 0.0) / n;
        double ss = 0.0;
        for (std::size_t i = b; i < e; ++i) ss += (col[i] - mu) * (col[i] - mu);
        return std::pair{mu, std::sqrt(ss / std::max(1.0, n - 1.0))};
      };
      DistanceSummary s;
      s.measure = m;
      std::tie(s.clutter_mean, s.clutter_std) = stats(0, j_count);
      std::tie(s.target_mean, s.target_std) = stats(j_count, total);
      res.summaries.push_back(s);
      done.push_back(m);
      columns.push_back(std::move(col));
    } catch (const std::exception& e) {
      res.errors.push_back({"distances " + to_string(m), e.what()});
    }
  }

  std::ostringstream os;
  os << "index,class";
  for (Measure m : done) os << ',' << to_string(m);
  os << '\n';
  for (std::size_t i = 0; i < total; ++i) {
    os << i << ',' << (i < j_count ? "clutter" : "target");
    for (const auto& col : columns) os << ',' << format_double(col[i]);
    os << '\n';
  }
  write_text(cfg.output_dir / "distances.csv", os.str());

  std::ostringstream gp;
  gp << gnuplot_preamble("distances.png", "Squared distance to the clutter CCM", "sample index",
                         "squared distance")
     << "set logscale y\n"
     << "set multiplot layout " << std::max<std::size_t>(1, done.size()) << ",1\n";
  for (std::size_t c = 0; c < done.size(); ++c) {
    const auto col = c + 3;
    gp << "set title " << quote(to_string(done[c])) << "\n"
       << "plot 'distances.csv' every ::1::" << j_count << " using 1:" << col
       << " with points pt 7 ps 0.3 title 'clutter', \\\n"
       << "     'distances.csv' every ::" << j_count + 1 << " using 1:" << col
       << " with points pt 7 ps 0.3 title 'target'\n";
  }
  gp << "unset multiplot\n";
  write_text(cfg.output_dir / "distances.gp", gp.str());

  Json j = manifest_base(cfg, "distances");
  Json summaries = Json::array();
  for (const auto& s : res.summaries) {
    summaries.push_back({{"measure", to_string(s.measure)},
                         {"clutter_mean", s.clutter_mean},
                         {"clutter_std", s.clutter_std},
                         {"target_mean", s.target_mean},
                         {"target_std", s.target_std},
                         {"separation", s.separation()}});
  }
  j["reference"] = "geometric mean of the clutter-only training subset, per measure";
  j["summaries"] = summaries;
  j["wall_seconds"] = seconds_since(t0);
  j["errors"] = errors_json(res.errors);
  write_manifest(cfg.output_dir, j);
  return res;
}

std::vector<BenchRow> run_bench(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  ensure_dir(cfg.output_dir);
  const auto& b = cfg.bench;
  std::vector<BenchRow> rows;
  for (int n : b.dims) {
    std::vector<CMatrix> set;
    for (int i = 0; i < b.k; ++i) set.push_back(bench_hpd(n, cfg.seed, static_cast<std::uint64_t>(n) * 100000u + i));
    auto add = [&](const char* kind, std::string name, std::string complexity, double t) {
      rows.push_back({kind, std::move(name), n, b.k, b.m, t, b.repetitions, std::move(complexity)});
    };
    add("mean", "arithmetic", "O(N^2(K-1))", time_median(b.repetitions, [&] {
          CMatrix s = CMatrix::Zero(n, n);
          for (const auto& x : set) s += x;
          s /= static_cast<double>(set.size());
          return s;
        }));
    const std::pair<Measure, const char*> mean_labels[] = {{Measure::Lem, "O(N^4K)"},
                                                           {Measure::Airm, "O(N^4(K-1)) per iteration"},
                                                           {Measure::Jbld, "O(N^3(K+1)) per iteration"},
                                                           {Measure::Skld, "O(N^3(K+6))"}};
    for (const auto& [m, label] : mean_labels) {
      add("mean", to_string(m), label,
          time_median(b.repetitions, [&] { return detail::geometric_mean(m, set, cfg.mean); }));
    }

    std::vector<HpdMatrix> hpd;
    for (const auto& x : set) hpd.push_back(HpdMatrix::assume(x));
    const HpdSet data(hpd);
    const StiefelMatrix w = StiefelMatrix::random(n, b.m, cfg.seed);
    const std::pair<Measure, const char*> grad_labels[] = {
        {Measure::Lem, "O(2M^4)+O(N^2M) per element"},
        {Measure::Airm, "O(M^4)+O(2N^2M) per element"},
        {Measure::Jbld, "O(2M^3)+O(2NM^2)+O(2N^2M) per element"},
        {Measure::Skld, "O(4M^3)+O(2NM^2)+O(2N^2M) per element"}};
    for (const auto& [m, label] : grad_labels) {
      const HpdMatrix z = geometric_mean(m, compress(w, data), cfg.mean);
      add("gradient", to_string(m), label,
          time_median(b.repetitions, [&] { return euclid_grad(m, w, data, z); }));
    }
  }

  std::ostringstream os;
  os << "kind,name,N,K,M,median_seconds,repetitions,complexity\n";
  for (const auto& r : rows) {
    os << r.kind << ',' << r.name << ',' << r.n << ',' << r.k << ',' << r.m << ','
       << format_double(r.median_seconds) << ',' << r.repetitions << ',' << r.complexity << '\n';
  }
  write_text(cfg.output_dir / "bench.csv", os.str());

  std::ostringstream gp;
  gp << gnuplot_preamble("bench.png", "Median wall time", "N", "seconds") << "set logscale xy\n"
     << "plot ";
  const char* names[] = {"arithmetic", "LEM", "AIRM", "JBLD", "SKLD"};
  bool first = true;
  for (const char* kind : {"mean", "gradient"}) {
    for (const char* name : names) {
      if (std::string(kind) == "gradient" && std::string(name) == "arithmetic") continue;
      if (!first) gp << ", \\\n     ";
      first = false;
      gp << "'bench.csv' using ((strcol(1) eq '" << kind << "' && strcol(2) eq '" << name
         << "') ? $3 : 1/0):6 skip 1 with linespoints title '" << kind << " " << name << "'";
    }
  }
  gp << "\n";
  write_text(cfg.output_dir / "bench.gp", gp.str());

  Json j = manifest_base(cfg, "bench");
  j["wall_seconds"] = seconds_since(t0);
  j["errors"] = Json::array();
  write_manifest(cfg.output_dir, j);
  return rows;
}

}  // namespace mig::harness
