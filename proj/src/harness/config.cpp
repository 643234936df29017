#include "mig/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mig::harness {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

long long to_integer(const std::string& v, const std::string& key) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& v, const std::string& key) {
  return static_cast<int>(to_integer(v, key));
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config: '" + key + "' expects true/false, got '" + v + "'");
}

template <class T, class F>
std::vector<T> to_list(const std::string& v, const std::string& key, F&& conv) {
  std::vector<T> out;
  for (const auto& item : split_list(v)) out.push_back(conv(item, key));
  if (out.empty()) throw ValidationError("config: '" + key + "' is an empty list");
  return out;
}

std::string airm_solver_name(AirmSolver s) {
  return s == AirmSolver::Karcher ? "karcher" : "log-domain";
}

AirmSolver parse_airm_solver(const std::string& v) {
  if (v == "karcher") return AirmSolver::Karcher;
  if (v == "log-domain") return AirmSolver::LogDomainFixedPoint;
  throw ValidationError("config: mean.airm_solver must be 'karcher' or 'log-domain', got '" + v + "'");
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += fmt(items[i]);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario.n", [](auto& c, auto& v, auto& k) { c.scenario.n = to_int(v, k); }},
      {"scenario.cnr_db", [](auto& c, auto& v, auto& k) { c.scenario.cnr_db = to_double(v, k); }},
      {"scenario.rho", [](auto& c, auto& v, auto& k) { c.scenario.rho = to_double(v, k); }},
      {"scenario.f_c", [](auto& c, auto& v, auto& k) { c.scenario.f_c = to_double(v, k); }},
      {"scenario.sigma_n2", [](auto& c, auto& v, auto& k) { c.scenario.sigma_n2 = to_double(v, k); }},
      {"scenario.f_s", [](auto& c, auto& v, auto& k) { c.scenario.f_s = to_double(v, k); }},
      {"scenario.interference.count",
       [](auto& c, auto& v, auto& k) { c.scenario.interference.count = to_int(v, k); }},
      {"scenario.interference.f_i",
       [](auto& c, auto& v, auto& k) { c.scenario.interference.f_i = to_double(v, k); }},
      {"scenario.interference.inr_db",
       [](auto& c, auto& v, auto& k) { c.scenario.interference.inr_db = to_double(v, k); }},
      {"scenario.interference.in_null_trials",
       [](auto& c, auto& v, auto& k) { c.scenario.interference.in_null_trials = to_bool(v, k); }},
      {"experiment.measures",
       [](auto& c, auto& v, auto& k) {
         c.measures = to_list<Measure>(v, k, [](const std::string& s, const std::string&) {
           return parse_measure(s);
         });
       }},
      {"experiment.m", [](auto& c, auto& v, auto& k) { c.target_dims = to_list<int>(v, k, to_int); }},
      {"experiment.k_multipliers",
       [](auto& c, auto& v, auto& k) { c.k_multipliers = to_list<double>(v, k, to_double); }},
      {"experiment.scr_db", [](auto& c, auto& v, auto& k) { c.scr_db = to_list<double>(v, k, to_double); }},
      {"experiment.pfa", [](auto& c, auto& v, auto& k) { c.pfa = to_double(v, k); }},
      {"experiment.trials_threshold", [](auto& c, auto& v, auto& k) { c.trials_threshold = to_int(v, k); }},
      {"experiment.trials_pd", [](auto& c, auto& v, auto& k) { c.trials_pd = to_int(v, k); }},
      {"experiment.threads",
       [](auto& c, auto& v, auto& k) { c.threads = static_cast<unsigned>(to_integer(v, k)); }},
      {"training.j", [](auto& c, auto& v, auto& k) { c.training_j = to_int(v, k); }},
      {"training.k", [](auto& c, auto& v, auto& k) { c.training_k = to_int(v, k); }},
      {"training.scr_db", [](auto& c, auto& v, auto& k) { c.training_scr_db = to_double(v, k); }},
      {"learner.outer_iterations",
       [](auto& c, auto& v, auto& k) { c.learner.outer_iterations = to_int(v, k); }},
      {"learner.rgd_iterations", [](auto& c, auto& v, auto& k) { c.learner.rgd_iterations = to_int(v, k); }},
      {"learner.initial_step", [](auto& c, auto& v, auto& k) { c.learner.initial_step = to_double(v, k); }},
      {"learner.armijo_shrink", [](auto& c, auto& v, auto& k) { c.learner.armijo_shrink = to_double(v, k); }},
      {"learner.armijo_slope", [](auto& c, auto& v, auto& k) { c.learner.armijo_slope = to_double(v, k); }},
      {"learner.tolerance", [](auto& c, auto& v, auto& k) { c.learner.tolerance = to_double(v, k); }},
      {"mean.max_iterations", [](auto& c, auto& v, auto& k) { c.mean.max_iterations = to_int(v, k); }},
      {"mean.residual_tolerance",
       [](auto& c, auto& v, auto& k) { c.mean.residual_tolerance = to_double(v, k); }},
      {"mean.airm_solver", [](auto& c, auto& v, auto&) { c.mean.airm_solver = parse_airm_solver(v); }},
      {"mean.airm_relaxation",
       [](auto& c, auto& v, auto& k) {
         if (v == "auto") c.mean.airm_relaxation.reset();
         else c.mean.airm_relaxation = to_double(v, k);
       }},
      {"mean.jbld_anderson_depth",
       [](auto& c, auto& v, auto& k) { c.mean.jbld_anderson_depth = to_int(v, k); }},
      {"bench.n", [](auto& c, auto& v, auto& k) { c.bench.dims = to_list<int>(v, k, to_int); }},
      {"bench.k", [](auto& c, auto& v, auto& k) { c.bench.k = to_int(v, k); }},
      {"bench.m", [](auto& c, auto& v, auto& k) { c.bench.m = to_int(v, k); }},
      {"bench.repetitions", [](auto& c, auto& v, auto& k) { c.bench.repetitions = to_int(v, k); }},
      {"seed",
       [](auto& c, auto& v, auto& k) { c.seed = static_cast<std::uint64_t>(to_integer(v, k)); }},
      {"output.dir", [](auto& c, auto& v, auto&) { c.output_dir = v; }},
  };
  return table;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

int ExperimentConfig::secondary_count(int m, double multiplier) {
  return static_cast<int>(std::lround(multiplier * m));
}

void ExperimentConfig::validate() const {
  scenario.validate();
  learner.validate();
  if (measures.empty()) throw ValidationError("config: no measures selected");
  if (target_dims.empty() || k_multipliers.empty() || scr_db.empty()) {
    throw ValidationError("config: experiment lists must be non-empty");
  }
  for (int m : target_dims) {
    if (m < 1 || m > scenario.n) {
      throw ValidationError("config: target dimension " + std::to_string(m) + " outside [1, N]");
    }
    for (double mult : k_multipliers) {
      if (!(mult > 0.0)) throw ValidationError("config: K multipliers must be positive");
      const int k = secondary_count(m, mult);
      if (k < 1) throw ValidationError("config: K rounds to zero");
      if (scenario.interference.count > k) {
        throw ValidationError("config: interference count exceeds K = " + std::to_string(k));
      }
    }
  }
  validate_threshold_request(pfa, trials_threshold);
  if (trials_pd < 100) throw ValidationError("config: experiment.trials_pd must be at least 100");
  if (training_j < 1 || training_k < 1) throw ValidationError("config: training sizes must be positive");
  if (mean.max_iterations < 1 || !(mean.residual_tolerance > 0.0)) {
    throw ValidationError("config: invalid mean settings");
  }
  if (bench.dims.empty() || bench.k < 1 || bench.m < 1 || bench.repetitions < 20) {
    throw ValidationError("config: bench needs dims, k >= 1, m >= 1 and at least 20 repetitions");
  }
  for (int n : bench.dims) {
    if (n < 2 || bench.m > n) throw ValidationError("config: bench dimension must be >= max(2, m)");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError("config: expected 'key = value'", line_no);
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError("config: unknown key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ParseError("config: duplicate key '" + key + "'", line_no);
    try {
      it->second(cfg, value, key);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream os;
  auto d = [](double v) { return format_double(v); };
  auto i = [](int v) { return std::to_string(v); };
  os << "seed = " << c.seed << "\n"
     << "output.dir = " << c.output_dir.string() << "\n\n"
     << "scenario.n = " << c.scenario.n << "\n"
     << "scenario.cnr_db = " << d(c.scenario.cnr_db) << "\n"
     << "scenario.rho = " << d(c.scenario.rho) << "\n"
     << "scenario.f_c = " << d(c.scenario.f_c) << "\n"
     << "scenario.sigma_n2 = " << d(c.scenario.sigma_n2) << "\n"
     << "scenario.f_s = " << d(c.scenario.f_s) << "\n"
     << "scenario.interference.count = " << c.scenario.interference.count << "\n"
     << "scenario.interference.f_i = " << d(c.scenario.interference.f_i) << "\n"
     << "scenario.interference.inr_db = " << d(c.scenario.interference.inr_db) << "\n"
     << "scenario.interference.in_null_trials = "
     << (c.scenario.interference.in_null_trials ? "true" : "false") << "\n\n"
     << "experiment.measures = " << join(c.measures, [](Measure m) { return to_string(m); }) << "\n"
     << "experiment.m = " << join(c.target_dims, i) << "\n"
     << "experiment.k_multipliers = " << join(c.k_multipliers, d) << "\n"
     << "experiment.scr_db = " << join(c.scr_db, d) << "\n"
     << "experiment.pfa = " << d(c.pfa) << "\n"
     << "experiment.trials_threshold = " << c.trials_threshold << "\n"
     << "experiment.trials_pd = " << c.trials_pd << "\n"
     << "experiment.threads = " << c.threads << "\n\n"
     << "training.j = " << c.training_j << "\n"
     << "training.k = " << c.training_k << "\n"
     << "training.scr_db = " << d(c.training_scr_db) << "\n\n"
     << "learner.outer_iterations = " << c.learner.outer_iterations << "\n"
     << "learner.rgd_iterations = " << c.learner.rgd_iterations << "\n"
     << "learner.initial_step = " << d(c.learner.initial_step) << "\n"
     << "learner.armijo_shrink = " << d(c.learner.armijo_shrink) << "\n"
     << "learner.armijo_slope = " << d(c.learner.armijo_slope) << "\n"
     << "learner.tolerance = " << d(c.learner.tolerance) << "\n\n"
     << "mean.max_iterations = " << c.mean.max_iterations << "\n"
     << "mean.residual_tolerance = " << d(c.mean.residual_tolerance) << "\n"
     << "mean.airm_solver = " << airm_solver_name(c.mean.airm_solver) << "\n"
     << "mean.airm_relaxation = " << (c.mean.airm_relaxation ? d(*c.mean.airm_relaxation) : "auto") << "\n"
     << "mean.jbld_anderson_depth = " << c.mean.jbld_anderson_depth << "\n\n"
     << "bench.n = " << join(c.bench.dims, i) << "\n"
     << "bench.k = " << c.bench.k << "\n"
     << "bench.m = " << c.bench.m << "\n"
     << "bench.repetitions = " << c.bench.repetitions << "\n";
  return os.str();
}

}  // namespace mig::harness
