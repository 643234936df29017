// migdet: command-line front end for the experiment harness.
//
// Exit codes: 0 success, 1 validation error, 2 numeric error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mig/harness/experiments.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "configuration file (key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "override the configured seed");
  cmd->add_option("--out", c.out, "override the output directory");
}

mig::harness::ExperimentConfig resolve(const Common& c) {
  mig::harness::ExperimentConfig cfg;
  if (!c.config.empty()) cfg = mig::harness::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.output_dir = c.out;
  cfg.validate();
  return cfg;
}

int report_errors(const std::vector<mig::harness::RunError>& errors) {
  for (const auto& e : errors) std::cerr << "error [" << e.scope << "]: " << e.message << "\n";
  return errors.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix information geometry detectors with learned manifold projection"};
  app.require_subcommand(1);

  Common gen, learn, sweep, dist, bench;
  std::string training_dir;
  add_common(app.add_subcommand("gen-training", "generate clutter and target training stacks"), gen);
  auto* learn_cmd = app.add_subcommand("learn-projection", "learn projections per measure and M");
  add_common(learn_cmd, learn);
  learn_cmd->add_option("--training", training_dir, "directory written by gen-training")
      ->check(CLI::ExistingDirectory);
  add_common(app.add_subcommand("sweep", "Pd vs SCR for every detector, M and K"), sweep);
  add_common(app.add_subcommand("distances", "distance scatter of the training set"), dist);
  add_common(app.add_subcommand("bench", "timings of the means and gradients"), bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    using namespace mig::harness;
    if (app.got_subcommand("gen-training")) {
      const auto out = run_gen_training(resolve(gen));
      std::cout << "wrote " << out.clutter_file.string() << " and " << out.target_file.string() << "\n";
      return 0;
    }
    if (app.got_subcommand("learn-projection")) {
      const auto cfg = resolve(learn);
      std::optional<mig::TrainingSet> training;
      if (!training_dir.empty()) training = load_training(training_dir, cfg.training_scr_db);
      std::vector<RunError> errors;
      for (const auto& r : run_learn_projection(cfg, training)) {
        if (r.error) {
          errors.push_back({mig::to_string(r.measure) + " M=" + std::to_string(r.m), *r.error});
        } else {
          std::cout << mig::to_string(r.measure) << " M=" << r.m
                    << " variance=" << r.result->final_variance << "\n";
        }
      }
      return report_errors(errors);
    }
    if (app.got_subcommand("sweep")) {
      const auto res = run_sweep(resolve(sweep));
      for (const auto& c : res.curves) {
        if (!c.error) std::cout << c.csv.string() << "\n";
      }
      return report_errors(res.errors);
    }
    if (app.got_subcommand("distances")) {
      const auto res = run_distances(resolve(dist));
      for (const auto& s : res.summaries) {
        std::cout << mig::to_string(s.measure) << " clutter " << s.clutter_mean << " target "
                  << s.target_mean << " separation " << s.separation() << "\n";
      }
      return report_errors(res.errors);
    }
    if (app.got_subcommand("bench")) {
      for (const auto& r : run_bench(resolve(bench))) {
        std::cout << r.kind << ' ' << r.name << " N=" << r.n << ' ' << r.median_seconds << " s\n";
      }
      return 0;
    }
  } catch (const mig::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const mig::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
