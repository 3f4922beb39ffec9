#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "daaca/config.hpp"
#include "daaca/sweep.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Round-based simulator for ant-colony data aggregation routing"};
  std::string config_path, preset_name, seed_list, out_dir, algorithms;
  unsigned jobs = 0;
  app.add_option("--config", config_path, "Experiment config file")->check(CLI::ExistingFile);
  app.add_option("--preset", preset_name, "smoke | table3-small | paper-small | paper-full");
  app.add_option("--seed-list", seed_list, "Seeds, e.g. 1,2,5-9");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--algorithms", algorithms, "Comma-separated algorithm names");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  daaca::ExperimentConfig cfg;
  try {
    if (!config_path.empty() && !preset_name.empty()) {
      throw daaca::ConfigError("--config and --preset are mutually exclusive");
    }
    if (!preset_name.empty()) {
      auto p = daaca::preset(preset_name);
      if (!p) throw daaca::ConfigError("unknown preset '" + preset_name + "'");
      cfg = *p;
    } else if (!config_path.empty()) {
      cfg = daaca::load_config(config_path);
    }
    if (!seed_list.empty()) cfg.seeds = daaca::parse_seed_list(seed_list);
    if (!algorithms.empty()) cfg.algorithms = daaca::parse_algorithm_list(algorithms);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (jobs > 0) cfg.jobs = jobs;
    cfg.validate();
  } catch (const daaca::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  daaca::SweepSummary summary;
  try {
    summary = daaca::run_sweep(cfg, &std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "sweep failed: " << e.what() << '\n';
    return 2;
  }
  const auto problems = daaca::write_plot_files(summary.rows, cfg, cfg.out);
  for (const auto& p : problems) std::cerr << "plot data: " << p << '\n';
  for (const auto& e : summary.errors) std::cerr << "run failed: " << e << '\n';
  std::cout << "results: " << (cfg.out / "results.csv").string() << '\n';
  return summary.failed > 0 || !problems.empty() ? 2 : 0;
}
