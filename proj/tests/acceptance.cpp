// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only N] [unit-test-binary ...]
//
// The unit test binaries are run for criterion 8.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "daaca/config.hpp"
#include "daaca/experiment.hpp"
#include "daaca/metrics.hpp"
#include "daaca/sweep.hpp"

using namespace daaca;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Job {
  SimulationConfig cfg;
  std::uint64_t seed;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<MetricsReport> run_all(const std::vector<Job>& jobs) {
  std::vector<MetricsReport> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers(), jobs.size()); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < jobs.size();) out[i] = run_simulation(jobs[i].cfg, jobs[i].seed);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

// Results keyed by algorithm, one value per seed in seed order.
using BySeed = std::map<Algorithm, std::vector<MetricsReport>>;

BySeed run_grid(const std::vector<Algorithm>& algs, const std::vector<std::uint64_t>& seeds,
                const std::function<SimulationConfig(Algorithm)>& make) {
  std::vector<Job> jobs;
  for (auto a : algs) {
    for (auto s : seeds) jobs.push_back({make(a), s});
  }
  const auto reports = run_all(jobs);
  BySeed out;
  std::size_t k = 0;
  for (auto a : algs) {
    for (std::size_t i = 0; i < seeds.size(); ++i) out[a].push_back(reports[k++]);
  }
  return out;
}

std::vector<double> pick(const std::vector<MetricsReport>& rs,
                         const std::function<double(const MetricsReport&)>& f) {
  std::vector<double> v;
  for (const auto& r : rs) v.push_back(f(r));
  return v;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? NAN : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string fmt(double x, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "NOT ") + what;
  }
};

// Chain a[0] >= a[1] >= ... on per-seed values: means must be ordered and
// each adjacent pair must win a one-sided sign test.
void ordered_chain(Verdict& v, const std::vector<std::pair<std::string, std::vector<double>>>& chain,
                   bool sign_tests, int prec = 6) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const auto& [na, a] = chain[i];
    const auto& [nb, b] = chain[i + 1];
    std::string what = na + " " + fmt(mean(a), prec) + " >= " + nb + " " + fmt(mean(b), prec);
    bool ok = mean(a) >= mean(b);
    if (sign_tests) {
      const auto t = sign_test(a, b);
      what += " (sign " + std::to_string(t.wins) + "/" + std::to_string(t.losses) + "/" +
              std::to_string(t.ties) + " p=" + fmt(t.p_value, 3) + ")";
      ok = ok && t.p_value < 0.05;
    }
    v.require(ok, what);
  }
}

std::vector<std::uint64_t> seeds_1_to(std::size_t n) { return default_seeds(n); }

SimulationConfig grid_cell(Algorithm a, const FieldSize& size, std::uint64_t packets) {
  ExperimentConfig e;
  return e.cell(a, size, packets);
}

const FieldSize kLarge{100, 100, 1000};
const FieldSize kSmall{40, 50, 200};

// Runs shared by criteria 1-3.
BySeed& spatial_runs() {
  static BySeed runs = [] {
    auto out = run_grid({Algorithm::Basic, Algorithm::ACA, Algorithm::L_PEDAP, Algorithm::PEDAP, Algorithm::LMST},
                        seeds_1_to(10), [](Algorithm a) { return grid_cell(a, kLarge, 1000); });
    auto extra = run_grid({Algorithm::ES, Algorithm::MM, Algorithm::ACS}, {1},
                          [](Algorithm a) { return grid_cell(a, kLarge, 1000); });
    out.merge(extra);
    return out;
  }();
  return runs;
}

// Runs shared by criteria 4, 5 and 7.
BySeed& energy_runs() {
  static BySeed runs = run_grid(
      {Algorithm::ACS, Algorithm::MM, Algorithm::ES, Algorithm::Basic, Algorithm::ACA, Algorithm::PEDAP_PA},
      seeds_1_to(20), [](Algorithm a) { return grid_cell(a, kSmall, 5000); });
  return runs;
}

Verdict criterion1() {
  Verdict v;
  auto& runs = spatial_runs();
  for (auto a : {Algorithm::Basic, Algorithm::ES, Algorithm::MM, Algorithm::ACS, Algorithm::ACA, Algorithm::PEDAP}) {
    const auto& r = runs.at(a).front();
    const double d = r.avg_degree.value_or(NAN);
    v.require(std::abs(d - 0.999) < 1e-12, std::string(to_string(a)) + " " + fmt(d, 6));
  }
  return v;
}

Verdict criterion2() {
  Verdict v;
  auto& runs = spatial_runs();
  for (auto a : {Algorithm::LMST, Algorithm::L_PEDAP}) {
    const double m = mean(pick(runs.at(a), [](const MetricsReport& r) { return r.avg_degree.value_or(NAN); }));
    v.require(std::abs(m - 2.04) <= 0.15 * 2.04, std::string(to_string(a)) + " " + fmt(m) + " vs 2.04");
  }
  return v;
}

Verdict criterion3() {
  Verdict v;
  auto& runs = spatial_runs();
  const std::vector<std::pair<Algorithm, double>> order = {{Algorithm::Basic, 1.79},
                                                           {Algorithm::ACA, 1.8},
                                                           {Algorithm::L_PEDAP, 2.07},
                                                           {Algorithm::PEDAP, 2.19},
                                                           {Algorithm::LMST, 4.81}};
  std::vector<std::pair<std::string, std::vector<double>>> chain;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    chain.emplace_back(std::string(to_string(it->first)),
                       pick(runs.at(it->first), [](const MetricsReport& r) { return r.avg_tx_radius.value_or(NAN); }));
  }
  ordered_chain(v, chain, true, 4);
  for (const auto& [a, target] : order) {
    const double m =
        mean(pick(runs.at(a), [](const MetricsReport& r) { return r.avg_tx_radius.value_or(NAN); }));
    v.require(std::abs(m - target) <= 0.25 * target,
              std::string(to_string(a)) + " radius " + fmt(m) + " within 25% of " + fmt(target, 3));
  }
  return v;
}

Verdict criterion4() {
  Verdict v;
  auto& runs = energy_runs();
  auto remaining = [&](Algorithm a) {
    return pick(runs.at(a), [](const MetricsReport& r) { return r.avg_remaining_energy.back(); });
  };
  ordered_chain(v, {{"ACS", remaining(Algorithm::ACS)},
                    {"MM", remaining(Algorithm::MM)},
                    {"ES", remaining(Algorithm::ES)},
                    {"Basic", remaining(Algorithm::Basic)}},
                true, 7);
  ordered_chain(v, {{"Basic", remaining(Algorithm::Basic)}, {"ACA", remaining(Algorithm::ACA)}}, true, 7);
  ordered_chain(v, {{"Basic", remaining(Algorithm::Basic)}, {"PEDAP-PA", remaining(Algorithm::PEDAP_PA)}}, true, 7);
  return v;
}

Verdict criterion5() {
  Verdict v;
  auto& runs = energy_runs();
  auto diff = [&](Algorithm a) {
    return pick(runs.at(a), [](const MetricsReport& r) { return r.energy_difference.back(); });
  };
  ordered_chain(v, {{"Basic", diff(Algorithm::Basic)},
                    {"MM", diff(Algorithm::MM)},
                    {"ES", diff(Algorithm::ES)},
                    {"ACS", diff(Algorithm::ACS)}},
                true, 5);
  return v;
}

Verdict criterion6() {
  Verdict v;
  ExperimentConfig e;
  e.lifetime.enabled = true;
  const auto runs = run_grid(all_algorithms(), seeds_1_to(20),
                             [&](Algorithm a) { return e.lifetime_cell(a, kSmall); });
  auto life = [&](Algorithm a) {
    return pick(runs.at(a), [](const MetricsReport& r) { return static_cast<double>(r.lifetime_rounds.value_or(0)); });
  };
  ordered_chain(v, {{"ACS", life(Algorithm::ACS)},
                    {"MM", life(Algorithm::MM)},
                    {"ES", life(Algorithm::ES)},
                    {"Basic", life(Algorithm::Basic)}},
                true, 5);
  for (auto d : {Algorithm::Basic, Algorithm::ES, Algorithm::MM, Algorithm::ACS}) {
    for (auto b : {Algorithm::LMST, Algorithm::PEDAP, Algorithm::PEDAP_PA, Algorithm::L_PEDAP, Algorithm::ACA}) {
      ordered_chain(v, {{std::string(to_string(d)), life(d)}, {std::string(to_string(b)), life(b)}}, true, 5);
    }
  }
  return v;
}

Verdict criterion7() {
  Verdict v;
  auto& runs = energy_runs();
  auto ratio = [&](Algorithm a) {
    return pick(runs.at(a), [](const MetricsReport& r) { return r.hop_success_ratio.value_or(NAN); });
  };
  ordered_chain(v, {{"ACS", ratio(Algorithm::ACS)},
                    {"MM", ratio(Algorithm::MM)},
                    {"ES", ratio(Algorithm::ES)},
                    {"Basic", ratio(Algorithm::Basic)}},
                false, 6);
  return v;
}

Verdict criterion8(const std::vector<std::string>& suites) {
  Verdict v;
  if (suites.empty()) v.require(false, "unit test binaries given");
  for (const auto& s : suites) {
    const std::string cmd = "\"" + s + "\" --minimal > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    v.require(rc == 0, fs::path(s).filename().string() + " green");
  }
  // Replay: two executions of the same (config, seed) give the same CSV bytes.
  bool same = true;
  for (auto a : all_algorithms()) {
    const auto cfg = grid_cell(a, kSmall, 500);
    const auto x = emit_csv(report_rows(run_simulation(cfg, 7), 10));
    const auto y = emit_csv(report_rows(run_simulation(cfg, 7), 10));
    same = same && x == y;
  }
  v.require(same, "replayed CSV identical for all algorithms");
  return v;
}

Verdict criterion9() {
  Verdict v;
  std::size_t remove_bad = 0, add_bad = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SimulationConfig cfg = grid_cell(seed % 2 ? Algorithm::Basic : Algorithm::ACS, kSmall, 1000);
    Simulation sim(cfg, seed);
    for (int r = 0; r < 5; ++r) sim.step();
    RngStream pick_rng(seed + 1000);
    NodeId victim;
    do {
      victim = static_cast<NodeId>(pick_rng.below(sim.graph().size()));
    } while (victim == sim.graph().sink());

    auto before = sim.tables();
    const auto expect_removed = sim.graph().neighbors(victim);
    const auto rep = sim.scenario_remove_node(victim);
    std::set<NodeId> changed;
    for (NodeId i = 0; i < sim.graph().size(); ++i) {
      if (i != victim && !(sim.tables()[i] == before[i])) changed.insert(i);
    }
    // a neighbor without a row for the victim keeps its table as it was
    std::set<NodeId> holders;
    for (NodeId t : expect_removed) {
      if (before[t].find(victim)) holders.insert(t);
    }
    if (rep.touched != expect_removed || changed != holders) ++remove_bad;
    for (NodeId i : expect_removed) {
      if (sim.tables()[i].find(victim)) ++remove_bad;
    }

    const Position pos{pick_rng.uniform(0, kSmall.width), pick_rng.uniform(0, kSmall.length)};
    std::vector<NodeId> in_range;
    for (const auto& s : sim.graph().nodes()) {
      if (!s.removed && euclid(s.pos, pos) <= cfg.range && euclid(s.pos, pos) > 0) in_range.push_back(s.id);
    }
    before = sim.tables();
    const auto add = sim.scenario_add_node(pos);
    changed.clear();
    for (NodeId i = 0; i < before.size(); ++i) {
      if (!(sim.tables()[i] == before[i])) changed.insert(i);
    }
    std::set<NodeId> farther;
    for (NodeId t : in_range) {
      if (t != sim.graph().sink() && sim.graph().nearer_to_sink(add.node, t)) farther.insert(t);
    }
    if (add.touched != in_range || changed != farther) ++add_bad;
  }
  v.require(remove_bad == 0, "remove touched exactly the victim's neighbors on 50 graphs");
  v.require(add_bad == 0, "add touched exactly the in-range nodes on 50 graphs");
  return v;
}

Verdict criterion10() {
  Verdict v;
  auto cfg = *preset("smoke");
  cfg.out = fs::temp_directory_path() / "daaca_acceptance_smoke";
  fs::remove_all(cfg.out);
  cfg.jobs = workers();
  const auto t0 = Clock::now();
  const auto sum = run_sweep(cfg);
  const auto problems = write_plot_files(sum.rows, cfg, cfg.out);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::set<std::string> algs;
  for (const auto& r : sum.rows) {
    if (r.metric == kCompletedMetric) algs.insert(r.algorithm);
  }
  v.require(sum.failed == 0, std::to_string(sum.failed) + " failed runs");
  v.require(algs.size() == 9, std::to_string(algs.size()) + " algorithms completed");
  v.require(problems.empty(), "all figure files written");
  for (const auto& f : figure_names()) {
    if (!fs::exists(cfg.out / (f + ".dat"))) v.require(false, f + ".dat present");
  }
  v.require(secs < 600, fmt(secs, 3) + " s");
  fs::remove_all(cfg.out);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  std::vector<std::string> suites;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      suites.push_back(a);
    }
  }
  const std::vector<std::function<Verdict()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, [&] { return criterion8(suites); }, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("criterion %zu: %s [%.1fs] %s\n", i + 1, v.pass ? "PASS" : "FAIL", secs, v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
