#include "daaca/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "daaca/experiment.hpp"

namespace daaca {

namespace fs = std::filesystem;

bool ResultRow::operator==(const ResultRow& o) const {
  const bool same_value = value == o.value || (std::isnan(value) && std::isnan(o.value));
  return algorithm == o.algorithm && n == o.n && width == o.width && length == o.length &&
         packets == o.packets && seed == o.seed && metric == o.metric && round == o.round &&
         same_value;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

template <typename T>
bool parse_num(std::string_view s, T& out) {
  if (s == "nan") {
    if constexpr (std::is_floating_point_v<T>) {
      out = std::numeric_limits<T>::quiet_NaN();
      return true;
    }
    return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

// (algorithm, n, width, length, packets, seed, lifetime)
using CellKey = std::tuple<std::string, std::size_t, double, double, std::uint64_t, std::uint64_t, bool>;

bool is_lifetime_metric(std::string_view m) { return m.rfind("lifetime_", 0) == 0; }

CellKey key_of(const ResultRow& r) {
  return {r.algorithm, r.n, r.width, r.length, r.packets, r.seed, is_lifetime_metric(r.metric)};
}

CellKey key_of(const SweepCell& c) {
  return {std::string(to_string(c.algorithm)), c.size.n, c.size.width, c.size.length, c.packets,
          c.seed, c.lifetime};
}

ResultRow base_row(const SweepCell& c) {
  ResultRow r;
  r.algorithm = std::string(to_string(c.algorithm));
  r.n = c.size.n;
  r.width = c.size.width;
  r.length = c.size.length;
  r.packets = c.packets;
  r.seed = c.seed;
  return r;
}

std::string describe(const SweepCell& c) {
  std::ostringstream s;
  s << to_string(c.algorithm) << " (" << fmt(c.size.width) << "x" << fmt(c.size.length) << ", "
    << c.size.n << ") packets=" << c.packets << " seed=" << c.seed << (c.lifetime ? " lifetime" : "");
  return s.str();
}

std::vector<ResultRow> read_rows(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return {};
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace

std::string format_row(const ResultRow& r) {
  std::string s = r.algorithm;
  s += ',' + std::to_string(r.n) + ',' + fmt(r.width) + ',' + fmt(r.length) + ',' +
       std::to_string(r.packets) + ',' + std::to_string(r.seed) + ',' + r.metric + ',';
  if (r.round) s += std::to_string(*r.round);
  s += ',' + fmt(r.value);
  return s;
}

std::string emit_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_row(r);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kCsvHeader) throw std::runtime_error("results.csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    auto bad = [&](const char* what) {
      return std::runtime_error("results.csv line " + std::to_string(line_no) + ": " + what);
    };
    if (f.size() != 9) throw bad("expected 9 fields");
    ResultRow r;
    r.algorithm = std::string(f[0]);
    r.metric = std::string(f[6]);
    if (!parse_num(f[1], r.n) || !parse_num(f[2], r.width) || !parse_num(f[3], r.length) ||
        !parse_num(f[4], r.packets) || !parse_num(f[5], r.seed) || !parse_num(f[8], r.value)) {
      throw bad("malformed number");
    }
    if (!f[7].empty()) {
      std::uint64_t round = 0;
      if (!parse_num(f[7], round)) throw bad("malformed round");
      r.round = round;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepCell> sweep_cells(const ExperimentConfig& cfg) {
  std::vector<SweepCell> cells;
  for (auto a : cfg.algorithms) {
    for (const auto& s : cfg.sizes) {
      for (auto p : cfg.packets) {
        for (auto seed : cfg.seeds) cells.push_back({a, s, p, seed, false});
      }
      if (cfg.lifetime.enabled) {
        for (auto seed : cfg.seeds) cells.push_back({a, s, cfg.lifetime.packets, seed, true});
      }
    }
  }
  return cells;
}

std::vector<ResultRow> report_rows(const MetricsReport& r, std::uint64_t stride) {
  ResultRow base;
  base.algorithm = r.algorithm;
  base.n = r.n;
  base.width = r.width;
  base.length = r.length;
  base.packets = r.packets;
  base.seed = r.seed;
  std::vector<ResultRow> rows;
  auto scalar = [&](const char* metric, double v) {
    ResultRow row = base;
    row.metric = metric;
    row.value = v;
    rows.push_back(std::move(row));
  };
  auto series = [&](const char* metric, const std::vector<double>& ys) {
    for (std::size_t t = 0; t < ys.size(); ++t) {
      if (t % stride != 0 && t + 1 != ys.size()) continue;
      ResultRow row = base;
      row.metric = metric;
      row.round = t;
      row.value = ys[t];
      rows.push_back(std::move(row));
    }
  };
  series("avg_remaining_energy", r.avg_remaining_energy);
  series("avg_remaining_energy_with_sink", r.avg_remaining_energy_with_sink);
  series("energy_difference", r.energy_difference);
  series("energy_difference_with_sink", r.energy_difference_with_sink);
  scalar("final_avg_remaining_energy", r.avg_remaining_energy.back());
  scalar("final_avg_remaining_energy_with_sink", r.avg_remaining_energy_with_sink.back());
  scalar("final_energy_difference", r.energy_difference.back());
  scalar("final_energy_difference_with_sink", r.energy_difference_with_sink.back());
  if (r.hop_success_ratio) scalar("hop_success_ratio", *r.hop_success_ratio);
  if (r.avg_degree) scalar("avg_degree", *r.avg_degree);
  if (r.avg_tx_radius) scalar("avg_tx_radius", *r.avg_tx_radius);
  scalar("first_death_round", static_cast<double>(*r.lifetime_rounds));
  scalar("first_death_censored", r.lifetime_censored ? 1.0 : 0.0);
  if (r.sink_death_round) scalar("sink_death_round", static_cast<double>(*r.sink_death_round));
  scalar("rounds_run", static_cast<double>(r.rounds_run));
  scalar("delivered", static_cast<double>(r.delivered));
  scalar("dropped", static_cast<double>(r.dropped));
  scalar("energy_tx", r.energy_tx);
  scalar("energy_rx", r.energy_rx);
  scalar("energy_control", r.energy_control);
  scalar(kCompletedMetric.data(), 1.0);
  return rows;
}

std::vector<ResultRow> lifetime_rows(const MetricsReport& r, std::uint64_t packets) {
  ResultRow base;
  base.algorithm = r.algorithm;
  base.n = r.n;
  base.width = r.width;
  base.length = r.length;
  base.packets = packets;
  base.seed = r.seed;
  std::vector<ResultRow> rows;
  auto scalar = [&](const char* metric, double v) {
    ResultRow row = base;
    row.metric = metric;
    row.value = v;
    rows.push_back(std::move(row));
  };
  scalar("lifetime_rounds", static_cast<double>(*r.lifetime_rounds));
  scalar("lifetime_censored", r.lifetime_censored ? 1.0 : 0.0);
  if (r.sink_death_round) scalar("lifetime_sink_death_round", static_cast<double>(*r.sink_death_round));
  scalar(kLifetimeCompletedMetric.data(), 1.0);
  return rows;
}

std::vector<ResultRow> run_cell(const ExperimentConfig& cfg, const SweepCell& cell, std::string* error) {
  try {
    if (cell.lifetime) {
      const auto sim_cfg = cfg.lifetime_cell(cell.algorithm, cell.size);
      return lifetime_rows(run_simulation(sim_cfg, cell.seed), cell.packets);
    }
    const auto sim_cfg = cfg.cell(cell.algorithm, cell.size, cell.packets);
    return report_rows(run_simulation(sim_cfg, cell.seed), cfg.series_stride);
  } catch (const std::exception& e) {
    if (error) *error = e.what();
    ResultRow r = base_row(cell);
    r.metric = cell.lifetime ? "lifetime_error" : "error";
    r.value = std::numeric_limits<double>::quiet_NaN();
    return {r};
  }
}

SweepSummary run_sweep(const ExperimentConfig& cfg, std::ostream* progress) {
  cfg.validate();
  fs::create_directories(cfg.out);
  const auto csv_path = cfg.out / "results.csv";
  const auto partial_path = cfg.out / "results.csv.partial";

  // Rows of an interrupted sweep live in the partial file; both are reusable.
  std::map<CellKey, std::vector<ResultRow>> previous;
  std::set<CellKey> done;
  for (const auto& p : {csv_path, partial_path}) {
    std::map<CellKey, std::vector<ResultRow>> from_file;
    for (auto& r : read_rows(p)) {
      const auto k = key_of(r);
      if (r.metric == kCompletedMetric || r.metric == kLifetimeCompletedMetric) done.insert(k);
      from_file[k].push_back(std::move(r));
    }
    for (auto& [k, rows] : from_file) {
      if (done.count(k) && !previous.count(k)) previous[k] = std::move(rows);
    }
  }

  const auto cells = sweep_cells(cfg);
  SweepSummary summary;
  summary.cells = cells.size();
  std::vector<std::optional<std::vector<ResultRow>>> slots(cells.size());
  std::vector<std::string> slot_errors(cells.size());
  std::vector<std::size_t> todo;
  std::vector<char> fresh(cells.size(), 0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto it = previous.find(key_of(cells[i]));
    if (it != previous.end()) {
      slots[i] = std::move(it->second);
      ++summary.reused;
    } else {
      todo.push_back(i);
      fresh[i] = 1;
    }
  }

  std::mutex mu;
  std::condition_variable cv;
  std::size_t next_task = 0;
  auto worker = [&] {
    while (true) {
      std::size_t idx;
      {
        std::lock_guard lock(mu);
        if (next_task >= todo.size()) return;
        idx = todo[next_task++];
      }
      std::string err;
      auto rows = run_cell(cfg, cells[idx], &err);
      {
        std::lock_guard lock(mu);
        slots[idx] = std::move(rows);
        slot_errors[idx] = std::move(err);
      }
      cv.notify_all();
    }
  };
  const auto threads = std::min<std::size_t>(cfg.jobs, std::max<std::size_t>(todo.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);

  {
    std::ofstream out(partial_path, std::ios::binary | std::ios::trunc);
    out << kCsvHeader << '\n';
    const auto start = std::chrono::steady_clock::now();
    std::size_t computed_seen = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::vector<ResultRow> rows;
      std::string err;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return slots[i].has_value(); });
        rows = *slots[i];
        err = slot_errors[i];
      }
      for (const auto& r : rows) out << format_row(r) << '\n';
      out.flush();
      if (fresh[i]) {
        ++computed_seen;
        ++summary.computed;
        if (!err.empty()) {
          ++summary.failed;
          summary.errors.push_back(describe(cells[i]) + ": " + err);
        }
        if (progress) {
          const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          *progress << "[" << computed_seen << "/" << todo.size() << "] " << describe(cells[i])
                    << (err.empty() ? "" : " FAILED: " + err) << " (" << fmt(std::round(secs * 10) / 10)
                    << " s)\n";
        }
      }
      summary.rows.insert(summary.rows.end(), rows.begin(), rows.end());
    }
  }
  for (auto& t : pool) t.join();
  fs::rename(partial_path, csv_path);

  std::ofstream errors(cfg.out / "errors.txt", std::ios::binary | std::ios::trunc);
  for (const auto& e : summary.errors) errors << e << '\n';
  if (progress) {
    *progress << summary.cells << " cells: " << summary.computed << " computed, " << summary.reused
              << " reused, " << summary.failed << " failed\n";
  }
  return summary;
}

CoverageError::CoverageError(const std::string& figure, std::vector<std::string> missing)
    : std::runtime_error([&] {
        std::string m = figure + ": missing coverage for";
        for (const auto& c : missing) m += "\n  " + c;
        return m;
      }()),
      missing_(std::move(missing)) {}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "fig4", "fig5",
                                                 "fig6", "fig7", "fig8", "table4", "table5"};
  return names;
}

namespace {

struct Aggregate {
  // (algorithm, n, width, length, packets, metric) -> values over seeds
  std::map<std::tuple<std::string, std::size_t, double, double, std::uint64_t, std::string>,
           std::vector<double>>
      values;

  explicit Aggregate(const std::vector<ResultRow>& rows) {
    for (const auto& r : rows) {
      if (r.round || std::isnan(r.value)) continue;
      values[{r.algorithm, r.n, r.width, r.length, r.packets, r.metric}].push_back(r.value);
    }
  }

  const std::vector<double>* find(Algorithm a, const FieldSize& s, std::uint64_t packets,
                                  const std::string& metric) const {
    auto it = values.find({std::string(to_string(a)), s.n, s.width, s.length, packets, metric});
    return it == values.end() || it->second.empty() ? nullptr : &it->second;
  }

  // Lifetime cells are matched on size only.
  const std::vector<double>* find_any_budget(Algorithm a, const FieldSize& s, const std::string& metric,
                                             std::vector<double>& scratch) const {
    scratch.clear();
    for (const auto& [k, v] : values) {
      if (std::get<0>(k) == to_string(a) && std::get<1>(k) == s.n && std::get<2>(k) == s.width &&
          std::get<3>(k) == s.length && std::get<5>(k) == metric) {
        scratch.insert(scratch.end(), v.begin(), v.end());
      }
    }
    return scratch.empty() ? nullptr : &scratch;
  }
};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string cell_name(Algorithm a, const FieldSize& s, std::optional<std::uint64_t> packets) {
  std::string c = std::string(to_string(a)) + " (" + fmt(s.width) + "x" + fmt(s.length) + ", " +
                  std::to_string(s.n) + ")";
  if (packets) c += " packets=" + std::to_string(*packets);
  return c;
}

std::string size_label(const FieldSize& s) {
  return fmt(s.width) + "x" + fmt(s.length) + "_" + std::to_string(s.n);
}

}  // namespace

PlotFile emit_plot_data(const std::vector<ResultRow>& rows, std::string_view figure,
                        const std::vector<Algorithm>& algorithms, const std::vector<FieldSize>& sizes,
                        const std::vector<std::uint64_t>& packets) {
  const std::string base(figure.substr(0, figure.find('-')));
  if (std::find(figure_names().begin(), figure_names().end(), base) == figure_names().end()) {
    throw std::invalid_argument("unknown figure '" + std::string(figure) + "'");
  }
  if (algorithms.empty() || sizes.empty() || packets.empty()) {
    throw std::invalid_argument("figure needs at least one algorithm, size and budget");
  }
  const Aggregate agg(rows);
  const auto max_packets = *std::max_element(packets.begin(), packets.end());
  const auto largest = *std::max_element(sizes.begin(), sizes.end(), [](const auto& a, const auto& b) {
    return a.n < b.n;
  });
  std::vector<std::string> missing;
  std::ostringstream out;

  auto need = [&](Algorithm a, const FieldSize& s, std::uint64_t p, const std::string& metric) -> double {
    if (const auto* v = agg.find(a, s, p, metric)) return mean(*v);
    missing.push_back(cell_name(a, s, p));
    return std::numeric_limits<double>::quiet_NaN();
  };
  auto header_algorithms = [&](const char* x) {
    out << x;
    for (auto a : algorithms) out << '\t' << to_string(a);
    out << '\n';
  };
  auto header_sizes = [&] {
    out << "algorithm";
    for (const auto& s : sizes) out << '\t' << size_label(s);
    out << '\n';
  };

  const bool energy = base == "fig1" || base == "fig2" || base == "fig3";
  const std::string metric = energy ? "final_avg_remaining_energy" : "final_energy_difference";

  if (base == "fig1" || base == "fig4") {
    // x = network size at the largest budget
    header_algorithms("n");
    for (const auto& s : sizes) {
      out << s.n;
      for (auto a : algorithms) out << '\t' << fmt(need(a, s, max_packets, metric));
      out << '\n';
    }
  } else if (base == "fig2" || base == "fig5") {
    // x = packet budget on the largest network
    header_algorithms("packets");
    auto sorted = packets;
    std::sort(sorted.begin(), sorted.end());
    for (auto p : sorted) {
      out << p;
      for (auto a : algorithms) out << '\t' << fmt(need(a, largest, p, metric));
      out << '\n';
    }
  } else if (base == "fig3" || base == "fig6") {
    // average over every size and budget
    out << "algorithm\t" << (energy ? "avg_remaining_energy" : "energy_difference") << '\n';
    for (auto a : algorithms) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& s : sizes) {
        for (auto p : packets) {
          const double v = need(a, s, p, metric);
          if (!std::isnan(v)) {
            sum += v;
            ++count;
          }
        }
      }
      out << to_string(a) << '\t' << fmt(count ? sum / static_cast<double>(count) : std::nan("")) << '\n';
    }
  } else if (base == "fig7") {
    header_sizes();
    std::vector<double> scratch;
    for (auto a : algorithms) {
      out << to_string(a);
      for (const auto& s : sizes) {
        const auto* v = agg.find_any_budget(a, s, "lifetime_rounds", scratch);
        if (!v) missing.push_back(cell_name(a, s, std::nullopt) + " lifetime");
        out << '\t' << fmt(v ? mean(*v) : std::nan(""));
      }
      out << '\n';
    }
  } else {
    const std::string m = base == "fig8" ? "hop_success_ratio" : base == "table4" ? "avg_degree" : "avg_tx_radius";
    header_sizes();
    for (auto a : algorithms) {
      out << to_string(a);
      for (const auto& s : sizes) out << '\t' << fmt(need(a, s, max_packets, m));
      out << '\n';
    }
  }
  if (!missing.empty()) throw CoverageError(std::string(figure), std::move(missing));
  return {base + ".dat", out.str()};
}

std::vector<std::string> write_plot_files(const std::vector<ResultRow>& rows, const ExperimentConfig& cfg,
                                          const fs::path& dir) {
  std::vector<std::string> problems;
  fs::create_directories(dir);
  for (const auto& name : figure_names()) {
    try {
      const auto file = emit_plot_data(rows, name, cfg.algorithms, cfg.sizes, cfg.packets);
      std::ofstream f(dir / file.name, std::ios::binary | std::ios::trunc);
      f << file.content;
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  }
  return problems;
}

}  // namespace daaca
