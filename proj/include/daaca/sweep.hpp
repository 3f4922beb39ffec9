#pragma once

// Sweep harness: runs the Cartesian product of a config, writes results.csv
// in a fixed order (resuming completed cells) and turns rows into per-figure
// data files.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "daaca/config.hpp"
#include "daaca/metrics.hpp"

namespace daaca {

struct ResultRow {
  std::string algorithm;
  std::size_t n = 0;
  double width = 0.0;
  double length = 0.0;
  std::uint64_t packets = 0;
  std::uint64_t seed = 0;
  std::string metric;
  std::optional<std::uint64_t> round;
  double value = 0.0;

  bool operator==(const ResultRow& o) const;
};

inline constexpr std::string_view kCsvHeader = "algorithm,n,width,length,packets,seed,metric,round,value";
inline constexpr std::string_view kCompletedMetric = "completed";
inline constexpr std::string_view kLifetimeCompletedMetric = "lifetime_completed";

std::string format_row(const ResultRow& row);
// Header line plus one line per row, LF-terminated.
std::string emit_csv(const std::vector<ResultRow>& rows);
// Inverse of emit_csv. Throws std::runtime_error naming the bad line.
std::vector<ResultRow> parse_csv(std::string_view text);

struct SweepCell {
  Algorithm algorithm;
  FieldSize size;
  std::uint64_t packets;
  std::uint64_t seed;
  bool lifetime = false;
};

// Cells in output order: algorithm, size, budget, seed, with the lifetime
// cells of each (algorithm, size) after its budget cells.
std::vector<SweepCell> sweep_cells(const ExperimentConfig& cfg);

// Rows for a finished run. Time series are sampled every `stride` rounds plus the last round.
std::vector<ResultRow> report_rows(const MetricsReport& r, std::uint64_t stride);
std::vector<ResultRow> lifetime_rows(const MetricsReport& r, std::uint64_t packets);

// Runs one cell; failures become a single "error" row.
std::vector<ResultRow> run_cell(const ExperimentConfig& cfg, const SweepCell& cell,
                                std::string* error = nullptr);

struct SweepSummary {
  std::size_t cells = 0;
  std::size_t computed = 0;
  std::size_t reused = 0;
  std::size_t failed = 0;
  std::vector<std::string> errors;
  std::vector<ResultRow> rows;
};

// Runs every cell not already completed in cfg.out/results.csv and rewrites
// that file in cell order. Progress goes to `progress` when given.
SweepSummary run_sweep(const ExperimentConfig& cfg, std::ostream* progress = nullptr);

class CoverageError : public std::runtime_error {
 public:
  CoverageError(const std::string& figure, std::vector<std::string> missing);
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

struct PlotFile {
  std::string name;  // e.g. "fig7.dat"
  std::string content;
};

// fig1..fig8 and table4, table5 (also accepted with a suffix, e.g. "fig7-lifetime").
const std::vector<std::string>& figure_names();

// Builds one figure from rows, seed-averaged. `algorithms` and `sizes` are the
// cells the figure must cover. Throws CoverageError listing absent cells.
PlotFile emit_plot_data(const std::vector<ResultRow>& rows, std::string_view figure,
                        const std::vector<Algorithm>& algorithms,
                        const std::vector<FieldSize>& sizes,
                        const std::vector<std::uint64_t>& packets);

// Writes every figure file into `dir`. Returns one message per figure that
// could not be produced.
std::vector<std::string> write_plot_files(const std::vector<ResultRow>& rows,
                                          const ExperimentConfig& cfg,
                                          const std::filesystem::path& dir);

}  // namespace daaca
