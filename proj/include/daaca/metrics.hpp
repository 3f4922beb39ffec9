#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "daaca/baselines.hpp"
#include "daaca/core.hpp"
#include "daaca/simulator.hpp"

namespace daaca {

struct MetricsReport {
  std::string algorithm;
  std::size_t n = 0;
  double width = 0.0;
  double length = 0.0;
  std::uint64_t packets = 0;
  std::uint64_t seed = 0;

  std::uint64_t rounds_run = 0;
  // Index t holds the value after round t; index 0 is the fresh network.
  std::vector<double> avg_remaining_energy;
  std::vector<double> avg_remaining_energy_with_sink;
  std::vector<double> energy_difference;
  std::vector<double> energy_difference_with_sink;

  std::optional<std::uint64_t> lifetime_rounds;   // first death, sink included
  bool lifetime_censored = false;
  std::optional<std::uint64_t> sink_death_round;
  std::uint64_t hop_attempts = 0;
  std::uint64_t hop_successes = 0;
  std::optional<double> hop_success_ratio;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::optional<double> avg_degree;
  std::optional<double> avg_tx_radius;
  double energy_tx = 0.0;
  double energy_rx = 0.0;
  double energy_control = 0.0;

  bool operator==(const MetricsReport&) const = default;
};

double avg_remaining_energy(const NetworkGraph& graph, bool include_sink = false);
double energy_difference(const NetworkGraph& graph, bool include_sink = false);

// Directed links per node; an undirected structure is passed with both directions.
double average_degree(std::size_t link_count, std::size_t n);
double average_degree(std::span<const Link> links, std::size_t n);

// Mean Euclidean length over the distinct undirected edges behind `links`.
std::optional<double> average_tx_radius(const NetworkGraph& graph, std::span<const Link> links);

std::optional<double> hop_success_ratio(std::span<const RoundOutcome> outcomes);
std::optional<double> hop_success_ratio(std::uint64_t successes, std::uint64_t attempts);

struct LifetimeResult {
  std::uint64_t rounds = 0;
  bool censored = false;
};

// Round of the first death; censored at `budget` if none.
LifetimeResult lifetime(std::span<const RoundOutcome> outcomes, std::uint64_t budget);

struct SignTest {
  std::size_t wins = 0;
  std::size_t losses = 0;
  std::size_t ties = 0;
  double p_value = 1.0;
};

// One-sided paired sign test of "a > b"; ties are dropped.
SignTest sign_test(std::span<const double> a, std::span<const double> b);

}  // namespace daaca
