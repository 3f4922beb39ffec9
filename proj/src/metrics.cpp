#include "daaca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace daaca {

namespace {

template <typename F>
void for_each_counted(const NetworkGraph& graph, bool include_sink, F&& f) {
  for (const auto& s : graph.nodes()) {
    if (s.removed) continue;
    if (s.is_sink && !include_sink) continue;
    f(s);
  }
}

}  // namespace

double avg_remaining_energy(const NetworkGraph& graph, bool include_sink) {
  double sum = 0.0;
  std::size_t count = 0;
  for_each_counted(graph, include_sink, [&](const NodeState& s) {
    sum += s.energy;
    ++count;
  });
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double energy_difference(const NetworkGraph& graph, bool include_sink) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for_each_counted(graph, include_sink, [&](const NodeState& s) {
    lo = std::min(lo, s.energy);
    hi = std::max(hi, s.energy);
  });
  return hi < lo ? 0.0 : hi - lo;
}

double average_degree(std::size_t link_count, std::size_t n) {
  return n == 0 ? 0.0 : static_cast<double>(link_count) / static_cast<double>(n);
}

double average_degree(std::span<const Link> links, std::size_t n) {
  return average_degree(links.size(), n);
}

std::optional<double> average_tx_radius(const NetworkGraph& graph, std::span<const Link> links) {
  std::set<Edge> edges;
  for (const auto& [a, b] : links) edges.insert(make_edge(a, b));
  if (edges.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& [a, b] : edges) sum += graph.distance(a, b);
  return sum / static_cast<double>(edges.size());
}

std::optional<double> hop_success_ratio(std::uint64_t successes, std::uint64_t attempts) {
  if (attempts == 0) return std::nullopt;
  return static_cast<double>(successes) / static_cast<double>(attempts);
}

std::optional<double> hop_success_ratio(std::span<const RoundOutcome> outcomes) {
  std::uint64_t s = 0, a = 0;
  for (const auto& o : outcomes) {
    s += o.hop_successes;
    a += o.hop_attempts;
  }
  return hop_success_ratio(s, a);
}

LifetimeResult lifetime(std::span<const RoundOutcome> outcomes, std::uint64_t budget) {
  for (const auto& o : outcomes) {
    if (!o.deaths.empty()) return {o.round, false};
  }
  return {budget, true};
}

SignTest sign_test(std::span<const double> a, std::span<const double> b) {
  SignTest t;
  const auto n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] > b[i]) {
      ++t.wins;
    } else if (a[i] < b[i]) {
      ++t.losses;
    } else {
      ++t.ties;
    }
  }
  const auto m = t.wins + t.losses;
  if (m == 0) return t;
  // P(X >= wins) for X ~ Binomial(m, 1/2), summed in log space.
  double p = 0.0;
  for (std::size_t k = t.wins; k <= m; ++k) {
    const double log_c = std::lgamma(static_cast<double>(m) + 1) -
                         std::lgamma(static_cast<double>(k) + 1) -
                         std::lgamma(static_cast<double>(m - k) + 1);
    p += std::exp(log_c - static_cast<double>(m) * std::log(2.0));
  }
  t.p_value = std::min(1.0, p);
  return t;
}

}  // namespace daaca
