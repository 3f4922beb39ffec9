#include "daaca/experiment.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace daaca {

namespace {

constexpr double kConservationTolerance = 1e-12;

void record_energy(const NetworkGraph& g, MetricsReport& r) {
  r.avg_remaining_energy.push_back(avg_remaining_energy(g, false));
  r.avg_remaining_energy_with_sink.push_back(avg_remaining_energy(g, true));
  r.energy_difference.push_back(energy_difference(g, false));
  r.energy_difference_with_sink.push_back(energy_difference(g, true));
}

void measure_structure(const Simulation& sim, MetricsReport& r) {
  std::vector<Link> structure, used;
  try {
    used = sim.used_links();
    const auto a = sim.config().algorithm;
    structure = (a == Algorithm::LMST || a == Algorithm::L_PEDAP) ? sim.structure_links() : used;
  } catch (const SimulationEnded&) {
    return;
  }
  std::size_t present = 0;
  for (const auto& s : sim.graph().nodes()) present += s.removed ? 0 : 1;
  r.avg_degree = average_degree(structure, present);
  r.avg_tx_radius = average_tx_radius(sim.graph(), used);
}

}  // namespace

double conservation_error(const Simulation& sim) {
  const double consumed = sim.graph().consumed_energy_total();
  const double charged = sim.ledger().total();
  if (consumed == 0.0 && charged == 0.0) return 0.0;
  return std::abs(consumed - charged) / std::max(std::abs(consumed), std::abs(charged));
}

MetricsReport run_simulation(const SimulationConfig& cfg, std::uint64_t seed,
                             const RoundObserver& observer) {
  Simulation sim(cfg, seed);
  MetricsReport r;
  r.algorithm = std::string(to_string(cfg.algorithm));
  r.n = cfg.n;
  r.width = cfg.width;
  r.length = cfg.length;
  r.packets = cfg.packet_budget;
  r.seed = seed;
  record_energy(sim.graph(), r);

  const auto budget = cfg.rounds();
  const auto window = sim.daaca_config().round_to_update;
  bool measured = false;
  for (std::uint64_t t = 1; t <= budget; ++t) {
    RoundOutcome out;
    try {
      out = sim.step();
    } catch (const SimulationEnded&) {
      break;
    }
    r.rounds_run = out.round;
    if (!is_sink_forest(sim.graph(), out.forwarding_edges)) {
      throw std::logic_error("forwarding links of round " + std::to_string(out.round) +
                             " are not a sink-ward forest");
    }
    r.hop_attempts += out.hop_attempts;
    r.hop_successes += out.hop_successes;
    r.delivered += out.delivered;
    r.dropped += out.dropped;
    record_energy(sim.graph(), r);
    if (observer) observer(sim, out);

    if (!out.deaths.empty() && !r.lifetime_rounds) r.lifetime_rounds = out.round;
    if (!r.sink_death_round && !sim.graph().node(sim.graph().sink()).alive) {
      r.sink_death_round = out.round;
    }
    if (!measured && out.round == window) {
      measure_structure(sim, r);
      measured = true;
    }
    if (cfg.lifetime_mode && r.lifetime_rounds) break;
  }
  if (!measured) measure_structure(sim, r);
  if (!r.lifetime_rounds) {
    r.lifetime_rounds = budget;
    r.lifetime_censored = true;
  }
  r.hop_success_ratio = hop_success_ratio(r.hop_successes, r.hop_attempts);
  r.energy_tx = sim.ledger().tx();
  r.energy_rx = sim.ledger().rx();
  r.energy_control = sim.ledger().control();
  if (conservation_error(sim) > kConservationTolerance) {
    throw std::logic_error("energy ledger does not match consumed energy");
  }
  return r;
}

std::vector<MetricsReport> run_experiment(const SimulationConfig& cfg,
                                          std::span<const std::uint64_t> seeds) {
  cfg.validate();
  std::vector<MetricsReport> out;
  out.reserve(seeds.size());
  for (auto s : seeds) out.push_back(run_simulation(cfg, s));
  return out;
}

}  // namespace daaca
