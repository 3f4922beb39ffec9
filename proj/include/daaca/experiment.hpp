#pragma once

// Whole-run drivers: one (config, seed) run to a MetricsReport, and a seed list.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "daaca/metrics.hpp"
#include "daaca/simulator.hpp"

namespace daaca {

// Called after every step with the simulation and the round's outcome.
using RoundObserver = std::function<void(const Simulation&, const RoundOutcome&)>;

// |consumed - charged| / consumed for the whole run so far (0 for an untouched network).
double conservation_error(const Simulation& sim);

// Runs until the packet budget is spent, the sink or every source dies, or
// (lifetime mode) the first node dies. Degree and radius are measured from
// the structure after the first update window, or at the end of shorter runs.
// Throws std::logic_error if a round's forwarding links are not a sink-ward
// forest or the energy ledger drifts.
MetricsReport run_simulation(const SimulationConfig& cfg, std::uint64_t seed,
                             const RoundObserver& observer = {});

std::vector<MetricsReport> run_experiment(const SimulationConfig& cfg,
                                          std::span<const std::uint64_t> seeds);

}  // namespace daaca
