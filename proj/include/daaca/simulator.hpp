#pragma once

// Round engine: packet generation at the sources, hop-by-hop forwarding with
// aggregation, energy accounting, periodic maintenance and the fault and
// join scenarios.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "daaca/baselines.hpp"
#include "daaca/core.hpp"
#include "daaca/routing.hpp"

namespace daaca {

enum class Algorithm { LMST, PEDAP, PEDAP_PA, L_PEDAP, ACA, Basic, ES, MM, ACS };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();
bool is_daaca(Algorithm a);
bool is_tree_baseline(Algorithm a);
Variant variant_of(Algorithm a);

class SimulationEnded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulationConfig {
  Algorithm algorithm = Algorithm::Basic;
  std::size_t n = 200;
  double width = 40.0;
  double length = 50.0;
  double range = 10.0;
  SinkPlacement sink = SinkPlacement::Center;
  EnergyModelParams energy;
  AlgorithmConfig daaca;
  AcaParams aca;
  std::uint32_t sources = 10;
  std::uint64_t packet_budget = 1000;
  // Stop at the first node death instead of spending the whole budget.
  bool lifetime_mode = false;
  LPedapStructure l_pedap_structure = LPedapStructure::Lmst;
  // PEDAP topology flood carries this many bits per alive node.
  std::uint32_t topology_bits_per_node = 16;

  void validate() const;
  std::uint64_t rounds() const { return packet_budget / std::max<std::uint32_t>(sources, 1); }
  DeploymentSpec deployment() const;
};

struct HopRecord {
  NodeId from;
  NodeId to;
  double distance;
};

// Data packet. id_list and energy_consumption form the header the sink uses
// to track the cheapest path.
struct Packet {
  std::uint32_t size = 0;
  NodeId origin = kNoNode;
  std::vector<NodeId> id_list;
  double energy_consumption = 0.0;
  std::vector<HopRecord> hop_trace;
  bool delivered = false;
};

struct RoundOutcome {
  std::uint64_t round = 0;
  std::uint32_t delivered = 0;
  std::uint32_t dropped = 0;
  std::uint64_t hop_attempts = 0;
  std::uint64_t hop_successes = 0;
  double energy_spent = 0.0;
  std::vector<NodeId> deaths;
  std::vector<Link> forwarding_edges;  // links that carried a packet this round
  std::vector<Packet> packets;
};

struct TopologyChangeReport {
  NodeId node = kNoNode;
  std::vector<NodeId> touched;  // nodes whose neighbor set and routing state changed
};

class Simulation {
 public:
  Simulation(const SimulationConfig& cfg, std::uint64_t seed);
  // Hand-built network; `sources` are used as given.
  Simulation(const SimulationConfig& cfg, NetworkGraph graph, std::vector<NodeId> sources,
             std::uint64_t seed);

  // One round of routing and accounting. Throws SimulationEnded when the
  // sink is dead or no source is alive.
  RoundOutcome run_round();
  // Boundary work (round a multiple of round_to_update). Returns false off-boundary.
  bool maintenance();
  // run_round followed by maintenance.
  RoundOutcome step();

  TopologyChangeReport scenario_remove_node(NodeId victim);
  TopologyChangeReport scenario_add_node(const Position& pos);

  // Links that would carry traffic now: the tree for tree baselines, and for
  // ACA and DAACA the forwarding links of a probe round (on a copy) in which
  // every alive node sends.
  std::vector<Link> used_links() const;
  // Topology links: the sparse structure (both directions) for LMST and
  // L-PEDAP, used_links() otherwise.
  std::vector<Link> structure_links() const;

  const SimulationConfig& config() const { return cfg_; }
  const AlgorithmConfig& daaca_config() const { return algo_; }
  const NetworkGraph& graph() const { return graph_; }
  NetworkGraph& graph() { return graph_; }
  const std::vector<RoutingTable>& tables() const { return tables_; }
  std::vector<RoutingTable>& tables() { return tables_; }
  const std::vector<NodeId>& sources() const { return sources_; }
  void set_sources(std::vector<NodeId> sources);
  const BestPathRecord& best() const { return best_; }
  const ConjunctionCounter& conj() const { return conj_; }
  const EnergyLedger& ledger() const { return ledger_; }
  const AggregationTree& tree() const { return tree_; }
  const std::vector<Edge>& sparse_structure() const { return sparse_; }
  const std::optional<AcaState>& aca() const { return aca_; }
  std::uint64_t round() const { return round_; }

 private:
  void init();
  std::optional<NodeId> choose(NodeId node, const std::vector<NodeId>& pinned);
  void rebuild_topology(bool charge);
  void charge_broadcast(NodeId node, std::uint32_t bits);
  void hello_broadcast();
  void daaca_maintenance();

  SimulationConfig cfg_;
  AlgorithmConfig algo_;
  RngStream rng_;
  NetworkGraph graph_;
  EnergyLedger ledger_;
  std::vector<NodeId> sources_;
  std::vector<RoutingTable> tables_;
  BestPathRecord best_;
  ConjunctionCounter conj_;
  std::optional<AcaState> aca_;
  AggregationTree tree_;
  std::vector<Edge> sparse_;
  std::uint64_t round_ = 0;
  bool hops_stale_ = false;
};

// Draws `count` distinct non-sink, non-removed nodes.
std::vector<NodeId> pick_sources(const NetworkGraph& graph, std::uint32_t count, RngStream& rng);

// Checks that links form a forest oriented toward the sink (out-degree <= 1,
// no cycles).
bool is_sink_forest(const NetworkGraph& graph, const std::vector<Link>& links);

}  // namespace daaca
