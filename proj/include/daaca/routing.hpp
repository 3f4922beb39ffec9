#pragma once

// The DAACA family: per-node routing tables, next-hop probabilities and the
// four pheromone adjustment strategies (Basic, ES, MM, ACS).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "daaca/core.hpp"

namespace daaca {

enum class Variant { Basic, ES, MM, ACS };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

enum class BestPathScope { Window, AllTime };

struct AlgorithmConfig {
  Variant variant = Variant::Basic;
  double alpha = 2.0;
  double beta = 2.0;
  double rho = 0.2;
  double zeta = 0.9;
  double q0 = 0.5;
  double eta_min = 0.5;
  double eta_max = 0.9;
  double eta_init = 0.8;
  std::uint32_t round_to_update = 100;
  // Multiplier applied to joule-valued deposits. <= 0 means "derive it":
  // rho * eta_init / tx_cost(k, R), so a full-range deposit equals rho * eta_init.
  double deposit_scale = 0.0;
  std::uint32_t control_bits = 128;
  bool reset_times_on_sync = true;
  BestPathScope best_scope = BestPathScope::Window;
  bool acs_clamp = false;

  void validate() const;
};

// Returns a copy with `deposit_scale` filled in when it was left to auto.
AlgorithmConfig resolve_deposit_scale(AlgorithmConfig cfg, const EnergyModelParams& em,
                                      double range);

// Thrown when a node has no selectable sink-ward neighbor.
class DeadEnd : public std::runtime_error {
 public:
  explicit DeadEnd(NodeId node)
      : std::runtime_error("no selectable next hop at node " + std::to_string(node)), node_(node) {}
  NodeId node() const { return node_; }

 private:
  NodeId node_;
};

struct RoutingEntry {
  NodeId neighbor = kNoNode;
  double e_dist = 0.0;        // tx cost of one packet over this link
  double e_dist_prime = 0.0;  // e_dist inflated by both energy fractions
  double e_estimate = 0.0;    // owner's belief about the neighbor's residual energy
  double pheromone = 0.0;
  double tau = 0.0;           // 1 / e_dist_prime
  double prob = 0.0;
  std::uint32_t times = 0;    // transmissions to this neighbor since the last sync
  bool selectable = true;

  friend bool operator==(const RoutingEntry&, const RoutingEntry&) = default;
};

// Rows for sink-ward neighbors only, sorted by neighbor id.
struct RoutingTable {
  NodeId owner = kNoNode;
  std::vector<RoutingEntry> entries;

  RoutingEntry* find(NodeId neighbor);
  const RoutingEntry* find(NodeId neighbor) const;
  bool empty() const { return entries.empty(); }
  // Inserts keeping the id order; returns false if the row already existed.
  bool insert(RoutingEntry entry);
  bool erase(NodeId neighbor);

  friend bool operator==(const RoutingTable&, const RoutingTable&) = default;
};

RoutingEntry make_entry(const NetworkGraph& graph, NodeId owner, NodeId neighbor,
                        const EnergyModelParams& em, const AlgorithmConfig& cfg);
RoutingTable build_routing_table(const NetworkGraph& graph, NodeId owner,
                                 const EnergyModelParams& em, const AlgorithmConfig& cfg);
std::vector<RoutingTable> build_routing_tables(const NetworkGraph& graph,
                                               const EnergyModelParams& em,
                                               const AlgorithmConfig& cfg);

// Minimum-cost source-to-sink path seen at the sink.
struct BestPathRecord {
  std::vector<NodeId> id_list;
  double cost = 0.0;

  bool empty() const { return id_list.empty(); }
  // Keeps the cheaper of the current record and the offered path.
  bool offer(const std::vector<NodeId>& path, double path_cost);
  void clear() { id_list.clear(); cost = 0.0; }
};

struct ConjunctionCounter {
  std::vector<std::uint32_t> count;

  explicit ConjunctionCounter(std::size_t n = 0) : count(n, 0) {}
  void bump(NodeId id);
  void reset();
};

// E'_distance(i,j) = E_distance(i,j) / (e1(i) * e2(i,j)), e1 = E_cur(i)/E_init,
// e2 = E_estimate(i,j)/E_init. Stores e_dist_prime and tau = 1/E' on the entry.
// A zero denominator makes the entry non-selectable and returns +inf.
double energy_distance(const NodeState& owner, RoutingEntry& entry, const EnergyModelParams& em);

// Refreshes energy distances for every row of the owner's table.
void refresh_energy_distances(const NodeState& owner, RoutingTable& table,
                              const EnergyModelParams& em);

// p(i,j) = tau^alpha * eta^beta / sum over selectable rows. Throws DeadEnd when
// no row is selectable.
void selection_probabilities(RoutingTable& table, const AlgorithmConfig& cfg);

// Roulette wheel for Basic/ES/MM; ACS takes the argmax of tau^alpha * eta^beta
// with probability q0 (ties to the lowest id) and falls back to the wheel.
NodeId select_next_hop(const RoutingTable& table, const AlgorithmConfig& cfg, RngStream& rng);

// E_est <- E_init - (E_init - E_est) / Times * (Times + 1), skipped while
// Times = 0, clamped at zero; Times is incremented afterwards.
void update_energy_estimate(RoutingEntry& entry, const EnergyModelParams& em);

// eta <- (1 - rho) * eta on every row.
void evaporate(RoutingTable& table, const AlgorithmConfig& cfg);

// Deposits kappa * E_distance on the row with the largest energy estimate.
// Returns the chosen neighbor (kNoNode for an empty table).
NodeId deposit_basic(RoutingTable& table, const AlgorithmConfig& cfg);

// Conjunction reward for `node`: when conj(node) >= 2 every table holding a
// row for `node` deposits kappa * E_distance on it. Returns the rows touched.
std::size_t deposit_conjunction(NodeId node, const ConjunctionCounter& counters,
                                const NetworkGraph& graph, std::vector<RoutingTable>& tables,
                                const AlgorithmConfig& cfg);

// Adds kappa * M_PCost to each consecutive link of the best path.
std::size_t deposit_elitist(std::vector<RoutingTable>& tables, const BestPathRecord& best,
                            const AlgorithmConfig& cfg);

// Clamps every pheromone into [eta_min, eta_max].
void clamp_bounds(RoutingTable& table, const AlgorithmConfig& cfg);

// eta <- (1 - rho) * eta + rho * kappa * M_PCost along the best path.
std::size_t acs_global_update(std::vector<RoutingTable>& tables, const BestPathRecord& best,
                              const AlgorithmConfig& cfg);

// eta(used) <- (1 - zeta) * eta(used) + zeta * min_j eta(j).
void acs_local_update(RoutingTable& table, NodeId used, const AlgorithmConfig& cfg);

struct SyncReport {
  std::size_t broadcasts = 0;
  std::size_t receptions = 0;
  std::size_t rows_dropped = 0;
  double energy = 0.0;
};

// Every alive node announces its residual energy at range R. Holders of a row
// for it copy the value (and reset Times when configured). Rows for dead or
// removed neighbors are dropped. Sender pays tx(k_ctrl, R), each alive
// neighbor rx(k_ctrl).
SyncReport broadcast_energy_sync(NetworkGraph& graph, std::vector<RoutingTable>& tables,
                                 const AlgorithmConfig& cfg, EnergyLedger& ledger);

}  // namespace daaca
