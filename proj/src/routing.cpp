#include "daaca/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace daaca {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Basic: return "Basic";
    case Variant::ES: return "ES";
    case Variant::MM: return "MM";
    case Variant::ACS: return "ACS";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "Basic") return Variant::Basic;
  if (name == "ES") return Variant::ES;
  if (name == "MM") return Variant::MM;
  if (name == "ACS") return Variant::ACS;
  return std::nullopt;
}

void AlgorithmConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must be in (0,1)");
  if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigError("zeta must be in (0,1)");
  if (!(q0 >= 0.0 && q0 <= 1.0)) throw ConfigError("q0 must be in [0,1]");
  if (!(eta_min > 0.0)) throw ConfigError("eta_min must be > 0");
  if (!(eta_max > eta_min)) throw ConfigError("eta_max must be > eta_min");
  if (!(eta_init > 0.0)) throw ConfigError("eta_init must be > 0");
  if (round_to_update == 0) throw ConfigError("round_to_update must be >= 1");
  if (deposit_scale < 0.0 || std::isnan(deposit_scale))
    throw ConfigError("deposit_scale must be >= 0 (0 selects the derived scale)");
  if (control_bits == 0) throw ConfigError("control_bits must be >= 1");
}

AlgorithmConfig resolve_deposit_scale(AlgorithmConfig cfg, const EnergyModelParams& em,
                                      double range) {
  if (cfg.deposit_scale <= 0.0) {
    cfg.deposit_scale = cfg.rho * cfg.eta_init / tx_cost(em.packet_bits, range, em);
  }
  return cfg;
}

namespace {

double kappa(const AlgorithmConfig& cfg) {
  if (!(cfg.deposit_scale > 0.0)) {
    throw std::logic_error("deposit_scale must be resolved before depositing pheromone");
  }
  return cfg.deposit_scale;
}

double desirability(const RoutingEntry& e, const AlgorithmConfig& cfg) {
  return std::pow(e.tau, cfg.alpha) * std::pow(e.pheromone, cfg.beta);
}

}  // namespace

RoutingEntry* RoutingTable::find(NodeId neighbor) {
  auto it = std::lower_bound(entries.begin(), entries.end(), neighbor,
                             [](const RoutingEntry& e, NodeId id) { return e.neighbor < id; });
  return (it != entries.end() && it->neighbor == neighbor) ? &*it : nullptr;
}

const RoutingEntry* RoutingTable::find(NodeId neighbor) const {
  return const_cast<RoutingTable*>(this)->find(neighbor);
}

bool RoutingTable::insert(RoutingEntry entry) {
  auto it = std::lower_bound(entries.begin(), entries.end(), entry.neighbor,
                             [](const RoutingEntry& e, NodeId id) { return e.neighbor < id; });
  if (it != entries.end() && it->neighbor == entry.neighbor) return false;
  entries.insert(it, entry);
  return true;
}

bool RoutingTable::erase(NodeId neighbor) {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const RoutingEntry& e) { return e.neighbor == neighbor; });
  if (it == entries.end()) return false;
  entries.erase(it);
  return true;
}

RoutingEntry make_entry(const NetworkGraph& graph, NodeId owner, NodeId neighbor,
                        const EnergyModelParams& em, const AlgorithmConfig& cfg) {
  RoutingEntry e;
  e.neighbor = neighbor;
  e.e_dist = tx_cost(em.packet_bits, graph.distance(owner, neighbor), em);
  e.e_estimate = em.e_init;
  e.pheromone = cfg.eta_init;
  energy_distance(graph.node(owner), e, em);
  return e;
}

RoutingTable build_routing_table(const NetworkGraph& graph, NodeId owner,
                                 const EnergyModelParams& em, const AlgorithmConfig& cfg) {
  RoutingTable table;
  table.owner = owner;
  if (owner == graph.sink() || graph.node(owner).removed) return table;
  for (NodeId j : graph.neighbors(owner)) {
    if (graph.node(j).removed || !graph.nearer_to_sink(j, owner)) continue;
    table.entries.push_back(make_entry(graph, owner, j, em, cfg));
  }
  return table;
}

std::vector<RoutingTable> build_routing_tables(const NetworkGraph& graph,
                                               const EnergyModelParams& em,
                                               const AlgorithmConfig& cfg) {
  std::vector<RoutingTable> tables;
  tables.reserve(graph.size());
  for (NodeId i = 0; i < graph.size(); ++i) tables.push_back(build_routing_table(graph, i, em, cfg));
  return tables;
}

bool BestPathRecord::offer(const std::vector<NodeId>& path, double path_cost) {
  if (path.empty()) return false;
  if (!id_list.empty() && !(path_cost < cost)) return false;
  id_list = path;
  cost = path_cost;
  return true;
}

void ConjunctionCounter::bump(NodeId id) {
  if (id >= count.size()) count.resize(id + 1, 0);
  ++count[id];
}

void ConjunctionCounter::reset() { std::fill(count.begin(), count.end(), 0); }

double energy_distance(const NodeState& owner, RoutingEntry& entry, const EnergyModelParams& em) {
  const double e1 = owner.energy / em.e_init;
  const double e2 = entry.e_estimate / em.e_init;
  const double denom = e1 * e2;
  if (!(denom > 0.0)) {
    entry.selectable = false;
    entry.e_dist_prime = std::numeric_limits<double>::infinity();
    entry.tau = 0.0;
    return entry.e_dist_prime;
  }
  entry.selectable = true;
  entry.e_dist_prime = entry.e_dist / denom;
  entry.tau = 1.0 / entry.e_dist_prime;
  return entry.e_dist_prime;
}

void refresh_energy_distances(const NodeState& owner, RoutingTable& table,
                              const EnergyModelParams& em) {
  for (auto& e : table.entries) energy_distance(owner, e, em);
}

void selection_probabilities(RoutingTable& table, const AlgorithmConfig& cfg) {
  double total = 0.0;
  for (auto& e : table.entries) {
    if (e.selectable && e.tau > 0.0 && e.pheromone > 0.0) {
      e.prob = desirability(e, cfg);
      total += e.prob;
    } else {
      e.prob = 0.0;
    }
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    for (auto& e : table.entries) e.prob = 0.0;
    throw DeadEnd(table.owner);
  }
  for (auto& e : table.entries) e.prob /= total;
}

NodeId select_next_hop(const RoutingTable& table, const AlgorithmConfig& cfg, RngStream& rng) {
  if (cfg.variant == Variant::ACS) {
    const double q = rng.uniform();
    if (q <= cfg.q0) {
      const RoutingEntry* best = nullptr;
      double best_w = 0.0;
      for (const auto& e : table.entries) {
        if (e.prob <= 0.0) continue;
        const double w = desirability(e, cfg);
        if (best == nullptr || w > best_w) {
          best = &e;
          best_w = w;
        }
      }
      if (best == nullptr) throw DeadEnd(table.owner);
      return best->neighbor;
    }
  }
  const double u = rng.uniform();
  double acc = 0.0;
  const RoutingEntry* last = nullptr;
  for (const auto& e : table.entries) {
    if (e.prob <= 0.0) continue;
    acc += e.prob;
    last = &e;
    if (u < acc) return e.neighbor;
  }
  if (last == nullptr) throw DeadEnd(table.owner);
  return last->neighbor;
}

void update_energy_estimate(RoutingEntry& entry, const EnergyModelParams& em) {
  if (entry.times > 0) {
    const double t = static_cast<double>(entry.times);
    const double est = em.e_init - (em.e_init - entry.e_estimate) / t * (t + 1.0);
    entry.e_estimate = std::clamp(est, 0.0, em.e_init);
  }
  ++entry.times;
}

void evaporate(RoutingTable& table, const AlgorithmConfig& cfg) {
  for (auto& e : table.entries) e.pheromone *= (1.0 - cfg.rho);
}

NodeId deposit_basic(RoutingTable& table, const AlgorithmConfig& cfg) {
  RoutingEntry* best = nullptr;
  for (auto& e : table.entries) {
    if (best == nullptr || e.e_estimate > best->e_estimate) best = &e;
  }
  if (best == nullptr) return kNoNode;
  best->pheromone += kappa(cfg) * best->e_dist;
  return best->neighbor;
}

std::size_t deposit_conjunction(NodeId node, const ConjunctionCounter& counters,
                                const NetworkGraph& graph, std::vector<RoutingTable>& tables,
                                const AlgorithmConfig& cfg) {
  if (node >= counters.count.size() || counters.count[node] < 2) return 0;
  std::size_t touched = 0;
  for (NodeId t : graph.neighbors(node)) {
    if (RoutingEntry* e = tables.at(t).find(node)) {
      e->pheromone += kappa(cfg) * e->e_dist;
      ++touched;
    }
  }
  return touched;
}

std::size_t deposit_elitist(std::vector<RoutingTable>& tables, const BestPathRecord& best,
                            const AlgorithmConfig& cfg) {
  if (best.id_list.size() < 2) return 0;
  const double amount = kappa(cfg) * best.cost;
  std::size_t touched = 0;
  for (std::size_t h = 0; h + 1 < best.id_list.size(); ++h) {
    if (RoutingEntry* e = tables.at(best.id_list[h]).find(best.id_list[h + 1])) {
      e->pheromone += amount;
      ++touched;
    }
  }
  return touched;
}

void clamp_bounds(RoutingTable& table, const AlgorithmConfig& cfg) {
  for (auto& e : table.entries) e.pheromone = std::clamp(e.pheromone, cfg.eta_min, cfg.eta_max);
}

std::size_t acs_global_update(std::vector<RoutingTable>& tables, const BestPathRecord& best,
                              const AlgorithmConfig& cfg) {
  if (best.id_list.size() < 2) return 0;
  const double target = kappa(cfg) * best.cost;
  std::size_t touched = 0;
  for (std::size_t h = 0; h + 1 < best.id_list.size(); ++h) {
    if (RoutingEntry* e = tables.at(best.id_list[h]).find(best.id_list[h + 1])) {
      e->pheromone = (1.0 - cfg.rho) * e->pheromone + cfg.rho * target;
      ++touched;
    }
  }
  return touched;
}

void acs_local_update(RoutingTable& table, NodeId used, const AlgorithmConfig& cfg) {
  RoutingEntry* row = table.find(used);
  if (row == nullptr) return;
  double lowest = row->pheromone;
  for (const auto& e : table.entries) lowest = std::min(lowest, e.pheromone);
  row->pheromone = (1.0 - cfg.zeta) * row->pheromone + cfg.zeta * lowest;
}

SyncReport broadcast_energy_sync(NetworkGraph& graph, std::vector<RoutingTable>& tables,
                                 const AlgorithmConfig& cfg, EnergyLedger& ledger) {
  SyncReport report;
  const auto& em = ledger.params();
  const double tx = tx_cost(cfg.control_bits, graph.range(), em);
  const double rx = rx_cost(cfg.control_bits, em);

  // Radio costs first, then every holder learns the post-broadcast residual.
  std::vector<char> announced(graph.size(), 0);
  for (NodeId i = 0; i < graph.size(); ++i) {
    if (!graph.node(i).alive) continue;
    announced[i] = 1;
    report.energy += ledger.charge(graph, i, tx, ChargeKind::Control);
    ++report.broadcasts;
    for (NodeId j : graph.neighbors(i)) {
      if (!graph.node(j).alive) continue;
      report.energy += ledger.charge(graph, j, rx, ChargeKind::Control);
      ++report.receptions;
    }
  }

  for (auto& table : tables) {
    auto& rows = table.entries;
    const auto before = rows.size();
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [&](const RoutingEntry& e) {
                                return !announced[e.neighbor] || !graph.node(e.neighbor).alive;
                              }),
               rows.end());
    report.rows_dropped += before - rows.size();
    for (auto& e : rows) {
      e.e_estimate = graph.node(e.neighbor).energy;
      if (cfg.reset_times_on_sync) e.times = 0;
    }
  }
  return report;
}

}  // namespace daaca
