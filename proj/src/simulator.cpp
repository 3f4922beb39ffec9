#include "daaca/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace daaca {

namespace {

constexpr std::array<Algorithm, 9> kAlgorithms = {
    Algorithm::LMST, Algorithm::PEDAP, Algorithm::PEDAP_PA, Algorithm::L_PEDAP, Algorithm::ACA,
    Algorithm::Basic, Algorithm::ES,    Algorithm::MM,       Algorithm::ACS};

enum class TxState : char { None, Ok, Failed };

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::LMST: return "LMST";
    case Algorithm::PEDAP: return "PEDAP";
    case Algorithm::PEDAP_PA: return "PEDAP-PA";
    case Algorithm::L_PEDAP: return "L-PEDAP";
    case Algorithm::ACA: return "ACA";
    case Algorithm::Basic: return "Basic";
    case Algorithm::ES: return "ES";
    case Algorithm::MM: return "MM";
    case Algorithm::ACS: return "ACS";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (auto a : kAlgorithms) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all(kAlgorithms.begin(), kAlgorithms.end());
  return all;
}

bool is_daaca(Algorithm a) {
  return a == Algorithm::Basic || a == Algorithm::ES || a == Algorithm::MM || a == Algorithm::ACS;
}

bool is_tree_baseline(Algorithm a) {
  return a == Algorithm::LMST || a == Algorithm::PEDAP || a == Algorithm::PEDAP_PA ||
         a == Algorithm::L_PEDAP;
}

Variant variant_of(Algorithm a) {
  switch (a) {
    case Algorithm::ES: return Variant::ES;
    case Algorithm::MM: return Variant::MM;
    case Algorithm::ACS: return Variant::ACS;
    default: return Variant::Basic;
  }
}

void SimulationConfig::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2");
  if (!(width > 0.0) || !(length > 0.0)) throw ConfigError("field dimensions must be > 0");
  if (!(range > 0.0)) throw ConfigError("range must be > 0");
  if (sources == 0) throw ConfigError("sources must be >= 1");
  if (sources >= n) throw ConfigError("sources must be < n (the sink never sources)");
  if (packet_budget < sources) throw ConfigError("packets must be >= sources");
  if (topology_bits_per_node == 0) throw ConfigError("topology_bits_per_node must be >= 1");
  energy.validate();
  daaca.validate();
  aca.validate();
}

DeploymentSpec SimulationConfig::deployment() const {
  DeploymentSpec d;
  d.n = n;
  d.width = width;
  d.length = length;
  d.range = range;
  d.e_init = energy.e_init;
  d.sink = sink;
  return d;
}

std::vector<NodeId> pick_sources(const NetworkGraph& graph, std::uint32_t count, RngStream& rng) {
  std::vector<NodeId> pool;
  for (const auto& s : graph.nodes()) {
    if (!s.is_sink && !s.removed) pool.push_back(s.id);
  }
  if (count > pool.size()) throw ConfigError("more sources requested than eligible nodes");
  // Partial Fisher-Yates.
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

bool is_sink_forest(const NetworkGraph& graph, const std::vector<Link>& links) {
  std::vector<NodeId> next(graph.size(), kNoNode);
  for (const auto& [from, to] : links) {
    if (from == graph.sink()) return false;
    if (next.at(from) != kNoNode && next[from] != to) return false;
    next[from] = to;
  }
  // 0 = unvisited, 1 = on the current chain, 2 = known to terminate.
  std::vector<char> mark(graph.size(), 0);
  for (NodeId start = 0; start < graph.size(); ++start) {
    std::vector<NodeId> chain;
    NodeId cur = start;
    while (cur != kNoNode && mark[cur] == 0) {
      mark[cur] = 1;
      chain.push_back(cur);
      cur = next[cur];
    }
    if (cur != kNoNode && mark[cur] == 1) return false;
    for (NodeId c : chain) mark[c] = 2;
  }
  return true;
}

Simulation::Simulation(const SimulationConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      rng_(seed),
      graph_((cfg.validate(), deploy_random(cfg.deployment(), rng_))),
      ledger_(cfg.energy) {
  sources_ = pick_sources(graph_, cfg_.sources, rng_);
  init();
}

Simulation::Simulation(const SimulationConfig& cfg, NetworkGraph graph,
                       std::vector<NodeId> sources, std::uint64_t seed)
    : cfg_(cfg), rng_(seed), graph_(std::move(graph)), ledger_(cfg.energy) {
  cfg_.n = graph_.size();
  cfg_.range = graph_.range();
  cfg_.energy.validate();
  cfg_.daaca.validate();
  cfg_.aca.validate();
  sources_ = std::move(sources);
  init();
}

void Simulation::init() {
  algo_ = cfg_.daaca;
  algo_.variant = variant_of(cfg_.algorithm);
  algo_ = resolve_deposit_scale(algo_, cfg_.energy, graph_.range());
  conj_ = ConjunctionCounter(graph_.size());
  set_sources(sources_);
  if (is_daaca(cfg_.algorithm)) {
    hello_broadcast();
    tables_ = build_routing_tables(graph_, cfg_.energy, algo_);
  } else if (cfg_.algorithm == Algorithm::ACA) {
    AcaParams p = cfg_.aca;
    if (p.idle_threshold == 0) p.idle_threshold = algo_.round_to_update;
    // Hop counts are learnt from a flood of small beacons.
    hello_broadcast();
    aca_.emplace(graph_, p);
  } else {
    rebuild_topology(true);
  }
}

void Simulation::set_sources(std::vector<NodeId> sources) {
  for (auto& s : sources_) graph_.node(s).is_source = false;
  for (NodeId s : sources) {
    if (s == graph_.sink()) throw ConfigError("the sink cannot be a source");
    graph_.node(s).is_source = true;
  }
  sources_ = std::move(sources);
}

void Simulation::charge_broadcast(NodeId node, std::uint32_t bits) {
  if (!graph_.node(node).alive) return;
  ledger_.charge(graph_, node, tx_cost(bits, graph_.range(), cfg_.energy), ChargeKind::Control);
  const double rx = rx_cost(bits, cfg_.energy);
  for (NodeId j : graph_.neighbors(node)) {
    if (graph_.node(j).alive) ledger_.charge(graph_, j, rx, ChargeKind::Control);
  }
}

void Simulation::hello_broadcast() {
  for (NodeId i = 0; i < graph_.size(); ++i) charge_broadcast(i, algo_.control_bits);
}

void Simulation::rebuild_topology(bool charge) {
  const auto pa = pedap_pa_weight(graph_, cfg_.energy);
  switch (cfg_.algorithm) {
    case Algorithm::PEDAP:
      tree_ = build_global_mst(graph_, pedap_weight(graph_, cfg_.energy));
      break;
    case Algorithm::PEDAP_PA:
      tree_ = build_global_mst(graph_, pa);
      break;
    case Algorithm::LMST:
      sparse_ = build_lmst(graph_, pa);
      tree_ = shortest_path_tree(graph_, sparse_, pedap_weight(graph_, cfg_.energy));
      break;
    case Algorithm::L_PEDAP: {
      auto topo = build_l_pedap(graph_, pa, cfg_.l_pedap_structure);
      sparse_ = std::move(topo.structure);
      tree_ = std::move(topo.tree);
      break;
    }
    default:
      return;
  }
  tree_.rebuilt_at = round_;
  if (!charge) return;
  if (cfg_.algorithm == Algorithm::PEDAP || cfg_.algorithm == Algorithm::PEDAP_PA) {
    // The sink floods the new tree: it starts, every reachable node repeats once.
    std::size_t alive = 0;
    for (const auto& s : graph_.nodes()) alive += s.alive ? 1 : 0;
    const auto bits = static_cast<std::uint32_t>(alive * cfg_.topology_bits_per_node);
    charge_broadcast(graph_.sink(), bits);
    for (NodeId i = 0; i < graph_.size(); ++i) {
      if (i != graph_.sink() && tree_.reachable[i]) charge_broadcast(i, bits);
    }
  } else {
    // Local rebuild: one energy/position beacon per node.
    hello_broadcast();
  }
}

std::optional<NodeId> Simulation::choose(NodeId node, const std::vector<NodeId>& pinned) {
  if (is_daaca(cfg_.algorithm)) {
    auto& table = tables_[node];
    refresh_energy_distances(graph_.node(node), table, cfg_.energy);
    try {
      selection_probabilities(table, algo_);
      const NodeId next = select_next_hop(table, algo_, rng_);
      if (algo_.variant == Variant::ACS) acs_local_update(table, next, algo_);
      return next;
    } catch (const DeadEnd&) {
      return std::nullopt;
    }
  }
  if (cfg_.algorithm == Algorithm::ACA) {
    // Candidates whose pinned chain already leads back here would close a loop.
    auto downstream_of_me = [&](NodeId j) {
      for (NodeId c = j; c != kNoNode; c = pinned[c]) {
        if (c == node) return true;
      }
      return false;
    };
    try {
      const auto cands = aca_probability(graph_, node, *aca_, downstream_of_me);
      const double u = rng_.uniform();
      double acc = 0.0;
      for (const auto& c : cands) {
        acc += c.prob;
        if (u < acc) return c.neighbor;
      }
      return cands.back().neighbor;
    } catch (const DeadEnd&) {
      return std::nullopt;
    }
  }
  const NodeId parent = tree_.parent.at(node);
  if (parent == kNoNode) return std::nullopt;
  return parent;
}

RoundOutcome Simulation::run_round() {
  const NodeId sink = graph_.sink();
  if (!graph_.node(sink).alive) throw SimulationEnded("sink is dead");
  if (std::none_of(sources_.begin(), sources_.end(),
                   [&](NodeId s) { return graph_.node(s).alive; })) {
    throw SimulationEnded("no source is alive");
  }
  ++round_;
  RoundOutcome out;
  out.round = round_;
  ledger_.clear_deaths();
  const double spent_before = ledger_.total();
  const auto n = graph_.size();
  const auto k = cfg_.energy.packet_bits;
  const bool track_best = algo_.variant != Variant::Basic && is_daaca(cfg_.algorithm);

  std::vector<NodeId> pinned(n, kNoNode);
  std::vector<char> dead_end(n, 0);
  std::vector<TxState> tx(n, TxState::None);
  std::vector<std::uint32_t> upstream(n, 0);
  std::vector<Link> rewarded;

  for (NodeId s : sources_) {
    if (!graph_.node(s).alive) continue;
    Packet p;
    p.size = k;
    p.origin = s;
    p.id_list.push_back(s);
    NodeId cur = s;
    while (cur != sink) {
      ++out.hop_attempts;
      if (aca_ && p.hop_trace.size() >= aca_->ttl) break;
      if (dead_end[cur]) break;
      if (pinned[cur] == kNoNode) {
        const auto next = choose(cur, pinned);
        if (!next) {
          dead_end[cur] = 1;
          break;
        }
        pinned[cur] = *next;
      }
      const NodeId next = pinned[cur];
      const double d = graph_.distance(cur, next);
      const double e_dist = tx_cost(k, d, cfg_.energy);
      if (tx[cur] == TxState::None) {
        // Aggregation: a node transmits once per round whatever it carries.
        const bool can_send = ledger_.affordable(graph_, cur, e_dist);
        ledger_.charge(graph_, cur, e_dist, ChargeKind::Tx);
        if (!tables_.empty()) {
          if (auto* row = tables_[cur].find(next)) update_energy_estimate(*row, cfg_.energy);
        }
        const double rx = rx_cost(k, cfg_.energy);
        if (can_send && ledger_.affordable(graph_, next, rx)) {
          ledger_.charge(graph_, next, rx, ChargeKind::Rx);
          tx[cur] = TxState::Ok;
          ++upstream[next];
          out.forwarding_edges.emplace_back(cur, next);
        } else {
          tx[cur] = TxState::Failed;
        }
      }
      if (tx[cur] != TxState::Ok) break;
      ++out.hop_successes;
      p.hop_trace.push_back({cur, next, d});
      p.id_list.push_back(next);
      p.energy_consumption += e_dist;
      cur = next;
    }
    p.delivered = (cur == sink);
    if (p.delivered) {
      ++out.delivered;
      if (track_best) best_.offer(p.id_list, p.energy_consumption);
    } else {
      ++out.dropped;
    }
    if (aca_) {
      for (const auto& [from, to] : aca_feedback_deposit(graph_, p.id_list, *aca_)) {
        rewarded.emplace_back(from, to);
        // Feedback travels back over the rewarded link.
        if (graph_.node(to).alive) {
          ledger_.charge(graph_, to, tx_cost(algo_.control_bits, graph_.distance(from, to), cfg_.energy),
                         ChargeKind::Control);
        }
        if (graph_.node(from).alive) {
          ledger_.charge(graph_, from, rx_cost(algo_.control_bits, cfg_.energy), ChargeKind::Control);
        }
      }
    }
    out.packets.push_back(std::move(p));
  }

  for (NodeId i = 0; i < n; ++i) {
    if (upstream[i] >= 2) conj_.bump(i);
  }
  if (aca_) aca_idle_evaporation(graph_, rewarded, *aca_, aca_->params.idle_threshold);

  out.deaths = ledger_.deaths();
  if (!out.deaths.empty()) hops_stale_ = true;
  out.energy_spent = ledger_.total() - spent_before;
  return out;
}

void Simulation::daaca_maintenance() {
  const bool mm = algo_.variant == Variant::MM;
  const bool clamp = mm || (algo_.variant == Variant::ACS && algo_.acs_clamp);
  auto clamp_all = [&] {
    if (!clamp) return;
    for (auto& t : tables_) clamp_bounds(t, algo_);
  };

  for (auto& t : tables_) {
    evaporate(t, algo_);
    if (clamp) clamp_bounds(t, algo_);
    if (algo_.variant != Variant::ACS) {
      deposit_basic(t, algo_);
      if (clamp) clamp_bounds(t, algo_);
    }
  }
  for (NodeId i = 0; i < graph_.size(); ++i) {
    if (!graph_.node(i).alive) continue;
    if (deposit_conjunction(i, conj_, graph_, tables_, algo_) > 0 || conj_.count[i] >= 2) {
      charge_broadcast(i, algo_.control_bits);
    }
  }
  clamp_all();
  if (algo_.variant == Variant::ES || mm) {
    deposit_elitist(tables_, best_, algo_);
    clamp_all();
  } else if (algo_.variant == Variant::ACS) {
    acs_global_update(tables_, best_, algo_);
    clamp_all();
  }
  broadcast_energy_sync(graph_, tables_, algo_, ledger_);
  conj_.reset();
  if (algo_.best_scope == BestPathScope::Window) best_.clear();
}

bool Simulation::maintenance() {
  if (round_ == 0 || round_ % algo_.round_to_update != 0) return false;
  if (is_daaca(cfg_.algorithm)) {
    daaca_maintenance();
  } else if (aca_) {
    if (hops_stale_) {
      hello_broadcast();
      aca_->refresh_hops(graph_);
      hops_stale_ = false;
    }
    conj_.reset();
  } else {
    rebuild_topology(true);
    conj_.reset();
  }
  return true;
}

RoundOutcome Simulation::step() {
  auto out = run_round();
  const double before = ledger_.total();
  const auto deaths_before = ledger_.deaths().size();
  if (maintenance()) {
    out.energy_spent += ledger_.total() - before;
    const auto& d = ledger_.deaths();
    out.deaths.insert(out.deaths.end(), d.begin() + static_cast<std::ptrdiff_t>(deaths_before), d.end());
    if (!out.deaths.empty()) hops_stale_ = true;
  }
  return out;
}

TopologyChangeReport Simulation::scenario_remove_node(NodeId victim) {
  if (victim >= graph_.size()) throw std::invalid_argument("no such node");
  if (victim == graph_.sink()) throw std::invalid_argument("the sink cannot be removed");
  if (graph_.node(victim).removed) throw std::invalid_argument("node already removed");

  TopologyChangeReport report;
  report.node = victim;
  report.touched = graph_.neighbors(victim);
  if (aca_) {
    for (NodeId t : report.touched) {
      const auto& nb = graph_.neighbors(t);
      const auto slot = static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), victim) - nb.begin());
      aca_->tau[t].erase(aca_->tau[t].begin() + static_cast<std::ptrdiff_t>(slot));
      aca_->idle[t].erase(aca_->idle[t].begin() + static_cast<std::ptrdiff_t>(slot));
    }
    aca_->tau[victim].clear();
    aca_->idle[victim].clear();
  }
  graph_.remove_node(victim);
  sources_.erase(std::remove(sources_.begin(), sources_.end(), victim), sources_.end());
  if (!tables_.empty()) {
    for (NodeId t : report.touched) tables_[t].erase(victim);
    tables_[victim].entries.clear();
  }
  if (aca_) aca_->refresh_hops(graph_);
  if (is_tree_baseline(cfg_.algorithm)) rebuild_topology(true);
  return report;
}

TopologyChangeReport Simulation::scenario_add_node(const Position& pos) {
  if (pos.x < 0.0 || pos.x > graph_.width() || pos.y < 0.0 || pos.y > graph_.length()) {
    throw std::invalid_argument("position outside the field");
  }
  const NodeId id = graph_.add_node(pos, cfg_.energy.e_init);
  TopologyChangeReport report;
  report.node = id;
  report.touched = graph_.neighbors(id);
  conj_.count.resize(graph_.size(), 0);
  if (!tables_.empty()) {
    tables_.push_back(build_routing_table(graph_, id, cfg_.energy, algo_));
    for (NodeId t : report.touched) {
      if (graph_.nearer_to_sink(id, t) && t != graph_.sink()) {
        tables_[t].insert(make_entry(graph_, t, id, cfg_.energy, algo_));
      }
    }
  }
  if (aca_) {
    // The new id is the largest, so it sits at the end of each neighbor list.
    for (NodeId t : report.touched) {
      aca_->tau[t].push_back(aca_->params.tau_init);
      aca_->idle[t].push_back(0);
    }
    aca_->tau.emplace_back(report.touched.size(), aca_->params.tau_init);
    aca_->idle.emplace_back(report.touched.size(), 0);
    aca_->refresh_hops(graph_);
  }
  if (is_tree_baseline(cfg_.algorithm)) rebuild_topology(true);
  return report;
}

std::vector<Link> Simulation::structure_links() const {
  if (cfg_.algorithm == Algorithm::LMST || cfg_.algorithm == Algorithm::L_PEDAP) {
    return as_links(sparse_);
  }
  return used_links();
}

std::vector<Link> Simulation::used_links() const {
  if (is_tree_baseline(cfg_.algorithm)) return tree_.links();
  Simulation probe = *this;
  std::vector<NodeId> everyone;
  for (const auto& s : graph_.nodes()) {
    if (!s.is_sink && s.alive) everyone.push_back(s.id);
  }
  probe.set_sources(std::move(everyone));
  auto links = probe.run_round().forwarding_edges;
  std::sort(links.begin(), links.end());
  return links;
}

}  // namespace daaca
