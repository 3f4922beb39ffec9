#include "daaca/core.hpp"

#include <algorithm>
#include <cmath>

namespace daaca {

double euclid(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void EnergyModelParams::validate() const {
  if (!(e_tx_elec > 0.0)) throw ConfigError("e_tx_elec must be > 0");
  if (!(e_rx_elec > 0.0)) throw ConfigError("e_rx_elec must be > 0");
  if (!(eps_amp > 0.0)) throw ConfigError("eps_amp must be > 0");
  if (packet_bits == 0) throw ConfigError("packet_bits must be > 0");
  if (!(e_init > 0.0)) throw ConfigError("e_init must be > 0");
}

double tx_cost(std::uint64_t bits, double distance, const EnergyModelParams& p) {
  const auto k = static_cast<double>(bits);
  return p.e_tx_elec * k + p.eps_amp * k * distance * distance;
}

double rx_cost(std::uint64_t bits, const EnergyModelParams& p) {
  return p.e_rx_elec * static_cast<double>(bits);
}

double survival_threshold(const EnergyModelParams& p) {
  return std::min(rx_cost(p.packet_bits, p), tx_cost(p.packet_bits, 0.0, p));
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

NetworkGraph::NetworkGraph(std::vector<Position> positions, NodeId sink, double range,
                           double width, double length, double e_init)
    : neighbors_(positions.size()), sink_(sink), range_(range), width_(width), length_(length) {
  if (sink >= positions.size()) throw ConfigError("sink id out of range");
  nodes_.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    NodeState s;
    s.id = static_cast<NodeId>(i);
    s.pos = positions[i];
    s.energy = e_init;
    s.initial = e_init;
    s.is_sink = (s.id == sink);
    nodes_.push_back(s);
    initial_total_ += e_init;
  }
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    for (NodeId j = i + 1; j < nodes_.size(); ++j) {
      if (euclid(nodes_[i].pos, nodes_[j].pos) <= range_) link(i, j);
    }
  }
}

void NetworkGraph::link(NodeId a, NodeId b) {
  auto insert_sorted = [](std::vector<NodeId>& v, NodeId x) {
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
  };
  insert_sorted(neighbors_[a], b);
  insert_sorted(neighbors_[b], a);
}

bool NetworkGraph::adjacent(NodeId a, NodeId b) const {
  const auto& nb = neighbors_.at(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

NodeId NetworkGraph::add_node(const Position& pos, double energy) {
  const auto id = static_cast<NodeId>(nodes_.size());
  NodeState s;
  s.id = id;
  s.pos = pos;
  s.energy = energy;
  s.initial = energy;
  nodes_.push_back(s);
  neighbors_.emplace_back();
  initial_total_ += energy;
  for (NodeId j = 0; j < id; ++j) {
    if (nodes_[j].removed) continue;
    if (euclid(nodes_[j].pos, pos) <= range_) link(id, j);
  }
  return id;
}

void NetworkGraph::remove_node(NodeId id) {
  if (id == sink_) throw std::invalid_argument("the sink cannot be removed");
  for (NodeId j : neighbors_.at(id)) {
    auto& nb = neighbors_[j];
    nb.erase(std::remove(nb.begin(), nb.end(), id), nb.end());
  }
  neighbors_[id].clear();
  nodes_[id].removed = true;
  nodes_[id].alive = false;
  nodes_[id].is_source = false;
}

std::vector<NodeId> NetworkGraph::isolated_nodes() const {
  std::vector<NodeId> out;
  for (const auto& s : nodes_) {
    if (!s.removed && !s.is_sink && neighbors_[s.id].empty()) out.push_back(s.id);
  }
  return out;
}

std::size_t NetworkGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : neighbors_) twice += nb.size();
  return twice / 2;
}

double NetworkGraph::residual_energy_total() const {
  double sum = 0.0;
  for (const auto& s : nodes_) sum += s.energy;
  return sum;
}

void CompensatedSum::add(double x) {
  const double t = sum + x;
  carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
  sum = t;
}

double NetworkGraph::consumed_energy_total() const {
  CompensatedSum total;
  for (const auto& s : nodes_) {
    total.add(s.spent.sum);
    total.add(s.spent.carry);
  }
  return total.value();
}

void NetworkGraph::set_energy(NodeId id, double energy) {
  auto& s = nodes_.at(id);
  initial_total_ += energy - s.initial;
  s.energy = energy;
  s.initial = energy;
  s.spent = {};
  s.alive = !s.removed && energy > 0.0;
}

NetworkGraph deploy_random(const DeploymentSpec& spec, RngStream& rng) {
  if (spec.n < 2) throw ConfigError("n must be >= 2");
  if (!(spec.width > 0.0) || !(spec.length > 0.0)) throw ConfigError("field dimensions must be > 0");
  if (!(spec.range > 0.0)) throw ConfigError("range must be > 0");
  std::vector<Position> positions(spec.n);
  positions[0] = spec.sink == SinkPlacement::Center
                     ? Position{spec.width / 2.0, spec.length / 2.0}
                     : Position{0.0, 0.0};
  for (std::size_t i = 1; i < spec.n; ++i) {
    const double x = rng.uniform(0.0, spec.width);
    const double y = rng.uniform(0.0, spec.length);
    positions[i] = {x, y};
  }
  return NetworkGraph(std::move(positions), 0, spec.range, spec.width, spec.length, spec.e_init);
}

double EnergyLedger::charge(NetworkGraph& graph, NodeId id, double joules, ChargeKind kind) {
  auto& s = graph.node(id);
  const double paid = std::min(joules, s.energy);
  s.spent.add(paid);
  s.energy = paid == s.energy ? 0.0 : std::max(0.0, s.initial - s.spent.value());
  switch (kind) {
    case ChargeKind::Tx: tx_.add(paid); break;
    case ChargeKind::Rx: rx_.add(paid); break;
    case ChargeKind::Control: control_.add(paid); break;
  }
  if (s.alive && s.energy < survival_threshold(params_)) {
    s.alive = false;
    deaths_.push_back(id);
  }
  return paid;
}

double EnergyLedger::total() const {
  CompensatedSum t;
  for (const auto* part : {&tx_, &rx_, &control_}) {
    t.add(part->sum);
    t.add(part->carry);
  }
  return t.value();
}

bool EnergyLedger::affordable(const NetworkGraph& graph, NodeId id, double joules) const {
  const auto& s = graph.node(id);
  return s.alive && s.energy >= joules;
}

}  // namespace daaca
