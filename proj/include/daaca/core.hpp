#pragma once

// Network model: node placement, neighbor discovery, the first-order radio
// energy model and the seeded random stream shared by every run.

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace daaca {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

double euclid(const Position& a, const Position& b);

// First-order radio model constants. Defaults are 50 nJ/bit electronics and
// 100 pJ/bit/m^2 amplifier; `kLiteralEpsAmp` reads the bare amplifier
// figure 100 as J/bit/m^2 and is kept only for audit runs.
struct EnergyModelParams {
  double e_tx_elec = 50e-9;
  double e_rx_elec = 50e-9;
  double eps_amp = 100e-12;
  std::uint32_t packet_bits = 4098;
  double e_init = 10.0;

  static constexpr double kLiteralEpsAmp = 100.0;

  void validate() const;
};

// E_Tx(k, d) = E_Tx-elec * k + eps_amp * k * d^2
double tx_cost(std::uint64_t bits, double distance, const EnergyModelParams& p);
// E_Rx(k) = E_Rx-elec * k
double rx_cost(std::uint64_t bits, const EnergyModelParams& p);

// Cheapest action a node can take: receiving or transmitting k bits at d = 0.
double survival_threshold(const EnergyModelParams& p);

// Seeded stream. mt19937_64 output is fixed by the standard; the float and
// bounded-integer conversions below are done by hand so draws are identical
// across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n), rejection sampled.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Neumaier compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x);
  double value() const { return sum + carry; }
};

struct NodeState {
  NodeId id = 0;
  Position pos;
  double energy = 0.0;
  // Energy the node was given and has paid out; energy == initial - spent.
  double initial = 0.0;
  CompensatedSum spent;
  bool alive = true;
  bool is_sink = false;
  bool is_source = false;
  // Removed by a fault scenario; kept as a tombstone so ids stay dense.
  bool removed = false;
};

enum class SinkPlacement { Center, Corner };

// Visibility graph G = (V, E): j is a neighbor of i iff 0 < |ij| <= range.
// Neighbor lists are kept sorted by id.
class NetworkGraph {
 public:
  NetworkGraph(std::vector<Position> positions, NodeId sink, double range, double width,
               double length, double e_init);

  std::size_t size() const { return nodes_.size(); }
  NodeId sink() const { return sink_; }
  double range() const { return range_; }
  double width() const { return width_; }
  double length() const { return length_; }

  const NodeState& node(NodeId id) const { return nodes_.at(id); }
  NodeState& node(NodeId id) { return nodes_.at(id); }
  const std::vector<NodeState>& nodes() const { return nodes_; }

  const std::vector<NodeId>& neighbors(NodeId id) const { return neighbors_.at(id); }
  bool adjacent(NodeId a, NodeId b) const;
  double distance(NodeId a, NodeId b) const { return euclid(nodes_[a].pos, nodes_[b].pos); }
  double sink_distance(NodeId id) const { return distance(id, sink_); }
  // Candidate rule for sink-ward forwarding.
  bool nearer_to_sink(NodeId candidate, NodeId than) const {
    return sink_distance(candidate) < sink_distance(than);
  }

  // Inserts a node and wires it into the neighbor sets. Returns its id.
  NodeId add_node(const Position& pos, double energy);
  // Detaches a node from every neighbor set and marks it removed.
  void remove_node(NodeId id);

  std::vector<NodeId> isolated_nodes() const;
  std::size_t edge_count() const;

  // Energy ever placed into the network (initial charges of all nodes).
  double initial_energy_total() const { return initial_total_; }
  double residual_energy_total() const;
  // Sum over nodes of initial - residual.
  double consumed_energy_total() const;
  // Resets a node to a fresh budget (hand-built scenarios and tests).
  void set_energy(NodeId id, double energy);

 private:
  void link(NodeId a, NodeId b);

  std::vector<NodeState> nodes_;
  std::vector<std::vector<NodeId>> neighbors_;
  NodeId sink_;
  double range_;
  double width_;
  double length_;
  double initial_total_ = 0.0;
};

struct DeploymentSpec {
  std::size_t n = 200;
  double width = 40.0;
  double length = 50.0;
  double range = 10.0;
  double e_init = 10.0;
  SinkPlacement sink = SinkPlacement::Center;
};

// Uniform random placement. Node 0 is the sink; it sits at the field center
// (or the origin corner) and the remaining n - 1 nodes are drawn uniformly.
NetworkGraph deploy_random(const DeploymentSpec& spec, RngStream& rng);

enum class ChargeKind { Tx, Rx, Control };

// Debits node energy and keeps the conservation ledger. A charge larger than
// the residual takes what remains. Nodes below the survival threshold die.
class EnergyLedger {
 public:
  explicit EnergyLedger(const EnergyModelParams& params) : params_(params) {}

  // Returns the amount actually debited.
  double charge(NetworkGraph& graph, NodeId id, double joules, ChargeKind kind);
  // True if the node can pay `joules` in full.
  bool affordable(const NetworkGraph& graph, NodeId id, double joules) const;

  double total() const;
  double tx() const { return tx_.value(); }
  double rx() const { return rx_.value(); }
  double control() const { return control_.value(); }
  const std::vector<NodeId>& deaths() const { return deaths_; }
  void clear_deaths() { deaths_.clear(); }
  const EnergyModelParams& params() const { return params_; }

 private:
  EnergyModelParams params_;
  CompensatedSum tx_;
  CompensatedSum rx_;
  CompensatedSum control_;
  std::vector<NodeId> deaths_;
};

}  // namespace daaca
