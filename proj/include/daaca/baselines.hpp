#pragma once

// Comparison algorithms: hop-count ant colony (ACA), global MST aggregation
// trees (PEDAP, PEDAP-PA), local MST (LMST), the relative neighborhood graph
// and L-PEDAP. Choices left open by the algorithms' descriptions are noted
// next to each builder.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "daaca/core.hpp"
#include "daaca/routing.hpp"

namespace daaca {

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// BFS hop distance to the sink over alive nodes; the sink is 0.
struct HopCountTable {
  std::vector<std::uint32_t> hops;

  std::uint32_t operator[](NodeId id) const { return hops.at(id); }
  // Largest finite hop count.
  std::uint32_t eccentricity() const;
};

HopCountTable compute_hop_counts(const NetworkGraph& graph);

// Undirected edge with endpoints ordered (first < second).
using Edge = std::pair<NodeId, NodeId>;
inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Directed link (from, to).
using Link = std::pair<NodeId, NodeId>;

// Both directions of every undirected edge, sorted.
std::vector<Link> as_links(std::span<const Edge> edges);

// Symmetric cost of an undirected edge.
using EdgeWeight = std::function<double(NodeId, NodeId)>;

// tx_cost(k, |uv|).
EdgeWeight pedap_weight(const NetworkGraph& graph, const EnergyModelParams& em);
// tx_cost(k, |uv|) / (E_cur(i)/E_init) with i the weaker endpoint, which keeps
// the weight symmetric so Prim still returns a true MST.
EdgeWeight pedap_pa_weight(const NetworkGraph& graph, const EnergyModelParams& em);

struct AggregationTree {
  std::vector<NodeId> parent;  // kNoNode for the root and unreachable nodes
  std::vector<char> reachable;
  std::uint64_t rebuilt_at = 0;

  // Child-to-parent links.
  std::vector<Link> links() const;
  double total_weight(const EdgeWeight& w) const;
};

// Prim's algorithm grown from the sink over alive nodes. Nodes outside the
// sink's component are left unreachable.
AggregationTree build_global_mst(const NetworkGraph& graph, const EdgeWeight& weight);

// Each node builds an MST of its closed neighborhood (every visible edge among
// those nodes) and keeps its tree neighbors; an edge survives only if both
// endpoints keep it.
std::vector<Edge> build_lmst(const NetworkGraph& graph, const EdgeWeight& weight);

// Edge (u,v) kept iff no witness w has max(|uw|, |vw|) < |uv|.
std::vector<Edge> build_rng(const NetworkGraph& graph);

// Shortest-path tree to the sink over the given undirected edges.
AggregationTree shortest_path_tree(const NetworkGraph& graph, std::span<const Edge> edges,
                                   const EdgeWeight& weight);

enum class LPedapStructure { Lmst, Rng };

struct LPedapTopology {
  std::vector<Edge> structure;
  AggregationTree tree;
};

// Localized sparse structure (LMST by default, RNG optional), then a
// shortest-path tree to the sink over it with the given (power-aware) weights.
LPedapTopology build_l_pedap(const NetworkGraph& graph, const EdgeWeight& weight,
                             LPedapStructure structure = LPedapStructure::Lmst);

struct AcaParams {
  double beta = 2.0;
  double rho = 0.3;            // idle evaporation
  double deposit = 0.05;       // per feedback
  double tau_init = 1.0;
  std::uint32_t ehc_slack = 2;
  std::uint32_t idle_threshold = 0;  // 0 selects round_to_update
  std::uint32_t ttl = 0;             // 0 selects the diameter estimate

  void validate() const;
};

// Pheromone per directed link plus the hop-count heuristic.
struct AcaState {
  AcaParams params;
  HopCountTable hops;
  std::vector<std::vector<double>> tau;        // tau[i][k] for graph.neighbors(i)[k]
  std::vector<std::vector<std::uint32_t>> idle;
  std::uint32_t ttl = 0;

  AcaState(const NetworkGraph& graph, const AcaParams& params);

  double& pheromone(const NetworkGraph& graph, NodeId from, NodeId to);
  double pheromone(const NetworkGraph& graph, NodeId from, NodeId to) const;
  // eta(i,j) = 1 / (hop(j) + 1).
  double heuristic(NodeId to) const;
  std::uint32_t ehc(NodeId id) const;
  void refresh_hops(const NetworkGraph& graph);
};

struct Candidate {
  NodeId neighbor;
  double prob;
};

// p(i,j) = tau(i,j) * eta(i,j)^beta / sum over neighbors u of tau(i,u) * eta(i,u)^beta.
// `exclude` removes neighbors from the candidate set (the caller uses it to
// keep per-round forwarding acyclic). Throws DeadEnd when nothing is reachable.
std::vector<Candidate> aca_probability(const NetworkGraph& graph, NodeId node,
                                       const AcaState& state,
                                       const std::function<bool(NodeId)>& exclude = {});

// Feedback for one packet path: every reception at node path[h] whose
// remaining TTL exceeds its EHC sends one feedback to path[h-1], which
// deposits on link (path[h-1], path[h]). Returns the rewarded links.
std::vector<Link> aca_feedback_deposit(const NetworkGraph& graph, std::span<const NodeId> path,
                                       AcaState& state);

// Idle-link evaporation, called once per round. `used` lists links that were
// rewarded this round. Returns the number of links evaporated.
std::size_t aca_idle_evaporation(const NetworkGraph& graph, std::span<const Link> used,
                                 AcaState& state, std::uint32_t idle_threshold);

}  // namespace daaca
