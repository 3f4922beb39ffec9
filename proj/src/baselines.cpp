#include "daaca/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <tuple>

namespace daaca {

namespace {

bool usable(const NetworkGraph& g, NodeId id) {
  const auto& s = g.node(id);
  return s.alive && !s.removed;
}

// Deterministic edge order: weight, then lower endpoint, then higher endpoint.
using EdgeKey = std::tuple<double, NodeId, NodeId>;
EdgeKey edge_key(double w, NodeId a, NodeId b) {
  return {w, std::min(a, b), std::max(a, b)};
}

std::size_t neighbor_slot(const NetworkGraph& g, NodeId from, NodeId to) {
  const auto& nb = g.neighbors(from);
  auto it = std::lower_bound(nb.begin(), nb.end(), to);
  if (it == nb.end() || *it != to) throw std::out_of_range("not a neighbor");
  return static_cast<std::size_t>(it - nb.begin());
}

}  // namespace

std::uint32_t HopCountTable::eccentricity() const {
  std::uint32_t ecc = 0;
  for (auto h : hops) {
    if (h != kUnreachable) ecc = std::max(ecc, h);
  }
  return ecc;
}

HopCountTable compute_hop_counts(const NetworkGraph& graph) {
  HopCountTable t;
  t.hops.assign(graph.size(), kUnreachable);
  if (!usable(graph, graph.sink())) return t;
  std::deque<NodeId> queue{graph.sink()};
  t.hops[graph.sink()] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : graph.neighbors(u)) {
      if (!usable(graph, v) || t.hops[v] != kUnreachable) continue;
      t.hops[v] = t.hops[u] + 1;
      queue.push_back(v);
    }
  }
  return t;
}

std::vector<Link> as_links(std::span<const Edge> edges) {
  std::vector<Link> out;
  out.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    out.emplace_back(a, b);
    out.emplace_back(b, a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

EdgeWeight pedap_weight(const NetworkGraph& graph, const EnergyModelParams& em) {
  return [&graph, em](NodeId a, NodeId b) {
    return tx_cost(em.packet_bits, graph.distance(a, b), em);
  };
}

EdgeWeight pedap_pa_weight(const NetworkGraph& graph, const EnergyModelParams& em) {
  return [&graph, em](NodeId a, NodeId b) {
    const double weakest = std::min(graph.node(a).energy, graph.node(b).energy) / em.e_init;
    if (!(weakest > 0.0)) return std::numeric_limits<double>::infinity();
    return tx_cost(em.packet_bits, graph.distance(a, b), em) / weakest;
  };
}

std::vector<Link> AggregationTree::links() const {
  std::vector<Link> out;
  for (NodeId i = 0; i < parent.size(); ++i) {
    if (parent[i] != kNoNode) out.emplace_back(i, parent[i]);
  }
  return out;
}

double AggregationTree::total_weight(const EdgeWeight& w) const {
  double sum = 0.0;
  for (const auto& [child, par] : links()) sum += w(child, par);
  return sum;
}

AggregationTree build_global_mst(const NetworkGraph& graph, const EdgeWeight& weight) {
  const auto n = graph.size();
  AggregationTree tree;
  tree.parent.assign(n, kNoNode);
  tree.reachable.assign(n, 0);
  if (!usable(graph, graph.sink())) return tree;

  // (key, node, proposed parent); stale heap items are skipped on pop.
  using Item = std::tuple<EdgeKey, NodeId, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<char> in_tree(n, 0);
  auto grow = [&](NodeId u) {
    in_tree[u] = 1;
    tree.reachable[u] = 1;
    for (NodeId v : graph.neighbors(u)) {
      if (in_tree[v] || !usable(graph, v)) continue;
      const double w = weight(u, v);
      if (!std::isfinite(w)) continue;
      heap.emplace(edge_key(w, u, v), v, u);
    }
  };
  grow(graph.sink());
  while (!heap.empty()) {
    const auto [key, v, par] = heap.top();
    heap.pop();
    if (in_tree[v]) continue;
    tree.parent[v] = par;
    grow(v);
  }
  return tree;
}

std::vector<Edge> build_lmst(const NetworkGraph& graph, const EdgeWeight& weight) {
  const auto n = graph.size();
  // keeps[u] = tree neighbors of u in its local MST, sorted.
  std::vector<std::vector<NodeId>> keeps(n);
  for (NodeId u = 0; u < n; ++u) {
    if (!usable(graph, u)) continue;
    std::vector<NodeId> local{u};
    for (NodeId v : graph.neighbors(u)) {
      if (usable(graph, v)) local.push_back(v);
    }
    const auto m = local.size();
    // Dense Prim over the closed neighborhood, rooted at u.
    std::vector<char> done(m, 0);
    std::vector<EdgeKey> best(m, EdgeKey{std::numeric_limits<double>::infinity(), kNoNode, kNoNode});
    std::vector<std::size_t> from(m, 0);
    best[0] = EdgeKey{0.0, u, u};
    for (std::size_t step = 0; step < m; ++step) {
      std::size_t pick = m;
      for (std::size_t k = 0; k < m; ++k) {
        if (!done[k] && (pick == m || best[k] < best[pick])) pick = k;
      }
      if (pick == m || std::isinf(std::get<0>(best[pick]))) break;
      done[pick] = 1;
      if (pick != 0) {
        const NodeId a = local[pick];
        const NodeId b = local[from[pick]];
        if (a == u) keeps[u].push_back(b);
        if (b == u) keeps[u].push_back(a);
      }
      for (std::size_t k = 0; k < m; ++k) {
        if (done[k] || !graph.adjacent(local[pick], local[k])) continue;
        const double w = weight(local[pick], local[k]);
        if (!std::isfinite(w)) continue;
        const auto key = edge_key(w, local[pick], local[k]);
        if (key < best[k]) {
          best[k] = key;
          from[k] = pick;
        }
      }
    }
    std::sort(keeps[u].begin(), keeps[u].end());
  }
  std::vector<Edge> out;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : keeps[u]) {
      if (u < v && std::binary_search(keeps[v].begin(), keeps[v].end(), u)) out.emplace_back(u, v);
    }
  }
  return out;
}

std::vector<Edge> build_rng(const NetworkGraph& graph) {
  std::vector<Edge> out;
  for (NodeId u = 0; u < graph.size(); ++u) {
    if (!usable(graph, u)) continue;
    for (NodeId v : graph.neighbors(u)) {
      if (v <= u || !usable(graph, v)) continue;
      const double duv = graph.distance(u, v);
      bool witnessed = false;
      for (NodeId w : graph.neighbors(u)) {
        if (w == v || !usable(graph, w)) continue;
        if (std::max(graph.distance(u, w), graph.distance(v, w)) < duv) {
          witnessed = true;
          break;
        }
      }
      if (!witnessed) out.emplace_back(u, v);
    }
  }
  return out;
}

AggregationTree shortest_path_tree(const NetworkGraph& graph, std::span<const Edge> edges,
                                   const EdgeWeight& weight) {
  const auto n = graph.size();
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& [a, b] : edges) {
    if (!usable(graph, a) || !usable(graph, b)) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  AggregationTree tree;
  tree.parent.assign(n, kNoNode);
  tree.reachable.assign(n, 0);
  if (!usable(graph, graph.sink())) return tree;
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[graph.sink()] = 0.0;
  heap.emplace(0.0, graph.sink());
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u] || tree.reachable[u]) continue;
    tree.reachable[u] = 1;
    for (NodeId v : adj[u]) {
      if (tree.reachable[v]) continue;
      const double w = weight(v, u);
      if (!std::isfinite(w)) continue;
      const double nd = d + w;
      if (nd < dist[v] || (nd == dist[v] && u < tree.parent[v])) {
        dist[v] = nd;
        tree.parent[v] = u;
        heap.emplace(nd, v);
      }
    }
  }
  return tree;
}

LPedapTopology build_l_pedap(const NetworkGraph& graph, const EdgeWeight& weight,
                             LPedapStructure structure) {
  LPedapTopology topo;
  topo.structure = structure == LPedapStructure::Rng ? build_rng(graph) : build_lmst(graph, weight);
  topo.tree = shortest_path_tree(graph, topo.structure, weight);
  return topo;
}

void AcaParams::validate() const {
  if (!(beta > 0.0)) throw ConfigError("aca_beta must be > 0");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("aca_rho must be in (0,1)");
  if (!(deposit > 0.0)) throw ConfigError("aca_deposit must be > 0");
  if (!(tau_init > 0.0)) throw ConfigError("aca_tau_init must be > 0");
}

AcaState::AcaState(const NetworkGraph& graph, const AcaParams& p) : params(p) {
  tau.resize(graph.size());
  idle.resize(graph.size());
  for (NodeId i = 0; i < graph.size(); ++i) {
    tau[i].assign(graph.neighbors(i).size(), p.tau_init);
    idle[i].assign(graph.neighbors(i).size(), 0);
  }
  refresh_hops(graph);
}

void AcaState::refresh_hops(const NetworkGraph& graph) {
  hops = compute_hop_counts(graph);
  ttl = params.ttl > 0 ? params.ttl : 2 * std::max<std::uint32_t>(hops.eccentricity(), 1);
}

double& AcaState::pheromone(const NetworkGraph& graph, NodeId from, NodeId to) {
  return tau.at(from).at(neighbor_slot(graph, from, to));
}

double AcaState::pheromone(const NetworkGraph& graph, NodeId from, NodeId to) const {
  return tau.at(from).at(neighbor_slot(graph, from, to));
}

double AcaState::heuristic(NodeId to) const {
  const auto h = hops[to];
  if (h == kUnreachable) return 0.0;
  return 1.0 / (static_cast<double>(h) + 1.0);
}

std::uint32_t AcaState::ehc(NodeId id) const {
  const auto h = hops[id];
  return h == kUnreachable ? kUnreachable : h + params.ehc_slack;
}

std::vector<Candidate> aca_probability(const NetworkGraph& graph, NodeId node,
                                       const AcaState& state,
                                       const std::function<bool(NodeId)>& exclude) {
  std::vector<Candidate> out;
  double total = 0.0;
  const auto& nb = graph.neighbors(node);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    const NodeId j = nb[k];
    if (!graph.node(j).alive || state.hops[j] == kUnreachable) continue;
    if (exclude && exclude(j)) continue;
    const double w = state.tau[node][k] * std::pow(state.heuristic(j), state.params.beta);
    out.push_back({j, w});
    total += w;
  }
  if (out.empty() || !(total > 0.0)) throw DeadEnd(node);
  for (auto& c : out) c.prob /= total;
  return out;
}

std::vector<Link> aca_feedback_deposit(const NetworkGraph& graph, std::span<const NodeId> path,
                                       AcaState& state) {
  std::vector<Link> rewarded;
  for (std::size_t h = 1; h < path.size(); ++h) {
    if (h >= state.ttl) break;
    const std::uint32_t remaining = state.ttl - static_cast<std::uint32_t>(h);
    const auto ehc = state.ehc(path[h]);
    if (ehc == kUnreachable || remaining <= ehc) continue;
    state.pheromone(graph, path[h - 1], path[h]) += state.params.deposit;
    rewarded.emplace_back(path[h - 1], path[h]);
  }
  return rewarded;
}

std::size_t aca_idle_evaporation(const NetworkGraph& graph, std::span<const Link> used,
                                 AcaState& state, std::uint32_t idle_threshold) {
  for (const auto& [from, to] : used) state.idle.at(from).at(neighbor_slot(graph, from, to)) = 0;
  std::vector<Link> sorted(used.begin(), used.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t evaporated = 0;
  for (NodeId i = 0; i < state.tau.size(); ++i) {
    const auto& nb = graph.neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (std::binary_search(sorted.begin(), sorted.end(), Link{i, nb[k]})) continue;
      if (++state.idle[i][k] >= idle_threshold) {
        state.tau[i][k] *= (1.0 - state.params.rho);
        state.idle[i][k] = 0;
        ++evaporated;
      }
    }
  }
  return evaporated;
}

}  // namespace daaca
