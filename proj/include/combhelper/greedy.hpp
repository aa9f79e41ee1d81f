#pragma once

#include <cstddef>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include "combhelper/graph.hpp"
#include "combhelper/solution.hpp"

namespace combhelper {

namespace detail {

/// Heap entry keyed on (degree, id). Stale entries are skipped on pop.
struct DegreeKey {
  std::size_t degree;
  NodeId node;
};

/// Max-degree first, lowest id on ties.
struct MaxDegreeOrder {
  bool operator()(const DegreeKey& a, const DegreeKey& b) const {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.node > b.node;
  }
};

/// Min-degree first, lowest id on ties.
struct MinDegreeOrder {
  bool operator()(const DegreeKey& a, const DegreeKey& b) const {
    if (a.degree != b.degree) return a.degree > b.degree;
    return a.node > b.node;
  }
};

}  // namespace detail

/// Greedy vertex cover: repeatedly take the candidate covering the most
/// uncovered edges. Stops when no candidate covers an uncovered edge, which
/// for the full candidate set means every edge is covered.
inline Solution greedy_mvc(const Graph& g, const Candidates& cand) {
  detail::Stopwatch clock;
  const std::size_t n = g.num_nodes();
  cand.check_universe(n);
  Solution sol;
  sol.problem = Problem::kMvc;
  sol.algorithm = "greedy";
  sol.full_space = cand.is_all();
  sol.nodes = NodeSet(n);

  std::vector<std::size_t> residual(n, 0);
  std::vector<detail::DegreeKey> init;
  auto seed_node = [&](NodeId v) {
    residual[v] = g.degree(v);
    if (residual[v] > 0) init.push_back({residual[v], v});
  };
  if (cand.is_all()) {
    init.reserve(n);
    for (NodeId v = 0; v < n; ++v) seed_node(v);
  } else {
    cand.good().for_each(seed_node);
  }
  std::priority_queue<detail::DegreeKey, std::vector<detail::DegreeKey>, detail::MaxDegreeOrder>
      heap(detail::MaxDegreeOrder{}, std::move(init));

  while (!heap.empty()) {
    const auto [deg, v] = heap.top();
    heap.pop();
    if (sol.nodes.contains(v) || deg != residual[v]) continue;
    sol.nodes.insert(v);
    residual[v] = 0;
    for (NodeId u : g.neighbors(v)) {
      if (sol.nodes.contains(u)) continue;
      ++sol.covered_edges;
      if (cand.contains(u) && --residual[u] > 0) heap.push({residual[u], u});
    }
  }
  sol.runtime_s = clock.seconds();
  return sol;
}

/// Greedy independent set: repeatedly take the pool node with the fewest
/// remaining pool neighbors, then drop it and its neighbors from the pool.
inline Solution greedy_mis(const Graph& g, const Candidates& cand) {
  detail::Stopwatch clock;
  const std::size_t n = g.num_nodes();
  cand.check_universe(n);
  Solution sol;
  sol.problem = Problem::kMis;
  sol.algorithm = "greedy";
  sol.full_space = cand.is_all();
  sol.nodes = NodeSet(n);

  std::vector<char> in_pool(n, 0);
  std::vector<std::size_t> residual(n, 0);
  std::vector<NodeId> pool;
  if (cand.is_all()) {
    pool.reserve(n);
    for (NodeId v = 0; v < n; ++v) pool.push_back(v);
  } else {
    pool = cand.good().to_vector();
  }
  for (NodeId v : pool) in_pool[v] = 1;
  std::vector<detail::DegreeKey> init;
  init.reserve(pool.size());
  for (NodeId v : pool) {
    std::size_t d = 0;
    if (cand.is_all()) {
      d = g.degree(v);
    } else {
      for (NodeId u : g.neighbors(v)) d += static_cast<std::size_t>(in_pool[u]);
    }
    residual[v] = d;
    init.push_back({d, v});
  }
  std::priority_queue<detail::DegreeKey, std::vector<detail::DegreeKey>, detail::MinDegreeOrder>
      heap(detail::MinDegreeOrder{}, std::move(init));

  while (!heap.empty()) {
    const auto [deg, v] = heap.top();
    heap.pop();
    if (!in_pool[v] || deg != residual[v]) continue;
    sol.nodes.insert(v);
    in_pool[v] = 0;
    for (NodeId u : g.neighbors(v)) in_pool[u] = in_pool[u] ? 2 : 0;
    for (NodeId u : g.neighbors(v)) {
      if (in_pool[u] != 2) continue;
      in_pool[u] = 0;
      for (NodeId w : g.neighbors(u)) {
        if (in_pool[w] == 1) heap.push({--residual[w], w});
      }
    }
  }
  sol.runtime_s = clock.seconds();
  return sol;
}

}  // namespace combhelper
