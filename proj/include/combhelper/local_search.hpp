#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "combhelper/graph.hpp"
#include "combhelper/rng.hpp"
#include "combhelper/solution.hpp"

namespace combhelper {

/// First-improvement pruning of a vertex cover: remove a member whose
/// neighbors all lie in the set, then rescan from the lowest id, until no
/// member is removable. Never adds nodes.
inline NodeSet improve_mvc(const Graph& g, NodeSet s) {
  // A removal only shrinks the set, so members already found non-removable
  // stay non-removable. Resuming after the removed node therefore visits the
  // same sequence of removals as restarting from the lowest id.
  for (std::size_t v = s.next(0); v < s.universe(); v = s.next(v + 1)) {
    bool removable = true;
    for (NodeId u : g.neighbors(static_cast<NodeId>(v)))
      if (!s.contains(u)) {
        removable = false;
        break;
      }
    if (removable) s.erase(static_cast<NodeId>(v));
  }
  return s;
}

/// Local search for vertex cover. The full-space start adds both endpoints
/// of randomly ordered uncovered edges until every edge is covered; the
/// restricted start is the candidate set itself.
inline Solution local_search_mvc(const Graph& g, const Candidates& cand, std::uint64_t seed) {
  detail::Stopwatch clock;
  const std::size_t n = g.num_nodes();
  cand.check_universe(n);
  NodeSet start(n);
  if (cand.is_all()) {
    std::vector<Edge> order = g.edges();
    Rng rng(seed);
    rng.shuffle(order);
    for (auto [u, v] : order) {
      if (start.contains(u) || start.contains(v)) continue;
      start.insert(u);
      start.insert(v);
    }
  } else {
    start = cand.to_set(n);
  }

  Solution sol;
  sol.problem = Problem::kMvc;
  sol.algorithm = "local-search";
  sol.full_space = cand.is_all();
  sol.nodes = improve_mvc(g, std::move(start));
  for (auto [u, v] : g.edges())
    if (sol.nodes.contains(u) || sol.nodes.contains(v)) ++sol.covered_edges;
  sol.runtime_s = clock.seconds();
  return sol;
}

namespace detail {

/// Independent-set state with per-node counts of solution neighbors.
class TightnessState {
 public:
  TightnessState(const Graph& g, NodeSet s) : g_(g), s_(std::move(s)), tight_(g.num_nodes(), 0) {
    s_.for_each([&](NodeId v) {
      for (NodeId u : g_.neighbors(v)) ++tight_[u];
    });
  }

  const NodeSet& solution() const { return s_; }
  std::uint32_t tightness(NodeId v) const { return tight_[v]; }

  void add(NodeId v) {
    s_.insert(v);
    for (NodeId u : g_.neighbors(v)) ++tight_[u];
  }

  void remove(NodeId v) {
    s_.erase(v);
    for (NodeId u : g_.neighbors(v)) --tight_[u];
  }

 private:
  const Graph& g_;
  NodeSet s_;
  std::vector<std::uint32_t> tight_;
};

}  // namespace detail

/// (1,2)-swap local search for independent sets with first improvement.
///
/// Members are scanned in ascending id. For member v, the first pair (i, j)
/// of non-adjacent one-tight neighbors (v is their only solution neighbor)
/// replaces v, and the scan restarts. When restricted, i and j must be
/// candidates. After a swap, neighbors of v left without any solution
/// neighbor are added back in ascending id, so maximality within the search
/// space is preserved.
inline NodeSet improve_mis(const Graph& g, const Candidates& cand, NodeSet start) {
  detail::TightnessState state(g, std::move(start));
  std::vector<NodeId> one_tight;
  bool improved = true;
  while (improved) {
    improved = false;
    const NodeSet& s = state.solution();
    for (std::size_t vi = s.next(0); vi < s.universe(); vi = s.next(vi + 1)) {
      const auto v = static_cast<NodeId>(vi);
      one_tight.clear();
      for (NodeId u : g.neighbors(v))
        if (!s.contains(u) && state.tightness(u) == 1 && cand.contains(u)) one_tight.push_back(u);
      if (one_tight.size() < 2) continue;

      bool swapped = false;
      for (std::size_t a = 0; a < one_tight.size() && !swapped; ++a) {
        for (std::size_t b = a + 1; b < one_tight.size(); ++b) {
          const NodeId i = one_tight[a];
          const NodeId j = one_tight[b];
          if (g.has_edge(i, j)) continue;
          state.remove(v);
          state.add(i);
          state.add(j);
          for (NodeId u : g.neighbors(v))
            if (state.tightness(u) == 0 && !state.solution().contains(u) && cand.contains(u))
              state.add(u);
          swapped = true;
          break;
        }
      }
      if (swapped) {
        improved = true;
        break;
      }
    }
  }
  return state.solution();
}

/// Local search for independent sets. The start repeatedly adds a uniformly
/// random remaining pool node and drops it and its neighbors from the pool;
/// the pool is every node, or the candidate set when restricted.
inline Solution local_search_mis(const Graph& g, const Candidates& cand, std::uint64_t seed) {
  detail::Stopwatch clock;
  const std::size_t n = g.num_nodes();
  cand.check_universe(n);
  std::vector<NodeId> order;
  if (cand.is_all()) {
    order.resize(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
  } else {
    order = cand.good().to_vector();
  }
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<char> blocked(n, 0);
  NodeSet start(n);
  for (NodeId v : order) {
    if (blocked[v]) continue;
    start.insert(v);
    blocked[v] = 1;
    for (NodeId u : g.neighbors(v)) blocked[u] = 1;
  }

  Solution sol;
  sol.problem = Problem::kMis;
  sol.algorithm = "local-search";
  sol.full_space = cand.is_all();
  sol.nodes = improve_mis(g, cand, std::move(start));
  sol.runtime_s = clock.seconds();
  return sol;
}

}  // namespace combhelper
