#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "combhelper/graph.hpp"
#include "combhelper/solution.hpp"

namespace combhelper {

namespace detail {

/// Branch and bound for minimum vertex cover on one connected graph.
///
/// Every search node applies degree-0 removal and degree-1 forcing, bounds
/// with the larger of a greedy maximal matching and a greedy clique
/// partition, and branches on the maximum-degree free node: either it joins
/// the cover, or it is excluded and all its free neighbors join.
class VertexCoverSearch {
 public:
  using Clock = std::chrono::steady_clock;

  VertexCoverSearch(const Graph& g, Clock::time_point deadline)
      : g_(g),
        deadline_(deadline),
        status_(g.num_nodes(), kFree),
        residual_(g.num_nodes()),
        stamp_(g.num_nodes(), 0) {
    const std::size_t n = g.num_nodes();
    free_count_ = n;
    best_.assign(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      residual_[v] = static_cast<std::uint32_t>(g.degree(v));
      if (residual_[v] > 0) {
        best_[v] = 1;
        ++best_size_;
      }
    }
  }

  /// Returns true when the search proved optimality before the deadline.
  bool run() {
    for (NodeId v = 0; v < g_.num_nodes(); ++v) touched_.push_back(v);
    search();
    return !timed_out_;
  }

  /// best()[v] != 0 iff v is in the best cover found.
  const std::vector<char>& best() const { return best_; }
  std::size_t best_size() const { return best_size_; }

 private:
  enum : std::uint8_t { kFree, kIn, kOut };

  void take(NodeId v, std::uint8_t to) {
    status_[v] = to;
    --free_count_;
    if (to == kIn) ++cover_size_;
    trail_.push_back(v);
    for (NodeId u : g_.neighbors(v))
      if (status_[u] == kFree) {
        --residual_[u];
        touched_.push_back(u);
      }
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const NodeId v = trail_.back();
      trail_.pop_back();
      if (status_[v] == kIn) --cover_size_;
      status_[v] = kFree;
      ++free_count_;
      for (NodeId u : g_.neighbors(v))
        if (status_[u] == kFree) ++residual_[u];
    }
  }

  void reduce() {
    while (!touched_.empty()) {
      const NodeId v = touched_.back();
      touched_.pop_back();
      if (status_[v] != kFree) continue;
      if (residual_[v] == 0) {
        take(v, kOut);
      } else if (residual_[v] == 1) {
        for (NodeId u : g_.neighbors(v))
          if (status_[u] == kFree) {
            take(u, kIn);
            break;
          }
      }
    }
  }

  std::size_t lower_bound() {
    ++epoch_;
    std::size_t matching = 0;
    for (NodeId v = 0; v < g_.num_nodes(); ++v) {
      if (status_[v] != kFree || stamp_[v] == epoch_) continue;
      for (NodeId u : g_.neighbors(v))
        if (status_[u] == kFree && stamp_[u] != epoch_) {
          stamp_[v] = stamp_[u] = epoch_;
          ++matching;
          break;
        }
    }

    // A clique of size k needs k-1 cover nodes, so free - #cliques is a bound.
    ++epoch_;
    std::size_t cliques = 0;
    for (NodeId v = 0; v < g_.num_nodes(); ++v) {
      if (status_[v] != kFree || stamp_[v] == epoch_) continue;
      ++cliques;
      stamp_[v] = epoch_;
      clique_.assign(1, v);
      for (NodeId u : g_.neighbors(v)) {
        if (status_[u] != kFree || stamp_[u] == epoch_) continue;
        bool joins = true;
        for (std::size_t i = 1; i < clique_.size() && joins; ++i) joins = g_.has_edge(u, clique_[i]);
        if (joins) {
          stamp_[u] = epoch_;
          clique_.push_back(u);
        }
      }
    }
    return std::max(matching, free_count_ - cliques);
  }

  bool out_of_time() {
    if (timed_out_) return true;
    if ((++nodes_ & 0xff) == 0 && Clock::now() >= deadline_) timed_out_ = true;
    return timed_out_;
  }

  void search() {
    if (out_of_time()) {
      touched_.clear();
      return;
    }
    const std::size_t mark = trail_.size();
    reduce();
    if (cover_size_ >= best_size_ || cover_size_ + lower_bound() >= best_size_) {
      undo_to(mark);
      return;
    }

    NodeId pick = 0;
    std::uint32_t pick_degree = 0;
    for (NodeId v = 0; v < g_.num_nodes(); ++v)
      if (status_[v] == kFree && residual_[v] > pick_degree) {
        pick = v;
        pick_degree = residual_[v];
      }
    if (pick_degree == 0) {
      // Reductions leave no free node with zero degree, so nothing is free.
      best_size_ = cover_size_;
      for (NodeId v = 0; v < g_.num_nodes(); ++v) best_[v] = status_[v] == kIn;
      undo_to(mark);
      return;
    }

    const std::size_t branch = trail_.size();
    take(pick, kIn);
    search();
    undo_to(branch);

    if (!timed_out_) {
      take(pick, kOut);
      for (NodeId u : g_.neighbors(pick))
        if (status_[u] == kFree) take(u, kIn);
      search();
      undo_to(branch);
    }
    touched_.clear();
    undo_to(mark);
  }

  const Graph& g_;
  Clock::time_point deadline_;
  std::vector<std::uint8_t> status_;
  std::vector<std::uint32_t> residual_;
  std::vector<std::uint64_t> stamp_;
  std::vector<NodeId> trail_;
  std::vector<NodeId> touched_;
  std::vector<NodeId> clique_;
  std::vector<char> best_;
  std::size_t best_size_ = 0;
  std::size_t cover_size_ = 0;
  std::size_t free_count_ = 0;
  std::uint64_t epoch_ = 0;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

/// Connected components of the subgraph induced by `active`, each as a
/// list of global ids in ascending order. Components are ordered by their
/// smallest id.
inline std::vector<std::vector<NodeId>> induced_components(const Graph& g, const NodeSet& active) {
  std::vector<std::vector<NodeId>> out;
  std::vector<char> seen(g.num_nodes(), 0);
  std::vector<NodeId> stack;
  active.for_each([&](NodeId root) {
    if (seen[root]) return;
    std::vector<NodeId> comp;
    seen[root] = 1;
    stack.push_back(root);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (NodeId u : g.neighbors(v))
        if (!seen[u] && active.contains(u)) {
          seen[u] = 1;
          stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  });
  return out;
}

}  // namespace detail

/// Exact MVC / MIS by branch and bound, optionally restricted to candidates.
///
/// Non-candidates are fixed to 0. Restricted MVC covers every coverable edge
/// (those with a candidate endpoint) using as few candidates as possible;
/// restricted MIS is a maximum independent set among the candidates. MIS is
/// solved as the complement of a minimum vertex cover of the searched
/// subgraph. The incumbent is returned with optimal=false if time runs out.
inline Solution exact_solve(const Graph& g, Problem problem, const Candidates& cand,
                            double time_limit_s) {
  if (!(time_limit_s > 0.0)) throw InvalidParameter("exact_solve requires a positive time limit");
  detail::Stopwatch clock;
  const std::size_t n = g.num_nodes();
  const auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(std::min(time_limit_s, 1e9)));

  NodeSet active = cand.to_set(n);
  NodeSet forced(n);
  if (problem == Problem::kMvc && !cand.is_all()) {
    // An edge to a non-candidate can only be covered by its candidate end.
    cand.good().for_each([&](NodeId v) {
      for (NodeId u : g.neighbors(v))
        if (!cand.contains(u)) {
          forced.insert(v);
          break;
        }
    });
    forced.for_each([&](NodeId v) { active.erase(v); });
  }

  NodeSet cover(n);
  bool complete = true;
  std::vector<NodeId> local(n, 0);
  for (const auto& comp : detail::induced_components(g, active)) {
    if (comp.size() < 2) continue;
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<NodeId>(i);
    std::vector<Edge> edges;
    for (NodeId v : comp)
      for (NodeId u : g.neighbors(v))
        if (v < u && active.contains(u)) edges.emplace_back(local[v], local[u]);
    const Graph sub = Graph::from_edges(comp.size(), edges);
    detail::VertexCoverSearch search(sub, deadline);
    complete = search.run() && complete;
    for (std::size_t i = 0; i < comp.size(); ++i)
      if (search.best()[i]) cover.insert(comp[i]);
  }

  Solution sol;
  sol.problem = problem;
  sol.algorithm = "exact";
  sol.full_space = cand.is_all();
  sol.optimal = complete;
  sol.nodes = NodeSet(n);
  if (problem == Problem::kMvc) {
    forced.for_each([&](NodeId v) { sol.nodes.insert(v); });
    cover.for_each([&](NodeId v) { sol.nodes.insert(v); });
    sol.covered_edges = count_covered_edges(g, sol.nodes);
  } else {
    active.for_each([&](NodeId v) {
      if (!cover.contains(v)) sol.nodes.insert(v);
    });
  }
  sol.runtime_s = clock.seconds();
  return sol;
}

}  // namespace combhelper
