#pragma once

#include <chrono>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "combhelper/error.hpp"
#include "combhelper/graph.hpp"
#include "combhelper/node_set.hpp"

namespace combhelper {

enum class Problem { kMvc, kMis };

inline std::string_view to_string(Problem p) { return p == Problem::kMvc ? "mvc" : "mis"; }

inline Problem parse_problem(std::string_view s) {
  if (s == "mvc" || s == "MVC") return Problem::kMvc;
  if (s == "mis" || s == "MIS") return Problem::kMis;
  throw InvalidParameter("unknown problem '" + std::string(s) + "' (expected mvc or mis)");
}

/// Search space handed to a solver: every node, or a set of good nodes.
class Candidates {
 public:
  static Candidates all() { return Candidates(); }
  explicit Candidates(NodeSet good) : good_(std::move(good)) {}

  bool is_all() const noexcept { return !good_.has_value(); }
  bool contains(NodeId v) const noexcept { return !good_ || good_->contains(v); }
  const NodeSet& good() const { return *good_; }

  void check_universe(std::size_t n) const {
    if (good_ && good_->universe() != n)
      throw InvalidParameter("candidate set universe " + std::to_string(good_->universe()) +
                             " does not match graph size " + std::to_string(n));
  }

  /// Materialized candidate set over a graph with n nodes.
  NodeSet to_set(std::size_t n) const {
    check_universe(n);
    return good_ ? *good_ : NodeSet::full(n);
  }

 private:
  Candidates() = default;
  std::optional<NodeSet> good_;
};

struct Solution {
  Problem problem = Problem::kMvc;
  NodeSet nodes;
  /// Edges with at least one endpoint in `nodes`; meaningful for MVC.
  std::size_t covered_edges = 0;
  double runtime_s = 0.0;
  std::string algorithm;
  /// Set by the exact solver when its search completed.
  bool optimal = false;
  /// False when the solver ran on a restricted candidate set.
  bool full_space = true;
};

inline std::size_t count_covered_edges(const Graph& g, const NodeSet& s) {
  std::size_t covered = 0;
  for (auto [u, v] : g.edges())
    if (s.contains(u) || s.contains(v)) ++covered;
  return covered;
}

/// Fraction of edges with at least one endpoint in an MVC solution.
inline double coverage(const Graph& g, const Solution& s) {
  if (s.problem != Problem::kMvc) throw MisuseError("coverage is only defined for MVC solutions");
  if (g.num_edges() == 0) return 1.0;
  return static_cast<double>(count_covered_edges(g, s.nodes)) / static_cast<double>(g.num_edges());
}

struct ValidationReport {
  enum class Kind { kOk, kNotIndependent, kNotMaximal, kNotCover, kWrongUniverse };

  Kind kind = Kind::kOk;
  std::optional<Edge> edge;
  std::optional<NodeId> node;
  std::optional<double> coverage;
  std::string message;

  bool ok() const noexcept { return kind == Kind::kOk; }
};

/// MIS: independence, plus maximality for full-space solutions.
/// MVC: reports coverage; full-space solutions must cover every edge.
inline ValidationReport validate_solution(const Graph& g, const Solution& s) {
  ValidationReport r;
  if (s.nodes.universe() != g.num_nodes()) {
    r.kind = ValidationReport::Kind::kWrongUniverse;
    r.message = "solution universe does not match graph";
    return r;
  }
  if (s.problem == Problem::kMis) {
    for (auto [u, v] : g.edges()) {
      if (s.nodes.contains(u) && s.nodes.contains(v)) {
        r.kind = ValidationReport::Kind::kNotIndependent;
        r.edge = Edge{u, v};
        r.message = "edge (" + std::to_string(u) + "," + std::to_string(v) + ") inside solution";
        return r;
      }
    }
    if (s.full_space) {
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (s.nodes.contains(v)) continue;
        bool blocked = false;
        for (NodeId u : g.neighbors(v))
          if (s.nodes.contains(u)) {
            blocked = true;
            break;
          }
        if (!blocked) {
          r.kind = ValidationReport::Kind::kNotMaximal;
          r.node = v;
          r.message = "node " + std::to_string(v) + " can be added";
          return r;
        }
      }
    }
    return r;
  }

  r.coverage = coverage(g, s);
  if (s.full_space) {
    for (auto [u, v] : g.edges()) {
      if (!s.nodes.contains(u) && !s.nodes.contains(v)) {
        r.kind = ValidationReport::Kind::kNotCover;
        r.edge = Edge{u, v};
        r.message = "edge (" + std::to_string(u) + "," + std::to_string(v) + ") is uncovered";
        return r;
      }
    }
  }
  return r;
}

/// Text form: "problem algorithm size coverage runtime_s optimal" on the
/// first line (coverage is NA for MIS), then member ids one per line.
/// `ids`, when given, maps node v to the id printed for it.
inline void write_solution(std::ostream& out, const Graph& g, const Solution& s,
                           const std::vector<long long>* ids = nullptr) {
  out << to_string(s.problem) << ' ' << s.algorithm << ' ' << s.nodes.size() << ' ';
  if (s.problem == Problem::kMvc)
    out << std::setprecision(6) << std::fixed << coverage(g, s);
  else
    out << "NA";
  out << ' ' << std::setprecision(6) << std::scientific << s.runtime_s << ' '
      << (s.optimal ? 1 : 0) << '\n';
  out << std::defaultfloat;
  s.nodes.for_each([&](NodeId v) {
    if (ids)
      out << (*ids)[v] << '\n';
    else
      out << v << '\n';
  });
}

namespace detail {

/// Wall-clock stopwatch on the monotonic clock.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail
}  // namespace combhelper
