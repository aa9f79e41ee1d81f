#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "combhelper/error.hpp"
#include "combhelper/node_set.hpp"
#include "combhelper/rng.hpp"

namespace combhelper {

using Edge = std::pair<NodeId, NodeId>;

/// Counts of input items discarded while building a simple graph.
struct EdgeStats {
  std::size_t duplicates_dropped = 0;
  std::size_t self_loops_dropped = 0;
};

/// Immutable undirected simple graph in CSR form.
///
/// Neighbor lists are sorted ascending, contain no duplicates and no
/// self-loops, and adjacency is symmetric.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds a graph on nodes [0, n). Self-loops and repeated edges (in either
  /// orientation) are dropped and counted in `stats` when given.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges, EdgeStats* stats = nullptr) {
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    EdgeStats local;
    for (auto [u, v] : edges) {
      if (u >= n || v >= n)
        throw InvalidParameter("edge (" + std::to_string(u) + "," + std::to_string(v) +
                               ") references a node outside [0," + std::to_string(n) + ")");
      if (u == v) {
        ++local.self_loops_dropped;
        continue;
      }
      canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    const auto last = std::unique(canon.begin(), canon.end());
    local.duplicates_dropped = static_cast<std::size_t>(canon.end() - last);
    canon.erase(last, canon.end());
    if (stats) *stats = local;

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : canon) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.resize(2 * canon.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // With canon sorted by (u, v), the smaller neighbors of every node arrive
    // first and in ascending order, followed by the larger ones.
    for (auto [u, v] : canon) g.targets_[cursor[v]++] = u;
    for (auto [u, v] : canon) g.targets_[cursor[u]++] = v;
    g.num_edges_ = canon.size();
    return g;
  }

  std::size_t num_nodes() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return num_edges_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(NodeId u, NodeId v) const {
    if (degree(u) > degree(v)) std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges with u < v, in ascending (u, v) order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (NodeId u = 0; u < num_nodes(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::vector<NodeId>& targets() const noexcept { return targets_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.targets_ == b.targets_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::size_t num_edges_ = 0;
};

/// Checks the structural invariants. Returns a description of the first
/// violation, or nullopt when the graph is well formed.
inline std::optional<std::string> validate_graph(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (g.offsets().back() != 2 * g.num_edges()) return "neighbor-list lengths do not sum to 2m";
  for (NodeId v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const NodeId u = nb[i];
      if (u >= n) return "node " + std::to_string(v) + " has out-of-range neighbor";
      if (u == v) return "self-loop at node " + std::to_string(v);
      if (i > 0 && nb[i - 1] >= u)
        return "neighbor list of node " + std::to_string(v) + " is not strictly ascending";
      auto back = g.neighbors(u);
      if (!std::binary_search(back.begin(), back.end(), v))
        return "edge (" + std::to_string(v) + "," + std::to_string(u) + ") is not symmetric";
    }
  }
  return std::nullopt;
}

inline std::vector<std::size_t> degrees(const Graph& g) {
  std::vector<std::size_t> d(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) d[v] = g.degree(v);
  return d;
}

/// Barabasi-Albert preferential attachment.
///
/// Nodes [0, m) start as a clique. Every later node draws m distinct targets
/// with probability proportional to their degree at the start of its step;
/// duplicate draws are rejected and redrawn. Edge count is C(m,2) + m(n-m).
inline Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || n <= m)
    throw InvalidParameter("generate_ba requires n > m >= 1 (got n=" + std::to_string(n) +
                           ", m=" + std::to_string(m) + ")");
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m * (m - 1) / 2 + m * (n - m));
  // Every edge endpoint appears once here, so a uniform pick is a
  // degree-proportional pick.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * edges.capacity());
  for (NodeId u = 0; u < m; ++u)
    for (NodeId v = u + 1; v < m; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }

  std::vector<NodeId> chosen;
  std::vector<char> taken(n, 0);
  for (NodeId t = static_cast<NodeId>(m); t < n; ++t) {
    chosen.clear();
    const std::size_t pool = endpoints.size();
    while (chosen.size() < m) {
      // Only reachable for m == 1 on the first step: the seed clique is a
      // single isolated node, so fall back to a uniform pick.
      const NodeId target = pool == 0 ? static_cast<NodeId>(rng.below(t))
                                      : endpoints[static_cast<std::size_t>(rng.below(pool))];
      if (taken[target]) continue;
      taken[target] = 1;
      chosen.push_back(target);
    }
    for (NodeId target : chosen) {
      taken[target] = 0;
      edges.emplace_back(target, t);
      endpoints.push_back(target);
      endpoints.push_back(t);
    }
  }
  return Graph::from_edges(n, edges);
}

/// Result of reading an edge-list file.
struct LoadedGraph {
  Graph graph;
  EdgeStats stats;
  /// original_ids[v] is the id the file used for compacted node v.
  std::vector<long long> original_ids;
};

namespace detail {

inline bool parse_ll(std::string_view tok, long long& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace detail

/// Reads whitespace-separated "u v" pairs, one edge per line. Lines starting
/// with '#' and blank lines are skipped. Node ids are compacted to 0..n-1 in
/// order of first appearance.
inline LoadedGraph read_edge_list(std::istream& in, const std::string& source) {
  std::unordered_map<long long, NodeId> ids;
  LoadedGraph out;
  std::vector<Edge> raw;
  auto intern = [&](long long id) {
    auto [it, fresh] = ids.try_emplace(id, static_cast<NodeId>(out.original_ids.size()));
    if (fresh) out.original_ids.push_back(id);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream tokens(line);
    std::string a, b, extra;
    tokens >> a >> b;
    long long u = 0, v = 0;
    if (b.empty()) throw ParseError(source, lineno, "expected two node ids");
    if (!detail::parse_ll(a, u)) throw ParseError(source, lineno, "not an integer: '" + a + "'");
    if (!detail::parse_ll(b, v)) throw ParseError(source, lineno, "not an integer: '" + b + "'");
    if (tokens >> extra)
      throw ParseError(source, lineno, "unexpected trailing token '" + extra + "'");
    const NodeId cu = intern(u);
    const NodeId cv = intern(v);
    raw.emplace_back(cu, cv);
  }
  if (raw.empty()) throw EmptyGraphError(source + ": edge list contains no edges");
  out.graph = Graph::from_edges(out.original_ids.size(), raw, &out.stats);
  return out;
}

inline LoadedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open edge list");
  return read_edge_list(in, path);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

/// Writes one "u v" line per edge with u < v.
inline void dump_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  write_edge_list(out, g);
  if (!out) throw IoError(path, "write failed");
}

}  // namespace combhelper
