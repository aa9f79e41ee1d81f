#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "combhelper/error.hpp"
#include "combhelper/gcn.hpp"
#include "combhelper/rng.hpp"
#include "combhelper/solvers.hpp"

namespace combhelper {

/// Per-node binary labels (1 = in the oracle solution) with a train/val split.
struct LabelSet {
  Problem problem = Problem::kMvc;
  Algorithm oracle = Algorithm::kGreedy;
  std::vector<std::uint8_t> labels;
  NodeSet train;
  NodeSet val;

  std::size_t num_nodes() const { return labels.size(); }

  /// n x 2 one-hot matrix: [1,0] for label 0, [0,1] for label 1.
  Matrix one_hot() const {
    Matrix y = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), 2);
    for (std::size_t v = 0; v < labels.size(); ++v) y(static_cast<Eigen::Index>(v), labels[v]) = 1.0;
    return y;
  }
};

/// Splits the nodes uniformly at random: the first floor(n/2) of a seeded
/// permutation train, the rest validate.
inline std::pair<NodeSet, NodeSet> random_split(std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  Rng rng(seed);
  rng.shuffle(order);
  NodeSet train(n), val(n);
  for (std::size_t i = 0; i < n; ++i) (i < n / 2 ? train : val).insert(order[i]);
  return {std::move(train), std::move(val)};
}

inline LabelSet labels_from_solution(const Solution& s, Algorithm oracle, std::uint64_t split_seed) {
  LabelSet ls;
  ls.problem = s.problem;
  ls.oracle = oracle;
  const std::size_t n = s.nodes.universe();
  ls.labels.assign(n, 0);
  s.nodes.for_each([&](NodeId v) { ls.labels[v] = 1; });
  std::tie(ls.train, ls.val) = random_split(n, split_seed);
  return ls;
}

/// Runs the oracle on the whole graph and labels its solution members 1.
/// The solver and the split draw from independent streams of `seed`.
inline LabelSet generate_labels(const Graph& g, Problem problem, Algorithm oracle, std::uint64_t seed,
                                double exact_time_limit_s = 3600.0) {
  const Solution s =
      run_solver(g, problem, oracle, Candidates::all(), derive_seed(seed, 1), exact_time_limit_s);
  if (oracle == Algorithm::kExact && !s.optimal)
    throw OracleTimeout("exact oracle did not finish within " + std::to_string(exact_time_limit_s) +
                        " s; use the greedy or local-search oracle instead");
  return labels_from_solution(s, oracle, derive_seed(seed, 2));
}

/// TP / (TP + FN) over the nodes of `mask`; 1 when the mask has no positives.
inline double recall(const NodeSet& predicted, const LabelSet& truth, const NodeSet& mask) {
  std::size_t tp = 0, fn = 0;
  mask.for_each([&](NodeId v) {
    if (!truth.labels[v]) return;
    (predicted.contains(v) ? tp : fn)++;
  });
  return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

inline double recall(const NodeSet& predicted, const LabelSet& truth) {
  return recall(predicted, truth, NodeSet::full(truth.num_nodes()));
}

/// One "node label split" line per node, split being train or val.
/// Header comments record the problem and oracle. `ids`, when given, maps
/// node v to the id written for it.
inline void write_labels(std::ostream& out, const LabelSet& ls, const std::vector<long long>* ids = nullptr) {
  out << "# problem " << to_string(ls.problem) << "\n# oracle " << to_string(ls.oracle) << '\n';
  for (NodeId v = 0; v < ls.labels.size(); ++v)
    out << (ids ? (*ids)[v] : static_cast<long long>(v)) << ' ' << int(ls.labels[v]) << ' ' << (ls.train.contains(v) ? "train" : "val") << '\n';
}

/// Inverse of write_labels. With `ids`, file ids are translated back to
/// positions in `ids`, and every one of them must appear.
inline LabelSet read_labels(std::istream& in, const std::string& source,
                            const std::vector<long long>* ids = nullptr) {
  std::unordered_map<long long, NodeId> index;
  if (ids)
    for (NodeId v = 0; v < ids->size(); ++v) index.emplace((*ids)[v], v);
  LabelSet ls;
  struct Row {
    NodeId node;
    int label;
    bool train;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    if (first == "#") {
      std::string key, value;
      ss >> key >> value;
      if (key == "problem") ls.problem = parse_problem(value);
      if (key == "oracle") ls.oracle = parse_algorithm(value);
      continue;
    }
    Row r{};
    std::string split;
    long long node = -1;
    if (!detail::parse_ll(first, node) || (!ids && node < 0) || !(ss >> r.label >> split) ||
        (r.label != 0 && r.label != 1) || (split != "train" && split != "val"))
      throw ParseError(source, lineno, "expected '<node> <0|1> <train|val>'");
    if (ids) {
      auto it = index.find(node);
      if (it == index.end()) throw ParseError(source, lineno, "node " + first + " is not in the graph");
      r.node = it->second;
    } else {
      r.node = static_cast<NodeId>(node);
    }
    r.train = split == "train";
    rows.push_back(r);
  }
  const std::size_t n = ids ? ids->size() : rows.size();
  if (rows.size() != n) throw ParseError(source, 0, "label count does not match the graph");
  ls.labels.assign(n, 0);
  ls.train = NodeSet(n);
  ls.val = NodeSet(n);
  std::vector<char> seen(n, 0);
  for (const Row& r : rows) {
    if (r.node >= n || seen[r.node]) throw ParseError(source, 0, "node ids must be 0..n-1, each once");
    seen[r.node] = 1;
    ls.labels[r.node] = static_cast<std::uint8_t>(r.label);
    (r.train ? ls.train : ls.val).insert(r.node);
  }
  return ls;
}

inline void save_labels(const LabelSet& ls, const std::string& path, const std::vector<long long>* ids = nullptr) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  write_labels(out, ls, ids);
}

inline LabelSet load_labels(const std::string& path, const std::vector<long long>* ids = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open label file");
  return read_labels(in, path, ids);
}

}  // namespace combhelper
