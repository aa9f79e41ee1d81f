#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "combhelper/error.hpp"
#include "combhelper/graph.hpp"
#include "combhelper/rng.hpp"

namespace combhelper {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Weights of one message-passing layer: `self` multiplies the node's own
/// embedding, `neighbor` multiplies the sum of its neighbors' embeddings and
/// `bias` (1 x d_out, or empty when the model has no biases) is added to
/// every row.
struct LayerWeights {
  Matrix self;
  Matrix neighbor;
  Matrix bias;
};

/// Parameters of an L-layer GCN with layer widths dims[0..L].
struct GcnParams {
  std::vector<int> dims;
  std::vector<LayerWeights> layers;
  std::uint64_t seed = 0;
  /// Bumped by every in-place update so stale forward caches are detected.
  std::uint64_t version = 0;

  std::size_t num_layers() const { return layers.size(); }
  bool has_bias() const { return !layers.empty() && layers.front().bias.size() > 0; }

  std::size_t parameter_count() const {
    std::size_t c = 0;
    for (const auto& l : layers)
      c += static_cast<std::size_t>(l.self.size() + l.neighbor.size() + l.bias.size());
    return c;
  }
};

/// Gradients share the parameter layout.
using GcnGradients = std::vector<LayerWeights>;

/// Glorot-uniform initialization: entries uniform in [-a, a] with
/// a = sqrt(6 / (fan_in + fan_out)). The neighbor matrices are further
/// multiplied by `neighbor_scale`; training passes 1 / (average degree) so the
/// summed message starts at the scale of the self term. Biases start at zero.
inline GcnParams init_params(const std::vector<int>& dims, std::uint64_t seed, bool with_bias = true,
                             double neighbor_scale = 1.0) {
  if (!(neighbor_scale > 0.0) || !std::isfinite(neighbor_scale))
    throw InvalidParameter("neighbor init scale must be positive and finite");
  if (dims.size() < 2) throw InvalidParameter("a GCN needs at least an input and an output width");
  for (int d : dims)
    if (d < 1) throw InvalidParameter("layer widths must be positive");
  GcnParams p;
  p.dims = dims;
  p.seed = seed;
  Rng rng(seed);
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const double a = std::sqrt(6.0 / static_cast<double>(dims[k] + dims[k + 1]));
    LayerWeights l{Matrix(dims[k], dims[k + 1]), Matrix(dims[k], dims[k + 1]),
                   with_bias ? Matrix::Zero(1, dims[k + 1]) : Matrix()};
    for (Eigen::Index i = 0; i < l.self.size(); ++i) l.self.data()[i] = rng.uniform(-a, a);
    for (Eigen::Index i = 0; i < l.neighbor.size(); ++i) l.neighbor.data()[i] = neighbor_scale * rng.uniform(-a, a);
    p.layers.push_back(std::move(l));
  }
  return p;
}

inline GcnGradients zero_gradients(const GcnParams& p) {
  GcnGradients g;
  for (const auto& l : p.layers)
    g.push_back({Matrix::Zero(l.self.rows(), l.self.cols()),
                 Matrix::Zero(l.neighbor.rows(), l.neighbor.cols()),
                 Matrix::Zero(l.bias.rows(), l.bias.cols())});
  return g;
}

/// Single input feature per node: degree divided by the average degree of
/// the graph at hand. Unlike deg / max deg this keeps a node's feature stable
/// as BA graphs grow, where the maximum degree keeps rising.
inline Matrix degree_features(const Graph& g) {
  Matrix x(static_cast<Eigen::Index>(g.num_nodes()), 1);
  const double mean = g.num_nodes() == 0 ? 0.0
                                         : 2.0 * static_cast<double>(g.num_edges()) /
                                               static_cast<double>(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    x(v, 0) = mean == 0.0 ? 0.0 : static_cast<double>(g.degree(v)) / mean;
  return x;
}

/// out.row(v) = sum of h.row(u) over neighbors u of v.
inline Matrix aggregate_neighbors(const Graph& g, const Matrix& h) {
  Matrix out = Matrix::Zero(h.rows(), h.cols());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    for (NodeId u : g.neighbors(v)) out.row(v) += h.row(u);
  return out;
}

struct ForwardMode {
  bool train = false;
  double dropout = 0.0;
  std::uint64_t seed = 0;

  static ForwardMode eval() { return {}; }
  static ForwardMode training(double dropout, std::uint64_t seed) { return {true, dropout, seed}; }
};

/// Activations recorded by forward() for backward().
struct ForwardCache {
  bool filled = false;
  std::uint64_t params_version = 0;
  const Graph* graph = nullptr;
  std::vector<Matrix> inputs;      // h(k), k = 0..L-1
  std::vector<Matrix> aggregates;  // neighbor sums of h(k)
  std::vector<Matrix> pre;         // hidden pre-activations
  std::vector<Matrix> masks;       // hidden dropout scale (0 or 1/(1-p))
};

/// h(k+1) = ReLU(h(k) self + (sum over neighbors of h(k)) neighbor + bias) on
/// hidden layers; the last layer has no ReLU and returns the n x 2 logits. Training
/// mode applies inverted dropout after each hidden ReLU.
inline Matrix forward(const GcnParams& params, const Graph& g, const Matrix& x,
                      const ForwardMode& mode, ForwardCache* cache = nullptr) {
  if (params.layers.empty()) throw ShapeError("parameters have no layers");
  if (static_cast<std::size_t>(x.rows()) != g.num_nodes())
    throw ShapeError("feature rows (" + std::to_string(x.rows()) + ") != node count (" +
                     std::to_string(g.num_nodes()) + ")");
  if (x.cols() != params.dims.front())
    throw ShapeError("feature width (" + std::to_string(x.cols()) + ") != input width (" +
                     std::to_string(params.dims.front()) + ")");
  if (mode.train && !(mode.dropout >= 0.0 && mode.dropout < 1.0))
    throw InvalidParameter("dropout rate must be in [0, 1)");

  if (cache) {
    *cache = ForwardCache{};
    cache->params_version = params.version;
    cache->graph = &g;
  }
  Rng rng(mode.seed);
  Matrix h = x;
  const std::size_t last = params.layers.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    const auto& layer = params.layers[k];
    Matrix agg = aggregate_neighbors(g, h);
    Matrix pre = h * layer.self + agg * layer.neighbor;
    if (layer.bias.size() > 0) pre.rowwise() += layer.bias.row(0);
    if (cache) {
      cache->inputs.push_back(std::move(h));
      cache->aggregates.push_back(std::move(agg));
    }
    if (k == last) {
      if (cache) cache->filled = true;
      return pre;
    }
    h = pre.cwiseMax(0.0);
    if (mode.train && mode.dropout > 0.0) {
      const double keep_scale = 1.0 / (1.0 - mode.dropout);
      Matrix mask(h.rows(), h.cols());
      for (Eigen::Index i = 0; i < mask.size(); ++i)
        mask.data()[i] = rng.uniform() < mode.dropout ? 0.0 : keep_scale;
      h = h.cwiseProduct(mask);
      if (cache) cache->masks.push_back(std::move(mask));
    } else if (cache) {
      cache->masks.push_back(Matrix::Ones(h.rows(), h.cols()));
    }
    if (cache) cache->pre.push_back(std::move(pre));
  }
  return h;  // unreachable
}

/// Reverse-mode gradients of a scalar loss with respect to every weight,
/// given dLoss/dLogits and the cache of the matching forward() call.
inline GcnGradients backward(const GcnParams& params, const ForwardCache& cache,
                             const Matrix& grad_logits) {
  if (!cache.filled || cache.params_version != params.version ||
      cache.inputs.size() != params.layers.size())
    throw StaleCacheError("backward needs the cache of a forward pass on the current parameters");
  const Graph& g = *cache.graph;
  if (grad_logits.rows() != cache.inputs.front().rows() || grad_logits.cols() != params.dims.back())
    throw ShapeError("logit gradient shape does not match the forward pass");

  GcnGradients grads(params.layers.size());
  Matrix upstream = grad_logits;
  for (std::size_t k = params.layers.size(); k-- > 0;) {
    Matrix d_pre;
    if (k + 1 == params.layers.size()) {
      d_pre = std::move(upstream);
    } else {
      const Matrix& pre = cache.pre[k];
      d_pre = upstream.cwiseProduct(cache.masks[k]);
      for (Eigen::Index i = 0; i < d_pre.size(); ++i)
        if (pre.data()[i] <= 0.0) d_pre.data()[i] = 0.0;
    }
    grads[k].self = cache.inputs[k].transpose() * d_pre;
    grads[k].neighbor = cache.aggregates[k].transpose() * d_pre;
    if (params.layers[k].bias.size() > 0) grads[k].bias = d_pre.colwise().sum();
    if (k > 0) {
      // The adjacency is symmetric, so the transpose of neighbor summation
      // is neighbor summation.
      upstream = d_pre * params.layers[k].self.transpose() +
                 aggregate_neighbors(g, d_pre * params.layers[k].neighbor.transpose());
    }
  }
  return grads;
}

}  // namespace combhelper
