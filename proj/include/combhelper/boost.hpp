#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "combhelper/gcn.hpp"
#include "combhelper/labels.hpp"

namespace combhelper {

inline constexpr double kErrorRateClamp = 1e-6;

/// Per-node loss weights for the student's supervised term.
struct BoostWeights {
  /// Indexed by node id; zero outside the training mask.
  std::vector<double> w;
  /// Teacher error rate on the training mask, after clamping.
  double epsilon = 0.5;
};

/// Class predicted by argmax of each logit row; ties go to class 1.
inline std::vector<std::uint8_t> predicted_classes(const Matrix& logits) {
  std::vector<std::uint8_t> cls(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index v = 0; v < logits.rows(); ++v) cls[v] = logits(v, 1) >= logits(v, 0) ? 1 : 0;
  return cls;
}

/// AdaBoost-style reweighting from a fixed set of teacher predictions.
///
/// Starting from 1/|train|, correctly classified nodes are scaled by
/// exp(-alpha) and misclassified ones by exp(+alpha) with
/// alpha = ln((1 - eps) / eps) / 2. Each weight is then multiplied by the
/// train-normalized degree (MVC) or inverse degree (MIS, degree 0 counted as
/// 1), and the result is rescaled to sum to |train|.
inline BoostWeights boost_weights_from_predictions(const Graph& g, const LabelSet& labels,
                                                   const std::vector<std::uint8_t>& predicted,
                                                   Problem problem) {
  const std::size_t n = labels.num_nodes();
  BoostWeights bw;
  bw.w.assign(n, 0.0);
  const auto train = labels.train.to_vector();
  if (train.empty()) return bw;
  const double n_train = static_cast<double>(train.size());

  std::size_t wrong = 0;
  for (NodeId v : train) wrong += predicted[v] != labels.labels[v];
  bw.epsilon = std::clamp(static_cast<double>(wrong) / n_train, kErrorRateClamp, 1.0 - kErrorRateClamp);
  const double alpha = 0.5 * std::log((1.0 - bw.epsilon) / bw.epsilon);

  auto degree_term = [&](NodeId v) {
    const double d = static_cast<double>(g.degree(v));
    return problem == Problem::kMvc ? d : 1.0 / std::max(d, 1.0);
  };
  double degree_sum = 0.0;
  for (NodeId v : train) degree_sum += degree_term(v);

  double total = 0.0;
  for (NodeId v : train) {
    double w = 1.0 / n_train;
    w *= std::exp(predicted[v] == labels.labels[v] ? -alpha : alpha);
    w *= degree_sum > 0.0 ? degree_term(v) / degree_sum : 1.0 / n_train;
    bw.w[v] = w;
    total += w;
  }
  for (NodeId v : train) bw.w[v] *= n_train / total;
  return bw;
}

/// Boost weights from the teacher's eval-mode predictions.
inline BoostWeights boost_weights(const GcnParams& teacher, const Graph& g, const Matrix& x,
                                  const LabelSet& labels, Problem problem) {
  const Matrix logits = forward(teacher, g, x, ForwardMode::eval());
  return boost_weights_from_predictions(g, labels, predicted_classes(logits), problem);
}

/// Unit weight on every training node (distillation without boosting).
inline BoostWeights uniform_weights(const LabelSet& labels) {
  BoostWeights bw;
  bw.w.assign(labels.num_nodes(), 0.0);
  labels.train.for_each([&](NodeId v) { bw.w[v] = 1.0; });
  return bw;
}

}  // namespace combhelper
