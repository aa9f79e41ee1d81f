#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "combhelper/error.hpp"
#include "combhelper/gcn.hpp"
#include "combhelper/node_set.hpp"

namespace combhelper {

/// Row-wise log-softmax, z - logsumexp(z), shifted by the row maximum. No
/// probability floor: a floored log flattens the loss for saturated rows
/// while the gradient keeps moving.
inline Matrix log_softmax_rows(const Matrix& z) {
  Matrix out(z.rows(), z.cols());
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double mx = z.row(r).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < z.cols(); ++c) sum += std::exp(z(r, c) - mx);
    const double lse = mx + std::log(sum);
    for (Eigen::Index c = 0; c < z.cols(); ++c) out(r, c) = z(r, c) - lse;
  }
  return out;
}

inline Matrix softmax_rows(const Matrix& z) { return log_softmax_rows(z).array().exp(); }

struct LossResult {
  double value = 0.0;
  /// dLoss/dLogits, zero on rows outside the mask.
  Matrix grad;
};

/// Weighted cross-entropy over masked nodes: -sum w_v y_v . log softmax(z_v).
/// `weights` is indexed by node id.
inline LossResult supervised_loss(const Matrix& logits, const Matrix& targets,
                                  std::span<const double> weights, const NodeSet& mask) {
  if (targets.rows() != logits.rows() || targets.cols() != logits.cols())
    throw ShapeError("target shape does not match logits");
  if (weights.size() != static_cast<std::size_t>(logits.rows()))
    throw ShapeError("one weight per node is required");
  const Matrix logp = log_softmax_rows(logits);
  const Matrix p = logp.array().exp();
  LossResult r{0.0, Matrix::Zero(logits.rows(), logits.cols())};
  mask.for_each([&](NodeId v) {
    const double w = weights[v];
    for (Eigen::Index c = 0; c < logits.cols(); ++c)
      if (targets(v, c) != 0.0) r.value -= w * targets(v, c) * logp(v, c);
    r.grad.row(v) = w * (p.row(v) - targets.row(v));
  });
  return r;
}

/// Distillation cross-entropy at temperature T:
/// -sum softmax(z_t / T) . log softmax(z_s / T), gradient (p_s - p_t) / T.
inline LossResult kd_loss(const Matrix& student, const Matrix& teacher, double temperature,
                          const NodeSet& mask) {
  if (!(temperature > 0.0)) throw InvalidParameter("temperature must be positive");
  if (student.rows() != teacher.rows() || student.cols() != teacher.cols())
    throw ShapeError("student and teacher logits differ in shape");
  const Matrix log_ps = log_softmax_rows(student / temperature);
  const Matrix ps = log_ps.array().exp();
  const Matrix pt = softmax_rows(teacher / temperature);
  LossResult r{0.0, Matrix::Zero(student.rows(), student.cols())};
  mask.for_each([&](NodeId v) {
    for (Eigen::Index c = 0; c < student.cols(); ++c)
      if (pt(v, c) != 0.0) r.value -= pt(v, c) * log_ps(v, c);
    r.grad.row(v) = (ps.row(v) - pt.row(v)) / temperature;
  });
  return r;
}

/// lambda * kd_loss + (1 - lambda) * weighted supervised_loss.
inline LossResult combined_loss(const Matrix& student, const Matrix& teacher,
                                const Matrix& targets, std::span<const double> weights,
                                const NodeSet& mask, double temperature, double lambda) {
  LossResult kd = kd_loss(student, teacher, temperature, mask);
  LossResult sup = supervised_loss(student, targets, weights, mask);
  return {lambda * kd.value + (1.0 - lambda) * sup.value, lambda * kd.grad + (1.0 - lambda) * sup.grad};
}

}  // namespace combhelper
