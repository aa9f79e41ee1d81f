#pragma once

#include <cmath>
#include <vector>

#include "combhelper/error.hpp"
#include "combhelper/gcn.hpp"

namespace combhelper {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamMoments {
  Matrix first;
  Matrix second;
};

/// One bias-corrected Adam update of a single matrix at step t (t >= 1).
inline void adam_update(Matrix& param, const Matrix& grad, AdamMoments& m, long step, double lr,
                        const AdamConfig& cfg = {}) {
  if (m.first.size() == 0) {
    m.first = Matrix::Zero(param.rows(), param.cols());
    m.second = Matrix::Zero(param.rows(), param.cols());
  }
  if (grad.rows() != param.rows() || grad.cols() != param.cols())
    throw ShapeError("gradient shape does not match parameter");
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  for (Eigen::Index i = 0; i < param.size(); ++i) {
    const double g = grad.data()[i];
    double& a = m.first.data()[i];
    double& b = m.second.data()[i];
    a = cfg.beta1 * a + (1.0 - cfg.beta1) * g;
    b = cfg.beta2 * b + (1.0 - cfg.beta2) * g * g;
    param.data()[i] -= lr * (a / c1) / (std::sqrt(b / c2) + cfg.epsilon);
  }
}

/// Optimizer state for a whole GcnParams.
struct AdamState {
  AdamConfig config;
  long step = 0;
  std::vector<AdamMoments> self;
  std::vector<AdamMoments> neighbor;
  std::vector<AdamMoments> bias;
};

inline void adam_step(GcnParams& params, const GcnGradients& grads, AdamState& state, double lr) {
  if (grads.size() != params.layers.size()) throw ShapeError("gradient layer count mismatch");
  state.self.resize(params.layers.size());
  state.neighbor.resize(params.layers.size());
  state.bias.resize(params.layers.size());
  ++state.step;
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    adam_update(params.layers[k].self, grads[k].self, state.self[k], state.step, lr, state.config);
    adam_update(params.layers[k].neighbor, grads[k].neighbor, state.neighbor[k], state.step, lr,
                state.config);
    if (params.layers[k].bias.size() > 0)
      adam_update(params.layers[k].bias, grads[k].bias, state.bias[k], state.step, lr, state.config);
  }
  ++params.version;
}

}  // namespace combhelper
