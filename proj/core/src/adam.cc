#include "kesm/adam.h"

#include <cmath>
#include <stdexcept>

namespace kesm {
namespace {

bool same_shape(const ModelParams& a, const ModelParams& b) {
  return a.embeddings.rows() == b.embeddings.rows() && a.embeddings.cols() == b.embeddings.cols() &&
         a.conv.rows() == b.conv.rows() && a.conv.cols() == b.conv.cols() &&
         a.projection.rows() == b.projection.rows() && a.projection.cols() == b.projection.cols() &&
         a.salience_weights.size() == b.salience_weights.size();
}

template <typename P, typename G, typename M>
void update(P& param, const G& grad, M& m, M& v, const AdamConfig& c, double bc1, double bc2) {
  m = c.beta1 * m + (1.0 - c.beta1) * grad;
  v = c.beta2 * v + (1.0 - c.beta2) * grad.cwiseProduct(grad);
  param.array() -= c.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + c.epsilon);
}

}  // namespace

OptimizerState::OptimizerState(const ModelParams& like, AdamConfig config)
    : config_(config),
      first_(ModelParams::zeros(like.vocab_size(), like.dim, like.window, like.num_kernels())),
      second_(first_) {}

void adam_step(ModelParams& params, const ParamTensors& grads, OptimizerState& state) {
  if (!same_shape(params, grads) || !same_shape(params, state.first_)) {
    throw std::invalid_argument("adam_step: gradient or optimizer state shape mismatch");
  }
  const AdamConfig& c = state.config_;
  ++state.step_;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step_));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step_));

  update(params.embeddings, grads.embeddings, state.first_.embeddings, state.second_.embeddings, c,
         bc1, bc2);
  update(params.conv, grads.conv, state.first_.conv, state.second_.conv, c, bc1, bc2);
  update(params.projection, grads.projection, state.first_.projection, state.second_.projection, c,
         bc1, bc2);
  update(params.salience_weights, grads.salience_weights, state.first_.salience_weights,
         state.second_.salience_weights, c, bc1, bc2);

  double& m = state.first_.salience_bias;
  double& v = state.second_.salience_bias;
  m = c.beta1 * m + (1.0 - c.beta1) * grads.salience_bias;
  v = c.beta2 * v + (1.0 - c.beta2) * grads.salience_bias * grads.salience_bias;
  params.salience_bias -= c.lr * (m / bc1) / (std::sqrt(v / bc2) + c.epsilon);
}

}  // namespace kesm
