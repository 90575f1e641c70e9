#pragma once

#include <cstdint>

#include "kesm/model_params.h"

namespace kesm {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class OptimizerState {
 public:
  OptimizerState(const ModelParams& like, AdamConfig config);

  const AdamConfig& config() const { return config_; }
  std::int64_t step() const { return step_; }

 private:
  friend void adam_step(ModelParams& params, const ParamTensors& grads, OptimizerState& state);

  AdamConfig config_;
  ParamTensors first_;
  ParamTensors second_;
  std::int64_t step_ = 0;
};

// One bias-corrected Adam update of every tensor. Throws std::invalid_argument
// when the gradient or state shapes differ from `params`.
void adam_step(ModelParams& params, const ParamTensors& grads, OptimizerState& state);

}  // namespace kesm
