#pragma once

#include <cstddef>
#include <cstdint>

#include "kesm/types.h"

namespace kesm {

inline constexpr int kDefaultDim = 128;
inline constexpr int kDefaultWindow = 3;

// All learned tensors of the salience model.
struct ModelParams {
  int dim = kDefaultDim;
  int window = kDefaultWindow;
  RowMatrix embeddings;     // [vocab x dim], shared by words and entities
  Matrix conv;              // [dim x window*dim], description CNN filters
  Matrix projection;        // [dim x 2*dim], maps (entity ++ description) to KEE
  Vector salience_weights;  // [2K], over entity kernels ++ word kernels
  double salience_bias = 0.0;

  static ModelParams zeros(std::size_t vocab_size, int dim, int window, std::size_t num_kernels);

  // Embeddings ~ U[-init_scale, init_scale]; conv/projection Glorot-uniform;
  // salience weights ~ U[-0.01, 0.01]; bias 0.
  static ModelParams random(std::size_t vocab_size, int dim, int window, std::size_t num_kernels,
                            std::uint64_t seed, double init_scale = 0.01);

  std::size_t vocab_size() const { return static_cast<std::size_t>(embeddings.rows()); }
  std::size_t num_kernels() const { return static_cast<std::size_t>(salience_weights.size()) / 2; }

  // Throws ValidationError when a tensor does not match (dim, window, K).
  void check_shapes(std::size_t vocab_size, std::size_t num_kernels) const;
  bool all_finite() const;
  std::size_t num_parameters() const;
};

// Same shape as ModelParams; used for gradients and optimizer moments.
using ParamTensors = ModelParams;

}  // namespace kesm
