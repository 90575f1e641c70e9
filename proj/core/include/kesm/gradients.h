#pragma once

#include <span>
#include <vector>

#include "kesm/document.h"
#include "kesm/kernel_bank.h"
#include "kesm/model_params.h"

namespace kesm {

struct BatchGradients {
  ParamTensors grads;  // same shapes as the model parameters
  double loss = 0.0;   // summed hinge loss
  std::size_t active_pairs = 0;
};

// Summed pairwise hinge loss of `batch` and its exact gradient with respect to
// every parameter tensor. Pairs exactly at the margin count as inactive; max
// pooling routes gradient to the first maximizing window; clamped or
// zero-norm cosines have zero gradient. Per-document work may run on
// `threads` threads; the result does not depend on the thread count.
BatchGradients compute_gradients(std::span<const SaliencePair> batch,
                                 std::span<const Document> docs,
                                 const DescriptionStore& descriptions, const ModelParams& params,
                                 const KernelBank& bank, int threads = 1);

// Summed loss only.
double batch_loss(std::span<const SaliencePair> batch, std::span<const Document> docs,
                  const DescriptionStore& descriptions, const ModelParams& params,
                  const KernelBank& bank, int threads = 1);

}  // namespace kesm
