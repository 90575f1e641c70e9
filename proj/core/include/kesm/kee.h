#pragma once

#include <span>
#include <vector>

#include "kesm/document.h"
#include "kesm/model_params.h"
#include "kesm/types.h"

namespace kesm {

// Cosine similarity clamped to [-1, 1]; 0 when either norm is below 1e-12.
// Throws std::invalid_argument on a dimension mismatch.
double cosine(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& v);

inline constexpr double kMinNorm = 1e-12;

// Intermediate values of the description CNN, kept for back-propagation.
struct DescriptionForward {
  std::vector<Index> padded;  // description words, right-padded with Unk_word to >= window
  Matrix windows;             // [window*dim x positions], stacked word embeddings per window
  Matrix responses;           // [dim x positions], conv * windows
  Eigen::VectorXi argmax;     // per output coordinate, first maximizing window
  Vector output;              // [dim]
};

DescriptionForward describe_forward(std::span<const Index> words, const ModelParams& params);

// Max-pooled CNN composition of description word embeddings. Sequences
// shorter than the window are padded with Unk_word; empty -> zero vector.
Vector describe_embedding(std::span<const Index> words, const ModelParams& params);

struct KeeForward {
  Index entity = 0;
  bool has_description = false;
  DescriptionForward description;
  Vector input;   // [2*dim], entity embedding ++ description embedding
  Vector output;  // [dim]
};

KeeForward kee_forward(Index entity, const DescriptionStore& descriptions,
                       const ModelParams& params);

// projection * (embedding(entity) ++ describe_embedding(description)).
// An absent description contributes a zero vector.
Vector kee_embed(Index entity, const DescriptionStore& descriptions, const ModelParams& params);

}  // namespace kesm
