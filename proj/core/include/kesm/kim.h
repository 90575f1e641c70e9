#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "kesm/document.h"
#include "kesm/kernel_bank.h"
#include "kesm/model_params.h"
#include "kesm/types.h"

namespace kesm {

// phi_k = sum_j exp(-(cos(target, c_j) - mu_k)^2 / (2 sigma_k^2)) over the
// columns c_j of `context` ([dim x n]). Empty context -> zeros.
Vector kernel_pool(const Vector& target, const Matrix& context, const KernelBank& bank);
Vector kernel_pool(const Vector& target, std::span<const Vector> context, const KernelBank& bank);

struct KernelScores {
  Vector entity_kernels;  // [K]
  Vector word_kernels;    // [K]

  // entity_kernels ++ word_kernels.
  Vector concat() const;
};

// Interaction context of one document: KEE vectors of every mention and raw
// embeddings of every token, precomputed once so that many target entities can
// be scored against it.
class DocumentContext {
 public:
  DocumentContext(const Document& doc, const DescriptionStore& descriptions,
                  const ModelParams& params);

  // KEE vector of any vocabulary entity (cached per entity).
  const Vector& entity_vector(Index entity);
  KernelScores kim(Index entity, const KernelBank& bank);

  const Matrix& mention_matrix() const { return mentions_; }
  const Matrix& word_matrix() const { return words_; }

 private:
  const DescriptionStore& descriptions_;
  const ModelParams& params_;
  std::unordered_map<Index, Vector> kee_cache_;
  Matrix mentions_;  // [dim x |E|]
  Matrix words_;     // [dim x |W|]
};

// Kernel scores of `entity` against the mentions and words of `doc`. The
// entity need not occur in the document; its own mentions are part of the
// context when it does.
KernelScores kim(Index entity, const Document& doc, const DescriptionStore& descriptions,
                 const ModelParams& params, const KernelBank& bank);

}  // namespace kesm
