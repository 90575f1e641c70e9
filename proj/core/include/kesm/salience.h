#pragma once

#include <utility>
#include <vector>

#include "kesm/document.h"
#include "kesm/kernel_bank.h"
#include "kesm/kim.h"
#include "kesm/model_params.h"

namespace kesm {

// salience_weights . kim(entity, doc) + salience_bias
double score_entity(Index entity, const Document& doc, const DescriptionStore& descriptions,
                    const ModelParams& params, const KernelBank& bank);
double score_from_kernels(const KernelScores& scores, const ModelParams& params);

// max(0, 1 - score_pos + score_neg)
double hinge_loss(double score_pos, double score_neg);

struct ScoredEntity {
  Index entity;
  double score;
};

// Distinct entities of `doc`, highest score first, ties by ascending index.
std::vector<ScoredEntity> rank_entities(const Document& doc, const DescriptionStore& descriptions,
                                        const ModelParams& params, const KernelBank& bank);

// Orders (entity, score) entries with the same rule as rank_entities.
void sort_by_score(std::vector<ScoredEntity>& entries);

}  // namespace kesm
