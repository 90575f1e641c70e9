#include "kesm/salience.h"

#include <algorithm>

namespace kesm {

double score_from_kernels(const KernelScores& scores, const ModelParams& params) {
  const auto K = scores.entity_kernels.size();
  return params.salience_weights.head(K).dot(scores.entity_kernels) +
         params.salience_weights.tail(K).dot(scores.word_kernels) + params.salience_bias;
}

double score_entity(Index entity, const Document& doc, const DescriptionStore& descriptions,
                    const ModelParams& params, const KernelBank& bank) {
  return score_from_kernels(kim(entity, doc, descriptions, params, bank), params);
}

double hinge_loss(double score_pos, double score_neg) {
  return std::max(0.0, 1.0 - score_pos + score_neg);
}

void sort_by_score(std::vector<ScoredEntity>& entries) {
  std::sort(entries.begin(), entries.end(), [](const ScoredEntity& a, const ScoredEntity& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity < b.entity;
  });
}

std::vector<ScoredEntity> rank_entities(const Document& doc, const DescriptionStore& descriptions,
                                        const ModelParams& params, const KernelBank& bank) {
  std::vector<ScoredEntity> out;
  const std::vector<Index> entities = doc.distinct_entities();
  if (entities.empty()) return out;
  DocumentContext ctx(doc, descriptions, params);
  out.reserve(entities.size());
  for (Index e : entities) out.push_back({e, score_from_kernels(ctx.kim(e, bank), params)});
  sort_by_score(out);
  return out;
}

}  // namespace kesm
