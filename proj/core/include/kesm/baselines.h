#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "kesm/document.h"
#include "kesm/kernel_bank.h"
#include "kesm/linear_ranker.h"
#include "kesm/model_params.h"

namespace kesm {

// Mention counts, no IDF.
std::map<Index, double> frequency_scores(const Document& doc);

// One-step random walk over a positive-cosine graph of KEE vectors, mixed
// with normalized frequency:
//   score = (1 - alpha) p + alpha A^T p
// where A has A[i][j] = max(0, cos(v_i, v_j)) for i != j, rows normalized to 1
// (all-zero rows become uniform). Throws ValidationError when the document
// has no entities or alpha is outside [0, 1].
std::map<Index, double> pagerank_scores(const Document& doc, const DescriptionStore& descriptions,
                                        const ModelParams& params, double alpha);

// Alpha from {0, 0.1, ..., 1} with the best mean Precision@1 on `dev`; ties
// prefer the smaller alpha.
double fit_pagerank_alpha(std::span<const Document> dev, const DescriptionStore& descriptions,
                          const ModelParams& params);

struct EntityFeatureVector {
  double frequency = 0.0;
  double first_location = 0.0;  // first mention position / |words|
  double embedding_vote = 0.0;  // sum over other entities of freq(e') cos(V[e], V[e'])

  Vector to_vector() const;
};

// Names in EntityFeatureVector::to_vector() order.
const std::vector<std::string>& letor_feature_names();

std::map<Index, EntityFeatureVector> letor_features(const Document& doc,
                                                    const ModelParams& params);

// (salient, non-salient) feature pairs for every labeled document.
std::vector<FeaturePair> letor_training_pairs(std::span<const Document> docs,
                                              const ModelParams& params);

std::map<Index, double> letor_scores(const Document& doc, const ModelParams& params,
                                     const LinearRankerParams& ranker);

}  // namespace kesm
