#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kesm/types.h"

namespace kesm {

// Linear scorer over z-scored features. Standardization statistics are
// computed on the training data and travel with the weights.
struct LinearRankerParams {
  std::vector<std::string> feature_names;
  Vector weights;
  Vector mean;
  Vector scale;  // standard deviation, replaced by 1 when below 1e-12

  std::size_t dimension() const { return feature_names.size(); }
  // Zero weights with identity standardization.
  static LinearRankerParams zeros(std::vector<std::string> feature_names);
};

struct FeaturePair {
  Vector positive;
  Vector negative;
};

struct LinearTrainConfig {
  double lambda = 1e-4;
  double lr = 0.01;  // decays as lr / sqrt(t) over SGD steps
  int epochs = 50;
  std::uint64_t seed = 1;
};

struct LinearTrainResult {
  LinearRankerParams params;
  std::vector<double> epoch_objective;  // objective of the iterate after each epoch
  double initial_objective = 0.0;
  double final_objective = 0.0;         // objective of the returned weights
};

// Minimizes mean_i max(0, 1 - w.x+_i + w.x-_i) + lambda |w|^2 by seeded SGD
// over shuffled pairs. The L2 term is applied as an implicit shrink so large
// lambda stays stable. Returns the epoch iterate with the lowest objective.
// Throws ValidationError on an empty input or inconsistent dimensions.
LinearTrainResult train_linear_pairwise(std::span<const FeaturePair> pairs,
                                        std::vector<std::string> feature_names,
                                        const LinearTrainConfig& config = {});

// Mean hinge + lambda |w|^2 of `params` on `pairs`.
double linear_objective(const LinearRankerParams& params, std::span<const FeaturePair> pairs,
                        double lambda);

Vector standardize(const LinearRankerParams& params, const Vector& features);

// weights . standardized(features). Throws ValidationError on a dimension
// mismatch.
double linear_score(const LinearRankerParams& params, const Vector& features);
// Named variant; throws ValidationError on an unknown or missing name.
double linear_score(const LinearRankerParams& params, const std::map<std::string, double>& features);

}  // namespace kesm
