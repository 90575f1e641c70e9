#include "kesm/linear_ranker.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kesm/errors.h"

namespace kesm {

LinearRankerParams LinearRankerParams::zeros(std::vector<std::string> feature_names) {
  LinearRankerParams p;
  const auto n = static_cast<Eigen::Index>(feature_names.size());
  p.feature_names = std::move(feature_names);
  p.weights = Vector::Zero(n);
  p.mean = Vector::Zero(n);
  p.scale = Vector::Ones(n);
  return p;
}

Vector standardize(const LinearRankerParams& params, const Vector& features) {
  if (features.size() != static_cast<Eigen::Index>(params.dimension())) {
    throw ValidationError("feature dimension " + std::to_string(features.size()) +
                          " does not match ranker dimension " +
                          std::to_string(params.dimension()));
  }
  return ((features - params.mean).array() / params.scale.array()).matrix();
}

double linear_score(const LinearRankerParams& params, const Vector& features) {
  return params.weights.dot(standardize(params, features));
}

double linear_score(const LinearRankerParams& params,
                    const std::map<std::string, double>& features) {
  for (const auto& [name, value] : features) {
    if (std::find(params.feature_names.begin(), params.feature_names.end(), name) ==
        params.feature_names.end()) {
      throw ValidationError("unknown feature '" + name + "'");
    }
  }
  Vector x(static_cast<Eigen::Index>(params.dimension()));
  for (std::size_t i = 0; i < params.dimension(); ++i) {
    auto it = features.find(params.feature_names[i]);
    if (it == features.end()) throw ValidationError("missing feature '" + params.feature_names[i] + "'");
    x[static_cast<Eigen::Index>(i)] = it->second;
  }
  return linear_score(params, x);
}

double linear_objective(const LinearRankerParams& params, std::span<const FeaturePair> pairs,
                        double lambda) {
  double hinge = 0.0;
  for (const auto& p : pairs) {
    hinge += std::max(0.0, 1.0 - linear_score(params, p.positive) + linear_score(params, p.negative));
  }
  const double mean = pairs.empty() ? 0.0 : hinge / static_cast<double>(pairs.size());
  return mean + lambda * params.weights.squaredNorm();
}

LinearTrainResult train_linear_pairwise(std::span<const FeaturePair> pairs,
                                        std::vector<std::string> feature_names,
                                        const LinearTrainConfig& config) {
  if (pairs.empty()) throw ValidationError("train_linear_pairwise: no training pairs");
  if (config.lambda < 0.0 || config.lr <= 0.0 || config.epochs < 1) {
    throw ValidationError("train_linear_pairwise: invalid configuration");
  }
  const auto n = static_cast<Eigen::Index>(feature_names.size());
  for (const auto& p : pairs) {
    if (p.positive.size() != n || p.negative.size() != n) {
      throw ValidationError("train_linear_pairwise: feature dimension mismatch");
    }
  }

  LinearRankerParams params = LinearRankerParams::zeros(std::move(feature_names));
  // Statistics over every feature vector that appears in a pair.
  const double count = 2.0 * static_cast<double>(pairs.size());
  Vector sum = Vector::Zero(n);
  for (const auto& p : pairs) sum += p.positive + p.negative;
  params.mean = sum / count;
  Vector var = Vector::Zero(n);
  for (const auto& p : pairs) {
    var += (p.positive - params.mean).cwiseAbs2() + (p.negative - params.mean).cwiseAbs2();
  }
  params.scale = (var / count).cwiseSqrt();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(params.scale[i] > 1e-12)) params.scale[i] = 1.0;
  }

  std::vector<Vector> diffs;
  diffs.reserve(pairs.size());
  for (const auto& p : pairs) diffs.push_back(standardize(params, p.positive) - standardize(params, p.negative));

  LinearTrainResult result;
  result.initial_objective = linear_objective(params, pairs, config.lambda);
  LinearRankerParams best = params;
  double best_objective = result.initial_objective;

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      ++step;
      const double lr = config.lr / std::sqrt(static_cast<double>(step));
      if (1.0 - params.weights.dot(diffs[i]) > 0.0) params.weights += lr * diffs[i];
      params.weights /= 1.0 + 2.0 * lr * config.lambda;
    }
    const double objective = linear_objective(params, pairs, config.lambda);
    result.epoch_objective.push_back(objective);
    if (objective < best_objective) {
      best_objective = objective;
      best = params;
    }
  }
  result.params = std::move(best);
  result.final_objective = best_objective;
  return result;
}

}  // namespace kesm
