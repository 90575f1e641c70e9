#include "kesm/ranking.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "kesm/errors.h"
#include "kesm/kim.h"

namespace kesm {

Query encode_query(const RawQuery& raw, const Vocabulary& vocab) {
  Query q;
  q.query_id = raw.query_id;
  q.words = raw.words;
  for (const auto& e : raw.entities) q.entities.push_back(vocab.entity_index(e));
  return q;
}

Vector query_doc_features(const Query& query, const Document& doc,
                          const DescriptionStore& descriptions, const ModelParams& params,
                          const KernelBank& bank, double floor) {
  if (query.entities.empty()) {
    throw ValidationError("query '" + query.query_id + "' has no entities");
  }
  if (doc.mentions.empty()) {
    throw ValidationError("document '" + doc.doc_id + "' has no entity mentions");
  }
  const double mentions = static_cast<double>(doc.mentions.size());
  DocumentContext ctx(doc, descriptions, params);
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(2 * bank.size()));
  for (Index e : query.entities) {
    const Vector kernels = ctx.kim(e, bank).concat();
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
      psi[k] += std::log(std::max(kernels[k] / mentions, floor));
    }
  }
  return psi;
}

Vector all_floor_features(std::size_t num_kernels, std::size_t query_entities, double floor) {
  const double n = static_cast<double>(std::max<std::size_t>(query_entities, 1));
  return Vector::Constant(static_cast<Eigen::Index>(2 * num_kernels), n * std::log(floor));
}

std::vector<std::string> ranking_feature_names(std::size_t num_kernels) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < num_kernels; ++k) names.push_back("entity_kernel_" + std::to_string(k));
  for (std::size_t k = 0; k < num_kernels; ++k) names.push_back("word_kernel_" + std::to_string(k));
  names.push_back("base_score");
  return names;
}

double rank_score(const Vector& features, double base_score, const RankerParams& ranker) {
  Vector x(features.size() + 1);
  x << features, base_score;
  return linear_score(ranker, x);
}

int fold_of(const std::string& query_id, int folds) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : query_id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return static_cast<int>(h % static_cast<std::uint64_t>(folds));
}

CrossValidationResult train_ranker(const std::vector<RankingInstance>& instances,
                                   const std::vector<std::string>& feature_names,
                                   const RankerTrainConfig& config) {
  if (config.folds < 2) throw ValidationError("cross validation needs at least 2 folds");
  const auto dim = static_cast<Eigen::Index>(feature_names.size());
  std::vector<std::string> query_order;
  std::map<std::string, std::vector<std::size_t>> by_query;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].features.size() != dim) {
      throw ValidationError("instance (" + instances[i].query_id + ", " + instances[i].doc_id +
                            ") has " + std::to_string(instances[i].features.size()) +
                            " features, expected " + std::to_string(dim));
    }
    auto [it, fresh] = by_query.try_emplace(instances[i].query_id);
    if (fresh) query_order.push_back(instances[i].query_id);
    it->second.push_back(i);
  }

  CrossValidationResult result;
  std::map<std::string, std::vector<FeaturePair>> query_pairs;
  for (const auto& q : query_order) {
    result.query_fold[q] = fold_of(q, config.folds);
    std::vector<FeaturePair>& pairs = query_pairs[q];
    for (std::size_t i : by_query[q]) {
      if (instances[i].grade <= 0) continue;
      for (std::size_t j : by_query[q]) {
        if (instances[j].grade > 0) continue;
        pairs.push_back({instances[i].features, instances[j].features});
      }
    }
    if (pairs.empty()) ++result.skipped_queries;
  }

  for (int fold = 0; fold < config.folds; ++fold) {
    std::vector<FeaturePair> train;
    for (const auto& q : query_order) {
      if (result.query_fold[q] == fold) continue;
      const auto& pairs = query_pairs[q];
      train.insert(train.end(), pairs.begin(), pairs.end());
    }
    if (train.empty()) {
      result.fold_params.push_back(RankerParams::zeros(feature_names));
      continue;
    }
    LinearTrainConfig linear = config.linear;
    linear.seed = config.linear.seed + static_cast<std::uint64_t>(fold);
    result.fold_params.push_back(train_linear_pairwise(train, feature_names, linear).params);
  }

  for (const auto& inst : instances) {
    const RankerParams& params =
        result.fold_params[static_cast<std::size_t>(result.query_fold[inst.query_id])];
    result.scores[{inst.query_id, inst.doc_id}] = linear_score(params, inst.features);
  }
  return result;
}

std::vector<RunEntry> rerank_run(
    const std::vector<RunEntry>& base_run,
    const std::map<std::pair<std::string, std::string>, double>& scores, const std::string& tag,
    RerankStats* stats) {
  std::vector<std::string> query_order;
  std::map<std::string, std::vector<const RunEntry*>> by_query;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : base_run) {
    if (!seen.insert({e.query_id, e.doc_id}).second) {
      throw ValidationError("duplicate run entry (" + e.query_id + ", " + e.doc_id + ")");
    }
    auto [it, fresh] = by_query.try_emplace(e.query_id);
    if (fresh) query_order.push_back(e.query_id);
    it->second.push_back(&e);
  }

  struct Candidate {
    const RunEntry* base;
    double score;
  };
  std::vector<RunEntry> out;
  out.reserve(base_run.size());
  for (const auto& q : query_order) {
    std::vector<Candidate> candidates;
    for (const RunEntry* e : by_query[q]) {
      auto it = scores.find({e->query_id, e->doc_id});
      double s = -std::numeric_limits<double>::infinity();
      if (it != scores.end()) {
        s = it->second;
      } else if (stats) {
        ++stats->missing_scores;
      }
      candidates.push_back({e, s});
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.base->rank != b.base->rank) return a.base->rank < b.base->rank;
      return a.base->doc_id < b.base->doc_id;
    });
    int rank = 0;
    for (const auto& c : candidates) {
      out.push_back({c.base->query_id, c.base->doc_id, ++rank, c.score, tag});
    }
  }
  return out;
}

}  // namespace kesm
