#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kesm/document.h"
#include "kesm/kernel_bank.h"
#include "kesm/linear_ranker.h"
#include "kesm/model_params.h"
#include "kesm/trec_io.h"
#include "kesm/vocabulary.h"

namespace kesm {

struct Query {
  std::string query_id;
  std::vector<std::string> words;
  std::vector<Index> entities;
};

// Unknown query entities map to Unk_entity and still contribute.
Query encode_query(const RawQuery& raw, const Vocabulary& vocab);

inline constexpr double kFeatureFloor = 1e-10;

// Psi(q, d) = sum over query entities of log(max(kim(e, d) / |E^d|, floor)),
// elementwise over the 2K kernel dimensions; |E^d| counts mentions. Throws
// ValidationError on an empty query or a document without mentions.
Vector query_doc_features(const Query& query, const Document& doc,
                          const DescriptionStore& descriptions, const ModelParams& params,
                          const KernelBank& bank, double floor = kFeatureFloor);

// Fallback for documents without entities: every component is
// max(|E^q|, 1) * log(floor).
Vector all_floor_features(std::size_t num_kernels, std::size_t query_entities,
                          double floor = kFeatureFloor);

// Feature names for the 2K salience features followed by the base score.
std::vector<std::string> ranking_feature_names(std::size_t num_kernels);

// Linear ranker over [2K salience features ++ base retrieval score].
using RankerParams = LinearRankerParams;

double rank_score(const Vector& features, double base_score, const RankerParams& ranker);

struct RankerTrainConfig {
  int folds = 5;
  LinearTrainConfig linear;
};

// Fold of `query_id` in [0, folds), from a fixed string hash.
int fold_of(const std::string& query_id, int folds);

struct CrossValidationResult {
  std::vector<RankerParams> fold_params;        // zero weights for folds without training pairs
  std::map<std::string, int> query_fold;
  std::map<std::pair<std::string, std::string>, double> scores;  // held-out (query, doc) scores
  std::size_t skipped_queries = 0;             // queries without a relevant/irrelevant pair
};

// Pairwise (grade > 0 vs grade <= 0) linear ranker per fold, trained on the
// other folds' queries; every instance is scored by the model of its own fold.
CrossValidationResult train_ranker(const std::vector<RankingInstance>& instances,
                                   const std::vector<std::string>& feature_names,
                                   const RankerTrainConfig& config);

struct RerankStats {
  std::size_t missing_scores = 0;
};

// Per query, stable sort by new score descending, ties by base rank then doc
// id; ranks renumbered from 1. Missing scores rank as -inf. Throws
// ValidationError on a duplicate (query, doc).
std::vector<RunEntry> rerank_run(const std::vector<RunEntry>& base_run,
                                 const std::map<std::pair<std::string, std::string>, double>& scores,
                                 const std::string& tag, RerankStats* stats = nullptr);

}  // namespace kesm
