#include "kesm/baselines.h"

#include <algorithm>
#include <limits>

#include "kesm/errors.h"
#include "kesm/kee.h"
#include "kesm/salience.h"

namespace kesm {
namespace {

double precision_at_1(const Document& doc, const std::map<Index, double>& scores) {
  std::vector<ScoredEntity> ranked;
  for (const auto& [e, s] : scores) ranked.push_back({e, s});
  sort_by_score(ranked);
  return !ranked.empty() && doc.is_salient(ranked.front().entity) ? 1.0 : 0.0;
}

}  // namespace

std::map<Index, double> frequency_scores(const Document& doc) {
  std::map<Index, double> out;
  for (const auto& m : doc.mentions) out[m.entity] += 1.0;
  return out;
}

std::map<Index, double> pagerank_scores(const Document& doc, const DescriptionStore& descriptions,
                                        const ModelParams& params, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("pagerank alpha must be in [0, 1]");
  const std::map<Index, double> freq = frequency_scores(doc);
  if (freq.empty()) throw ValidationError("pagerank: document '" + doc.doc_id + "' has no entities");

  const auto n = static_cast<Eigen::Index>(freq.size());
  std::vector<Index> entities;
  Vector p(n);
  double total = 0.0;
  for (const auto& [e, c] : freq) {
    p[static_cast<Eigen::Index>(entities.size())] = c;
    entities.push_back(e);
    total += c;
  }
  p /= total;

  std::vector<Vector> vectors;
  vectors.reserve(entities.size());
  for (Index e : entities) vectors.push_back(kee_embed(e, descriptions, params));

  // Row-stochastic transition matrix; one step of the walk is A^T p.
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) a(i, j) = std::max(0.0, cosine(vectors[static_cast<std::size_t>(i)],
                                                 vectors[static_cast<std::size_t>(j)]));
    }
    const double row = a.row(i).sum();
    if (row > 0.0) {
      a.row(i) /= row;
    } else {
      a.row(i).setConstant(1.0 / static_cast<double>(n));
    }
  }
  const Vector walked = a.transpose() * p;
  const Vector score = (1.0 - alpha) * p + alpha * walked;

  std::map<Index, double> out;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    out[entities[i]] = score[static_cast<Eigen::Index>(i)];
  }
  return out;
}

double fit_pagerank_alpha(std::span<const Document> dev, const DescriptionStore& descriptions,
                          const ModelParams& params) {
  double best_alpha = 0.0;
  double best = -1.0;
  for (int step = 0; step <= 10; ++step) {
    const double alpha = 0.1 * step;
    double hits = 0.0;
    for (const auto& doc : dev) {
      if (doc.salient.empty() || doc.mentions.empty()) continue;
      hits += precision_at_1(doc, pagerank_scores(doc, descriptions, params, alpha));
    }
    if (hits > best) {
      best = hits;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

Vector EntityFeatureVector::to_vector() const {
  Vector v(3);
  v << frequency, first_location, embedding_vote;
  return v;
}

const std::vector<std::string>& letor_feature_names() {
  static const std::vector<std::string> names = {"frequency", "first_location", "embedding_vote"};
  return names;
}

std::map<Index, EntityFeatureVector> letor_features(const Document& doc,
                                                    const ModelParams& params) {
  std::map<Index, EntityFeatureVector> out;
  std::map<Index, std::int32_t> first;
  for (const auto& m : doc.mentions) {
    out[m.entity].frequency += 1.0;
    auto it = first.find(m.entity);
    if (it == first.end() || m.position < it->second) first[m.entity] = m.position;
  }
  const double length = static_cast<double>(std::max<std::size_t>(doc.words.size(), 1));
  for (auto& [e, f] : out) {
    f.first_location = static_cast<double>(first[e]) / length;
    for (const auto& [other, g] : out) {
      if (other == e) continue;
      f.embedding_vote +=
          g.frequency * cosine(params.embeddings.row(e).transpose(), params.embeddings.row(other).transpose());
    }
  }
  return out;
}

std::vector<FeaturePair> letor_training_pairs(std::span<const Document> docs,
                                              const ModelParams& params) {
  std::vector<FeaturePair> pairs;
  for (const auto& doc : docs) {
    if (doc.salient.empty()) continue;
    const auto features = letor_features(doc, params);
    for (Index pos : doc.salient) {
      for (Index neg : doc.non_salient_entities()) {
        pairs.push_back({features.at(pos).to_vector(), features.at(neg).to_vector()});
      }
    }
  }
  return pairs;
}

std::map<Index, double> letor_scores(const Document& doc, const ModelParams& params,
                                     const LinearRankerParams& ranker) {
  std::map<Index, double> out;
  for (const auto& [e, f] : letor_features(doc, params)) out[e] = linear_score(ranker, f.to_vector());
  return out;
}

}  // namespace kesm
