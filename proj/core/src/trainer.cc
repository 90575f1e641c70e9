#include "kesm/trainer.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "kesm/adam.h"
#include "kesm/errors.h"
#include "kesm/gradients.h"
#include "kesm/parallel.h"
#include "kesm/salience.h"

namespace kesm {

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("train config: ") + what);
  };
  require(batch_size >= 1, "batch_size must be >= 1");
  require(lr >= 0.0, "lr must be >= 0");
  require(patience >= 1, "patience must be >= 1");
  require(eval_interval >= 1, "eval_interval must be >= 1");
  require(max_epochs >= 1, "max_epochs must be >= 1");
  require(max_pairs >= 1, "max_pairs must be >= 1");
  require(dim >= 1 && window >= 1, "dim and window must be >= 1");
  require(init_scale > 0.0, "init_scale must be > 0");
  require(threads >= 1, "threads must be >= 1");
}

ModelParams initial_params(const Vocabulary& vocab, std::size_t num_kernels,
                           const TrainConfig& config, std::span<const InitialEmbedding> init) {
  ModelParams params = ModelParams::random(vocab.size(), config.dim, config.window, num_kernels,
                                           config.seed, config.init_scale);
  for (const auto& row : init) {
    if (static_cast<int>(row.vector.size()) != config.dim) {
      throw ValidationError("initial embedding for '" + row.symbol + "' has dimension " +
                            std::to_string(row.vector.size()) + ", expected " +
                            std::to_string(config.dim));
    }
    const bool known = row.kind == SymbolKind::kWord ? vocab.has_word(row.symbol)
                                                     : vocab.has_entity(row.symbol);
    if (!known) continue;
    const Index i = row.kind == SymbolKind::kWord ? vocab.word_index(row.symbol)
                                                  : vocab.entity_index(row.symbol);
    for (int j = 0; j < config.dim; ++j) params.embeddings(i, j) = row.vector[static_cast<std::size_t>(j)];
  }
  return params;
}

std::vector<SaliencePair> collect_pairs(std::span<const Document> docs, std::uint64_t seed,
                                        std::size_t max_pairs) {
  std::vector<SaliencePair> pairs;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto p = make_salience_pairs(docs[i], i, seed + 0x9E3779B97F4A7C15ULL * (i + 1), max_pairs);
    pairs.insert(pairs.end(), p.begin(), p.end());
  }
  return pairs;
}

double dev_precision_at_1(std::span<const Document> docs, const DescriptionStore& descriptions,
                          const ModelParams& params, const KernelBank& bank, int threads) {
  std::vector<int> hit(docs.size(), -1);
  parallel_for(docs.size(), threads, [&](std::size_t i) {
    const Document& doc = docs[i];
    if (doc.salient.empty()) return;
    const auto ranked = rank_entities(doc, descriptions, params, bank);
    hit[i] = !ranked.empty() && doc.is_salient(ranked.front().entity) ? 1 : 0;
  });
  std::size_t units = 0;
  std::size_t hits = 0;
  for (int h : hit) {
    if (h < 0) continue;
    ++units;
    hits += static_cast<std::size_t>(h);
  }
  return units == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(units);
}

TrainResult train_salience(std::span<const Document> train, std::span<const Document> dev,
                           const DescriptionStore& descriptions, const KernelBank& bank,
                           const ModelParams& init, const TrainConfig& config,
                           const TrainObserver& observer) {
  config.validate();
  if (train.empty()) throw ValidationError("training split is empty");
  if (dev.empty()) throw ValidationError("dev split is empty");
  if (std::none_of(dev.begin(), dev.end(), [](const Document& d) { return !d.salient.empty(); })) {
    throw ValidationError("dev split has no salient labels; Precision@1 is undefined");
  }

  const std::vector<SaliencePair> pairs = collect_pairs(train, config.seed, config.max_pairs);
  if (pairs.empty()) throw ValidationError("training split yields no salience pairs");

  TrainResult result;
  ModelParams params = init;
  OptimizerState state(params, AdamConfig{config.lr});

  auto evaluate = [&](int epoch) {
    DevEvaluation e{result.batches, epoch,
                    dev_precision_at_1(dev, descriptions, params, bank, config.threads)};
    result.history.push_back(e);
    if (observer) observer(e);
    return e.precision_at_1;
  };

  result.params = params;
  result.best_precision_at_1 = evaluate(0);
  int stale = 0;

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<SaliencePair> batch;
  batch.reserve(static_cast<std::size_t>(config.batch_size));

  auto checkpoint = [&](int epoch) {
    const double p1 = evaluate(epoch);
    if (p1 > result.best_precision_at_1) {
      result.best_precision_at_1 = p1;
      result.params = params;
      stale = 0;
    } else {
      ++stale;
    }
    return stale >= config.patience;
  };

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t epoch_pairs = 0;
    bool evaluated_last = false;
    for (std::size_t start = 0; start < order.size(); start += batch.capacity()) {
      batch.clear();
      const std::size_t end = std::min(order.size(), start + batch.capacity());
      for (std::size_t i = start; i < end; ++i) batch.push_back(pairs[order[i]]);
      BatchGradients g = compute_gradients(batch, train, descriptions, params, bank, config.threads);
      epoch_loss += g.loss;
      epoch_pairs += batch.size();
      adam_step(params, g.grads, state);
      ++result.batches;
      evaluated_last = false;
      if (result.batches % config.eval_interval == 0) {
        evaluated_last = true;
        if (checkpoint(epoch)) {
          result.early_stopped = true;
          break;
        }
      }
    }
    result.epoch_mean_loss.push_back(epoch_loss / static_cast<double>(std::max<std::size_t>(epoch_pairs, 1)));
    if (result.early_stopped) break;
    if (!evaluated_last && checkpoint(epoch)) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

}  // namespace kesm
