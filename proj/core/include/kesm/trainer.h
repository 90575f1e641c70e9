#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kesm/corpus_io.h"
#include "kesm/document.h"
#include "kesm/kernel_bank.h"
#include "kesm/model_params.h"
#include "kesm/vocabulary.h"

namespace kesm {

struct TrainConfig {
  int batch_size = 64;
  double lr = 1e-3;
  int patience = 3;          // dev evaluations without improvement before stopping
  int eval_interval = 1000;  // batches between dev evaluations; epochs end with one too
  int max_epochs = 10;
  std::uint64_t seed = 1;
  std::size_t max_pairs = kDefaultMaxPairs;
  int dim = kDefaultDim;
  int window = kDefaultWindow;
  double init_scale = 0.01;
  int threads = 1;

  // Throws ValidationError on batch_size < 1, lr < 0, etc.
  void validate() const;
};

struct DevEvaluation {
  std::int64_t batches = 0;  // optimizer steps taken before this evaluation
  int epoch = 0;
  double precision_at_1 = 0.0;
};

struct TrainResult {
  ModelParams params;  // best dev checkpoint
  double best_precision_at_1 = 0.0;
  std::vector<DevEvaluation> history;
  std::vector<double> epoch_mean_loss;  // mean per-pair loss over each epoch's batches
  std::int64_t batches = 0;
  bool early_stopped = false;
};

// Initial parameters: random init from `config.seed`, then rows present in
// `init` overwrite the matching embedding rows. Throws ValidationError when an
// initial vector has the wrong dimension.
ModelParams initial_params(const Vocabulary& vocab, std::size_t num_kernels,
                           const TrainConfig& config,
                           std::span<const InitialEmbedding> init = {});

// Pairs of every document, in document order.
std::vector<SaliencePair> collect_pairs(std::span<const Document> docs, std::uint64_t seed,
                                        std::size_t max_pairs);

// Mean Precision@1 of rank_entities over documents that have salient labels.
double dev_precision_at_1(std::span<const Document> docs, const DescriptionStore& descriptions,
                          const ModelParams& params, const KernelBank& bank, int threads = 1);

using TrainObserver = std::function<void(const DevEvaluation&)>;

// Mini-batch Adam on the pairwise hinge loss with early stopping on dev
// Precision@1. Throws ValidationError if either split is empty or dev has no
// salient labels.
TrainResult train_salience(std::span<const Document> train, std::span<const Document> dev,
                           const DescriptionStore& descriptions, const KernelBank& bank,
                           const ModelParams& init, const TrainConfig& config,
                           const TrainObserver& observer = {});

}  // namespace kesm
