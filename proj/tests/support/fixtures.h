#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "kesm/document.h"
#include "kesm/kernel_bank.h"
#include "kesm/model_params.h"

namespace kesm::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

// Index layout of a hand-made vocabulary: words [0, num_words) with Unk_word
// at 0, entities [num_words, num_words + num_entities) with Unk_entity first.
struct Layout {
  int num_words = 30;
  int num_entities = 20;
  int size() const { return num_words + num_entities; }
  Index word(int i) const { return static_cast<Index>(i); }
  Index entity(int i) const { return static_cast<Index>(num_words + i); }
};

// Every tensor drawn from `rng`; salience weights are kept small so pairs
// tend to violate the margin.
ModelParams random_params(Rng& rng, const Layout& layout, int dim, std::size_t num_kernels,
                          double scale = 0.5, double weight_scale = 0.05);

// `num_mentions` mentions of entities drawn from [first_entity, first_entity +
// distinct); the first `salient` distinct mentioned entities are labelled.
Document random_document(Rng& rng, const Layout& layout, int num_words, int num_mentions,
                         int distinct, int salient);

DescriptionStore random_descriptions(Rng& rng, const Layout& layout, int max_words,
                                     double coverage = 0.7);

// Every token and mention repeated `times` times.
Document replicate(const Document& doc, int times);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace kesm::testing
