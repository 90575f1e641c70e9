#include "fixtures.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace kesm::testing {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

ModelParams random_params(Rng& rng, const Layout& layout, int dim, std::size_t num_kernels,
                          double scale, double weight_scale) {
  ModelParams p = ModelParams::zeros(static_cast<std::size_t>(layout.size()), dim, 3, num_kernels);
  for (Eigen::Index i = 0; i < p.embeddings.size(); ++i) p.embeddings.data()[i] = uniform(rng, -scale, scale);
  for (Eigen::Index i = 0; i < p.conv.size(); ++i) p.conv.data()[i] = uniform(rng, -scale, scale);
  for (Eigen::Index i = 0; i < p.projection.size(); ++i) p.projection.data()[i] = uniform(rng, -scale, scale);
  for (Eigen::Index i = 0; i < p.salience_weights.size(); ++i) {
    p.salience_weights[i] = uniform(rng, -weight_scale, weight_scale);
  }
  p.salience_bias = uniform(rng, -0.1, 0.1);
  return p;
}

Document random_document(Rng& rng, const Layout& layout, int num_words, int num_mentions,
                         int distinct, int salient) {
  Document doc;
  doc.doc_id = "d" + std::to_string(rng() % 100000);
  for (int i = 0; i < num_words; ++i) doc.words.push_back(layout.word(uniform_int(rng, 0, layout.num_words - 1)));
  const int first = uniform_int(rng, 0, layout.num_entities - distinct);
  std::vector<Index> pool;
  for (int i = 0; i < distinct; ++i) pool.push_back(layout.entity(first + i));
  std::shuffle(pool.begin(), pool.end(), rng);
  for (int i = 0; i < num_mentions; ++i) {
    // Every pooled entity appears at least once when there are enough mentions.
    const Index e = i < distinct ? pool[static_cast<std::size_t>(i)]
                                 : pool[static_cast<std::size_t>(uniform_int(rng, 0, distinct - 1))];
    doc.mentions.push_back({e, uniform_int(rng, 0, num_words - 1)});
  }
  std::set<Index> labels;
  for (int i = 0; i < salient && i < std::min(distinct, num_mentions); ++i) labels.insert(pool[static_cast<std::size_t>(i)]);
  doc.salient.assign(labels.begin(), labels.end());
  return doc;
}

DescriptionStore random_descriptions(Rng& rng, const Layout& layout, int max_words, double coverage) {
  DescriptionStore store;
  for (int i = 0; i < layout.num_entities; ++i) {
    if (uniform(rng, 0, 1) > coverage) continue;
    std::vector<Index> words;
    const int n = uniform_int(rng, 0, max_words);
    for (int j = 0; j < n; ++j) words.push_back(layout.word(uniform_int(rng, 0, layout.num_words - 1)));
    store.set(layout.entity(i), std::move(words));
  }
  return store;
}

Document replicate(const Document& doc, int times) {
  Document out = doc;
  out.words.clear();
  out.mentions.clear();
  const auto n = static_cast<std::int32_t>(doc.words.size());
  for (int t = 0; t < times; ++t) {
    out.words.insert(out.words.end(), doc.words.begin(), doc.words.end());
    for (const auto& m : doc.mentions) out.mentions.push_back({m.entity, m.position + t * n});
  }
  return out;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("kesm-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace kesm::testing
