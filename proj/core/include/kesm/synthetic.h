#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kesm/document.h"

namespace kesm {

// Generator for topic-structured salience corpora. Every document has a main
// topic; its salient entities come from that topic, distractor entities from
// other topics, and a global stop entity is mentioned more often than any
// other entity but is never salient.
struct SyntheticSpec {
  int num_topics = 5;
  int entities_per_topic = 20;
  int train_docs = 200;
  int dev_docs = 200;
  int test_docs = 200;
  int min_doc_length = 40;
  int max_doc_length = 80;
  int words_per_topic = 30;
  int general_words = 40;
  double topic_word_ratio = 0.7;
  int max_salient = 2;
  int min_distractors = 2;
  int max_distractors = 4;
  int max_mentions = 3;
  int description_length = 12;

  // Throws ValidationError on an inconsistent configuration.
  void validate() const;
};

struct SyntheticCorpus {
  std::vector<RawDocument> train;
  std::vector<RawDocument> dev;
  std::vector<RawDocument> test;
  std::vector<RawDescription> descriptions;
};

inline constexpr const char* kStopEntity = "stop_entity";

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed);

// Applies `key -> value` overrides (keys are the field names above). Unknown
// keys and unparsable values throw ValidationError.
SyntheticSpec synthetic_spec_from_map(const std::map<std::string, std::string>& values);

// Reads a flat TOML (`key = value`) or JSON object config.
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

// Writes train.jsonl, dev.jsonl, test.jsonl and descriptions.jsonl.
void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace kesm
