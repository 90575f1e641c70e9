#include "kesm/synthetic.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "kesm/corpus_io.h"
#include "kesm/errors.h"

namespace kesm {
namespace {

std::string entity_name(int topic, int entity) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "t%d_e%02d", topic, entity);
  return buf;
}

std::string topic_word(int topic, int word) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "t%d_w%02d", topic, word);
  return buf;
}

std::string general_word(int word) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "g_w%02d", word);
  return buf;
}

class Generator {
 public:
  Generator(const SyntheticSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string word_for(int topic) {
    if (coin(spec_.topic_word_ratio)) return topic_word(topic, uniform(0, spec_.words_per_topic - 1));
    return general_word(uniform(0, spec_.general_words - 1));
  }

  RawDocument document(const std::string& doc_id) {
    const int topic = uniform(0, spec_.num_topics - 1);
    const int length = uniform(spec_.min_doc_length, spec_.max_doc_length);

    RawDocument doc;
    doc.doc_id = doc_id;
    doc.words.reserve(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) doc.words.push_back(word_for(topic));

    // Salient entities: distinct members of the main topic.
    std::vector<int> members(static_cast<std::size_t>(spec_.entities_per_topic));
    for (int i = 0; i < spec_.entities_per_topic; ++i) members[static_cast<std::size_t>(i)] = i;
    const int num_salient = uniform(1, std::min(spec_.max_salient, spec_.entities_per_topic));
    std::vector<std::pair<std::string, int>> counts;
    for (int i = 0; i < num_salient; ++i) {
      const int j = uniform(i, spec_.entities_per_topic - 1);
      std::swap(members[static_cast<std::size_t>(i)], members[static_cast<std::size_t>(j)]);
      const std::string name = entity_name(topic, members[static_cast<std::size_t>(i)]);
      doc.salient.push_back(name);
      counts.emplace_back(name, uniform(1, spec_.max_mentions));
    }

    // Distractors: distinct entities of other topics.
    const int available = (spec_.num_topics - 1) * spec_.entities_per_topic;
    const int num_distractors =
        std::min(available, uniform(spec_.min_distractors, spec_.max_distractors));
    std::set<std::string> used;
    while (static_cast<int>(used.size()) < num_distractors) {
      int other = uniform(0, spec_.num_topics - 2);
      if (other >= topic) ++other;
      const std::string name = entity_name(other, uniform(0, spec_.entities_per_topic - 1));
      if (used.insert(name).second) counts.emplace_back(name, uniform(1, spec_.max_mentions));
    }

    int most = 0;
    for (const auto& [name, c] : counts) most = std::max(most, c);
    counts.emplace_back(kStopEntity, most + uniform(1, 2));

    for (const auto& [name, c] : counts) {
      RawMention m;
      m.entity_id = name;
      for (int i = 0; i < c; ++i) m.positions.push_back(uniform(0, length - 1));
      std::sort(m.positions.begin(), m.positions.end());
      doc.entities.push_back(std::move(m));
    }
    return doc;
  }

  std::vector<RawDocument> split(const std::string& name, int n) {
    std::vector<RawDocument> docs;
    docs.reserve(static_cast<std::size_t>(n));
    char buf[64];
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%s-%04d", name.c_str(), i);
      docs.push_back(document(buf));
    }
    return docs;
  }

  std::vector<RawDescription> descriptions() {
    std::vector<RawDescription> out;
    for (int t = 0; t < spec_.num_topics; ++t) {
      for (int e = 0; e < spec_.entities_per_topic; ++e) {
        RawDescription d;
        d.entity_id = entity_name(t, e);
        for (int i = 0; i < spec_.description_length; ++i) d.words.push_back(word_for(t));
        out.push_back(std::move(d));
      }
    }
    RawDescription stop;
    stop.entity_id = kStopEntity;
    for (int i = 0; i < spec_.description_length; ++i) {
      stop.words.push_back(general_word(uniform(0, spec_.general_words - 1)));
    }
    out.push_back(std::move(stop));
    return out;
  }

 private:
  const SyntheticSpec& spec_;
  std::mt19937_64 rng_;
};

template <typename T>
void parse_value(const std::string& key, const std::string& text, T& out) {
  std::string trimmed = text;
  while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '"')) trimmed.pop_back();
  std::size_t start = trimmed.find_first_not_of(" \"");
  trimmed = start == std::string::npos ? "" : trimmed.substr(start);
  const char* first = trimmed.data();
  const char* last = first + trimmed.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError("synthetic spec: invalid value '" + text + "' for '" + key + "'");
  }
}

}  // namespace

void SyntheticSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("synthetic spec: ") + what);
  };
  require(num_topics >= 1, "num_topics must be >= 1");
  require(entities_per_topic >= 1, "entities_per_topic must be >= 1");
  require(train_docs >= 0 && dev_docs >= 0 && test_docs >= 0, "document counts must be >= 0");
  require(train_docs + dev_docs + test_docs >= 1, "at least one document is required");
  require(min_doc_length >= 1, "min_doc_length must be >= 1");
  require(max_doc_length >= min_doc_length, "max_doc_length must be >= min_doc_length");
  require(words_per_topic >= 1, "words_per_topic must be >= 1");
  require(general_words >= 1, "general_words must be >= 1");
  require(topic_word_ratio >= 0.0 && topic_word_ratio <= 1.0, "topic_word_ratio must be in [0, 1]");
  require(max_salient >= 1, "max_salient must be >= 1");
  require(min_distractors >= 0, "min_distractors must be >= 0");
  require(max_distractors >= min_distractors, "max_distractors must be >= min_distractors");
  require(max_mentions >= 1, "max_mentions must be >= 1");
  require(description_length >= 0, "description_length must be >= 0");
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  Generator gen(spec, seed);
  SyntheticCorpus corpus;
  corpus.descriptions = gen.descriptions();
  corpus.train = gen.split("train", spec.train_docs);
  corpus.dev = gen.split("dev", spec.dev_docs);
  corpus.test = gen.split("test", spec.test_docs);
  return corpus;
}

SyntheticSpec synthetic_spec_from_map(const std::map<std::string, std::string>& values) {
  SyntheticSpec spec;
  const std::map<std::string, int*> ints = {
      {"num_topics", &spec.num_topics},
      {"entities_per_topic", &spec.entities_per_topic},
      {"train_docs", &spec.train_docs},
      {"dev_docs", &spec.dev_docs},
      {"test_docs", &spec.test_docs},
      {"min_doc_length", &spec.min_doc_length},
      {"max_doc_length", &spec.max_doc_length},
      {"words_per_topic", &spec.words_per_topic},
      {"general_words", &spec.general_words},
      {"max_salient", &spec.max_salient},
      {"min_distractors", &spec.min_distractors},
      {"max_distractors", &spec.max_distractors},
      {"max_mentions", &spec.max_mentions},
      {"description_length", &spec.description_length},
  };
  for (const auto& [key, value] : values) {
    if (auto it = ints.find(key); it != ints.end()) {
      parse_value(key, value, *it->second);
    } else if (key == "topic_word_ratio") {
      parse_value(key, value, spec.topic_word_ratio);
    } else {
      throw ValidationError("synthetic spec: unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ValidationError("synthetic spec '" + path.string() + "' does not exist");
  }
  std::map<std::string, std::string> values;
  if (path.extension() == ".json") {
    std::ifstream in(path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("synthetic spec '" + path.string() + "': " + e.what());
    }
    if (!j.is_object()) throw ValidationError("synthetic spec: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
      values[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  } else {
    std::vector<CLI::ConfigItem> items;
    try {
      items = CLI::ConfigTOML().from_file(path.string());
    } catch (const CLI::Error& e) {
      throw ValidationError("synthetic spec '" + path.string() + "': " + e.what());
    }
    for (const auto& item : items) {
      if (item.inputs.size() != 1) continue;  // section headers
      values[item.fullname()] = item.inputs.front();
    }
  }
  return synthetic_spec_from_map(values);
}

void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, auto&& fn) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write '" + (dir / name).string() + "'");
    fn(out);
    if (!out) throw IoError("write failure on '" + (dir / name).string() + "'");
  };
  write("train.jsonl", [&](std::ostream& o) { write_documents(o, corpus.train); });
  write("dev.jsonl", [&](std::ostream& o) { write_documents(o, corpus.dev); });
  write("test.jsonl", [&](std::ostream& o) { write_documents(o, corpus.test); });
  write("descriptions.jsonl", [&](std::ostream& o) { write_descriptions(o, corpus.descriptions); });
}

}  // namespace kesm
