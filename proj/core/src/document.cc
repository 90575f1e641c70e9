#include "kesm/document.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "kesm/errors.h"

namespace kesm {

std::vector<Index> Document::distinct_entities() const {
  std::vector<Index> out;
  out.reserve(mentions.size());
  for (const auto& m : mentions) out.push_back(m.entity);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Index> Document::non_salient_entities() const {
  std::vector<Index> out;
  for (Index e : distinct_entities()) {
    if (!is_salient(e)) out.push_back(e);
  }
  return out;
}

bool Document::is_salient(Index entity) const {
  return std::binary_search(salient.begin(), salient.end(), entity);
}

std::size_t Document::mention_count(Index entity) const {
  return static_cast<std::size_t>(std::count_if(
      mentions.begin(), mentions.end(), [entity](const Mention& m) { return m.entity == entity; }));
}

Document encode_document(const RawDocument& raw, const Vocabulary& vocab, EncodeStats* stats) {
  Document doc;
  doc.doc_id = raw.doc_id;
  doc.words.reserve(raw.words.size());
  for (const auto& w : raw.words) doc.words.push_back(vocab.word_index(w));

  const auto num_words = static_cast<std::int64_t>(raw.words.size());
  std::unordered_set<std::string> mentioned;
  for (const auto& m : raw.entities) {
    if (!m.positions.empty()) mentioned.insert(m.entity_id);
    const Index e = vocab.entity_index(m.entity_id);
    for (std::int64_t pos : m.positions) {
      if (num_words == 0) {
        throw ValidationError("document '" + raw.doc_id + "': entity '" + m.entity_id +
                              "' mentioned in a document without words");
      }
      if (pos < 0 || pos >= num_words) {
        throw ValidationError("document '" + raw.doc_id + "': entity '" + m.entity_id +
                              "' position " + std::to_string(pos) + " outside [0, " +
                              std::to_string(num_words) + ")");
      }
      doc.mentions.push_back({e, static_cast<std::int32_t>(pos)});
    }
  }

  std::set<Index> salient;
  for (const auto& s : raw.salient) {
    if (mentioned.count(s) == 0) {
      if (stats) ++stats->dropped_labels;
      continue;
    }
    salient.insert(vocab.entity_index(s));
  }
  doc.salient.assign(salient.begin(), salient.end());
  return doc;
}

std::vector<Document> encode_documents(std::span<const RawDocument> raw, const Vocabulary& vocab,
                                       EncodeStats* stats) {
  std::vector<Document> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back(encode_document(r, vocab, stats));
  return out;
}

const std::vector<Index>* DescriptionStore::find(Index entity) const {
  auto it = table_.find(entity);
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<std::pair<Index, std::vector<Index>>> DescriptionStore::entries() const {
  std::vector<std::pair<Index, std::vector<Index>>> out(table_.begin(), table_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

DescriptionStore load_descriptions(std::span<const RawDescription> records,
                                   const Vocabulary& vocab, std::size_t max_words,
                                   DescriptionStats* stats) {
  if (max_words < 1) throw ValidationError("description max_words must be >= 1");
  DescriptionStore store;
  for (const auto& rec : records) {
    if (!vocab.has_entity(rec.entity_id)) {
      if (stats) ++stats->skipped_unknown;
      continue;
    }
    const Index e = vocab.entity_index(rec.entity_id);
    if (store.contains(e) && stats) ++stats->duplicates;
    std::vector<Index> words;
    const std::size_t n = std::min(max_words, rec.words.size());
    words.reserve(n);
    for (std::size_t i = 0; i < n; ++i) words.push_back(vocab.word_index(rec.words[i]));
    store.set(e, std::move(words));
  }
  return store;
}

std::vector<SaliencePair> make_salience_pairs(const Document& doc, std::size_t doc_ref,
                                              std::uint64_t seed, std::size_t max_pairs) {
  const std::vector<Index> negatives = doc.non_salient_entities();
  const std::vector<Index>& positives = doc.salient;
  const std::size_t total = positives.size() * negatives.size();
  std::vector<SaliencePair> pairs;
  if (total == 0 || max_pairs == 0) return pairs;

  auto pair_at = [&](std::size_t i) {
    return SaliencePair{doc_ref, positives[i / negatives.size()], negatives[i % negatives.size()]};
  };
  if (total <= max_pairs) {
    pairs.reserve(total);
    for (std::size_t i = 0; i < total; ++i) pairs.push_back(pair_at(i));
    return pairs;
  }

  // Partial Fisher-Yates over the flattened cross product, then restore
  // canonical order so the output depends only on the chosen subset.
  std::vector<std::size_t> slots(total);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < max_pairs; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(slots[i], slots[pick(rng)]);
  }
  slots.resize(max_pairs);
  std::sort(slots.begin(), slots.end());
  pairs.reserve(max_pairs);
  for (std::size_t i : slots) pairs.push_back(pair_at(i));
  return pairs;
}

}  // namespace kesm
