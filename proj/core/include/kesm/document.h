#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kesm/types.h"
#include "kesm/vocabulary.h"

namespace kesm {

struct RawMention {
  std::string entity_id;
  std::vector<std::int64_t> positions;
};

// A parsed but not yet encoded document record.
struct RawDocument {
  std::string doc_id;
  std::vector<std::string> words;
  std::vector<RawMention> entities;
  std::vector<std::string> salient;
};

struct RawDescription {
  std::string entity_id;
  std::vector<std::string> words;
};

struct RawQuery {
  std::string query_id;
  std::vector<std::string> words;
  std::vector<std::string> entities;
};

struct Mention {
  Index entity;
  std::int32_t position;
};

// An encoded document. `mentions` is the multiset of entity occurrences and
// `words` the full token multiset; both feed the kernels one element at a time.
struct Document {
  std::string doc_id;
  std::vector<Index> words;
  std::vector<Mention> mentions;
  std::vector<Index> salient;  // sorted, unique, subset of mentioned entities

  std::vector<Index> distinct_entities() const;
  std::vector<Index> non_salient_entities() const;
  bool is_salient(Index entity) const;
  std::size_t mention_count(Index entity) const;
};

struct EncodeStats {
  std::size_t dropped_labels = 0;
};

// Maps every string through `vocab` (unseen symbols become Unk). Salient
// labels that are never mentioned are dropped and counted in `stats`.
// Throws ValidationError on positions outside [0, |words|) or mentions in a
// document without words.
Document encode_document(const RawDocument& raw, const Vocabulary& vocab,
                         EncodeStats* stats = nullptr);

std::vector<Document> encode_documents(std::span<const RawDocument> raw, const Vocabulary& vocab,
                                       EncodeStats* stats = nullptr);

// Entity descriptions as word-index sequences. Absence is distinct from an
// empty description.
class DescriptionStore {
 public:
  static constexpr std::size_t kDefaultMaxWords = 20;

  const std::vector<Index>* find(Index entity) const;
  bool contains(Index entity) const { return find(entity) != nullptr; }
  void set(Index entity, std::vector<Index> words) { table_[entity] = std::move(words); }
  std::size_t size() const { return table_.size(); }

  // Entries sorted by entity index.
  std::vector<std::pair<Index, std::vector<Index>>> entries() const;

 private:
  std::unordered_map<Index, std::vector<Index>> table_;
};

struct DescriptionStats {
  std::size_t skipped_unknown = 0;
  std::size_t duplicates = 0;
};

// Truncates each description to `max_words` before encoding. Entities that are
// not in `vocab` are skipped; a repeated entity_id keeps the last record.
DescriptionStore load_descriptions(std::span<const RawDescription> records, const Vocabulary& vocab,
                                   std::size_t max_words = DescriptionStore::kDefaultMaxWords,
                                   DescriptionStats* stats = nullptr);

struct SaliencePair {
  std::size_t doc;  // index into the owning document collection
  Index positive;
  Index negative;
};

inline constexpr std::size_t kDefaultMaxPairs = 256;

// Pairs from salient x non-salient distinct entities of `doc`, in
// (positive, negative) index order. When the cross product exceeds
// `max_pairs`, a uniform sample without replacement is drawn from `seed`.
std::vector<SaliencePair> make_salience_pairs(const Document& doc, std::size_t doc_ref,
                                              std::uint64_t seed,
                                              std::size_t max_pairs = kDefaultMaxPairs);

}  // namespace kesm
