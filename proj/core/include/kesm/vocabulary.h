#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kesm/types.h"

namespace kesm {

struct RawDocument;

enum class SymbolKind { kWord, kEntity };

// Joint word/entity symbol table. Words occupy indices [0, num_words()) with
// Unk_word at 0; entities follow, with Unk_entity first. Both unknown symbols
// exist even in an otherwise empty vocabulary.
class Vocabulary {
 public:
  static constexpr std::string_view kUnkWord = "Unk_word";
  static constexpr std::string_view kUnkEntity = "Unk_entity";
  static constexpr Index kUnkWordIndex = 0;

  Vocabulary();
  // `words` and `entities` exclude the Unk symbols; duplicates are rejected.
  Vocabulary(const std::vector<std::string>& words, const std::vector<std::string>& entities);

  Index word_index(const std::string& word) const;
  Index entity_index(const std::string& entity) const;
  bool has_word(const std::string& word) const { return words_.count(word) != 0; }
  bool has_entity(const std::string& entity) const { return entities_.count(entity) != 0; }

  const std::string& symbol(Index index) const;
  SymbolKind kind(Index index) const;
  bool is_entity(Index index) const { return kind(index) == SymbolKind::kEntity; }

  Index unk_word() const { return kUnkWordIndex; }
  Index unk_entity() const { return static_cast<Index>(num_words_); }

  std::size_t size() const { return symbols_.size(); }
  std::size_t num_words() const { return num_words_; }
  std::size_t num_entities() const { return symbols_.size() - num_words_; }

  // Kept symbols (without Unk) in index order; the serialized form.
  std::vector<std::string> word_symbols() const;
  std::vector<std::string> entity_symbols() const;

  bool operator==(const Vocabulary& other) const { return symbols_ == other.symbols_ && num_words_ == other.num_words_; }

 private:
  std::vector<std::string> symbols_;
  std::size_t num_words_ = 0;
  std::unordered_map<std::string, Index> words_;
  std::unordered_map<std::string, Index> entities_;
};

// Accumulates symbol counts over a training stream. Shards can be counted
// independently and merged before build().
class VocabularyBuilder {
 public:
  void add(const RawDocument& doc);
  void merge(const VocabularyBuilder& other);
  // Symbols seen at least `min_count` times get their own index, in
  // lexicographic order. Throws ValidationError if min_count < 1.
  Vocabulary build(int min_count) const;

  const std::map<std::string, long>& word_counts() const { return word_counts_; }
  const std::map<std::string, long>& entity_counts() const { return entity_counts_; }

 private:
  std::map<std::string, long> word_counts_;
  std::map<std::string, long> entity_counts_;
};

inline constexpr int kDefaultMinCount = 2;

// Words count per token; entities count per mention occurrence.
Vocabulary build_vocabulary(std::span<const RawDocument> docs, int min_count = kDefaultMinCount);

}  // namespace kesm
