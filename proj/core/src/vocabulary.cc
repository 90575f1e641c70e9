#include "kesm/vocabulary.h"

#include <stdexcept>

#include "kesm/document.h"
#include "kesm/errors.h"

namespace kesm {

Vocabulary::Vocabulary() : Vocabulary({}, {}) {}

Vocabulary::Vocabulary(const std::vector<std::string>& words,
                       const std::vector<std::string>& entities) {
  symbols_.reserve(words.size() + entities.size() + 2);
  symbols_.emplace_back(kUnkWord);
  for (const auto& w : words) {
    if (w == kUnkWord) continue;
    if (!words_.emplace(w, static_cast<Index>(symbols_.size())).second) {
      throw ValidationError("vocabulary: duplicate word symbol '" + w + "'");
    }
    symbols_.push_back(w);
  }
  num_words_ = symbols_.size();
  symbols_.emplace_back(kUnkEntity);
  for (const auto& e : entities) {
    if (e == kUnkEntity) continue;
    if (!entities_.emplace(e, static_cast<Index>(symbols_.size())).second) {
      throw ValidationError("vocabulary: duplicate entity symbol '" + e + "'");
    }
    symbols_.push_back(e);
  }
}

Index Vocabulary::word_index(const std::string& word) const {
  auto it = words_.find(word);
  return it == words_.end() ? unk_word() : it->second;
}

Index Vocabulary::entity_index(const std::string& entity) const {
  auto it = entities_.find(entity);
  return it == entities_.end() ? unk_entity() : it->second;
}

const std::string& Vocabulary::symbol(Index index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= symbols_.size()) {
    throw std::out_of_range("vocabulary index " + std::to_string(index) + " out of range");
  }
  return symbols_[static_cast<std::size_t>(index)];
}

SymbolKind Vocabulary::kind(Index index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= symbols_.size()) {
    throw std::out_of_range("vocabulary index " + std::to_string(index) + " out of range");
  }
  return static_cast<std::size_t>(index) < num_words_ ? SymbolKind::kWord : SymbolKind::kEntity;
}

std::vector<std::string> Vocabulary::word_symbols() const {
  return {symbols_.begin() + 1, symbols_.begin() + static_cast<long>(num_words_)};
}

std::vector<std::string> Vocabulary::entity_symbols() const {
  return {symbols_.begin() + static_cast<long>(num_words_) + 1, symbols_.end()};
}

void VocabularyBuilder::add(const RawDocument& doc) {
  for (const auto& w : doc.words) ++word_counts_[w];
  for (const auto& m : doc.entities) {
    entity_counts_[m.entity_id] += static_cast<long>(m.positions.size());
  }
}

void VocabularyBuilder::merge(const VocabularyBuilder& other) {
  for (const auto& [w, c] : other.word_counts_) word_counts_[w] += c;
  for (const auto& [e, c] : other.entity_counts_) entity_counts_[e] += c;
}

Vocabulary VocabularyBuilder::build(int min_count) const {
  if (min_count < 1) {
    throw ValidationError("min_count must be >= 1, got " + std::to_string(min_count));
  }
  std::vector<std::string> words;
  std::vector<std::string> entities;
  for (const auto& [w, c] : word_counts_) {
    if (c >= min_count && w != Vocabulary::kUnkWord) words.push_back(w);
  }
  for (const auto& [e, c] : entity_counts_) {
    if (c >= min_count && e != Vocabulary::kUnkEntity) entities.push_back(e);
  }
  return Vocabulary(words, entities);
}

Vocabulary build_vocabulary(std::span<const RawDocument> docs, int min_count) {
  VocabularyBuilder builder;
  for (const auto& doc : docs) builder.add(doc);
  return builder.build(min_count);
}

}  // namespace kesm
