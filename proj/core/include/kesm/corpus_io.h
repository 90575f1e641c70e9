#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kesm/document.h"
#include "kesm/vocabulary.h"

namespace kesm {

// JSON Lines readers. Blank lines are skipped. Malformed records throw
// FormatError naming the source line, the record id (when readable) and the
// offending field.

RawDocument parse_document(std::string_view line, const std::string& source = "<input>");
std::vector<RawDocument> read_documents(std::istream& in, const std::string& source = "<input>");
std::vector<RawDocument> read_documents(const std::filesystem::path& path);

RawDescription parse_description(std::string_view line, const std::string& source = "<input>");
std::vector<RawDescription> read_descriptions(std::istream& in,
                                              const std::string& source = "<input>");
std::vector<RawDescription> read_descriptions(const std::filesystem::path& path);

RawQuery parse_query(std::string_view line, const std::string& source = "<input>");
std::vector<RawQuery> read_queries(std::istream& in, const std::string& source = "<input>");
std::vector<RawQuery> read_queries(const std::filesystem::path& path);

// One compact JSON object per line, fields in schema order.
void write_documents(std::ostream& out, std::span<const RawDocument> docs);
void write_descriptions(std::ostream& out, std::span<const RawDescription> descriptions);
void write_queries(std::ostream& out, std::span<const RawQuery> queries);

struct InitialEmbedding {
  std::string symbol;
  SymbolKind kind;
  std::vector<double> vector;
};

// {"symbol": ..., "kind": "word"|"entity", "vector": [...]} per line.
std::vector<InitialEmbedding> read_initial_embeddings(std::istream& in,
                                                      const std::string& source = "<input>");
std::vector<InitialEmbedding> read_initial_embeddings(const std::filesystem::path& path);

// Vocabulary file: {"format_version", "words", "entities"} without Unk symbols.
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in, const std::string& source = "<input>");
Vocabulary read_vocabulary(const std::filesystem::path& path);

}  // namespace kesm
