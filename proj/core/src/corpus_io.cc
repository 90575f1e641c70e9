#include "kesm/corpus_io.h"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "kesm/errors.h"

namespace kesm {
namespace {

using nlohmann::json;

constexpr int kVocabularyFormatVersion = 1;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

// Context for error messages while validating one JSON Lines record.
class RecordReader {
 public:
  RecordReader(std::string_view line, std::string source)
      : source_(std::move(source)), id_("<unknown>") {
    try {
      record_ = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(source_, id_, "<record>", std::string("invalid JSON: ") + e.what());
    }
    if (!record_.is_object()) fail("<record>", "expected a JSON object");
  }

  void set_id(const std::string& id) { id_ = id; }

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw FormatError(source_, id_, field, what);
  }

  const json& require(const char* field) const {
    auto it = record_.find(field);
    if (it == record_.end()) fail(field, "missing");
    return *it;
  }

  const json* optional(const char* field) const {
    auto it = record_.find(field);
    return it == record_.end() || it->is_null() ? nullptr : &*it;
  }

  std::string string_field(const char* field) const {
    const json& v = require(field);
    if (!v.is_string()) fail(field, "expected a string");
    return v.get<std::string>();
  }

  std::vector<std::string> string_list(const json& v, const std::string& field) const {
    if (!v.is_array()) fail(field, "expected an array of strings");
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& item : v) {
      if (!item.is_string()) fail(field, "expected an array of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  std::vector<std::string> string_list(const char* field) const {
    return string_list(require(field), field);
  }

 private:
  json record_;
  std::string source_;
  std::string id_;
};

template <typename Record, typename Parse>
std::vector<Record> read_lines(std::istream& in, const std::string& source, Parse parse) {
  std::vector<Record> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse(line, source + ":" + std::to_string(line_no)));
  }
  if (in.bad()) throw IoError("read failure on " + source);
  return out;
}

}  // namespace

RawDocument parse_document(std::string_view line, const std::string& source) {
  RecordReader r(line, source);
  RawDocument doc;
  doc.doc_id = r.string_field("doc_id");
  r.set_id(doc.doc_id);
  doc.words = r.string_list("words");

  const json& entities = r.require("entities");
  if (!entities.is_array()) r.fail("entities", "expected an array");
  for (const auto& e : entities) {
    if (!e.is_object()) r.fail("entities", "expected objects");
    auto id = e.find("id");
    if (id == e.end() || !id->is_string()) r.fail("entities.id", "missing or not a string");
    auto positions = e.find("positions");
    if (positions == e.end() || !positions->is_array()) {
      r.fail("entities.positions", "missing or not an array");
    }
    RawMention m;
    m.entity_id = id->get<std::string>();
    for (const auto& p : *positions) {
      if (!p.is_number_integer()) r.fail("entities.positions", "expected integers");
      m.positions.push_back(p.get<std::int64_t>());
    }
    doc.entities.push_back(std::move(m));
  }
  if (const json* salient = r.optional("salient")) {
    doc.salient = r.string_list(*salient, "salient");
  }
  if (doc.words.empty()) {
    for (const auto& m : doc.entities) {
      if (!m.positions.empty()) r.fail("words", "empty while entities are mentioned");
    }
  }
  return doc;
}

std::vector<RawDocument> read_documents(std::istream& in, const std::string& source) {
  return read_lines<RawDocument>(in, source, [](std::string_view l, const std::string& s) {
    return parse_document(l, s);
  });
}

std::vector<RawDocument> read_documents(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_documents(in, path.string());
}

RawDescription parse_description(std::string_view line, const std::string& source) {
  RecordReader r(line, source);
  RawDescription d;
  d.entity_id = r.string_field("entity_id");
  r.set_id(d.entity_id);
  d.words = r.string_list("words");
  return d;
}

std::vector<RawDescription> read_descriptions(std::istream& in, const std::string& source) {
  return read_lines<RawDescription>(in, source, [](std::string_view l, const std::string& s) {
    return parse_description(l, s);
  });
}

std::vector<RawDescription> read_descriptions(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_descriptions(in, path.string());
}

RawQuery parse_query(std::string_view line, const std::string& source) {
  RecordReader r(line, source);
  RawQuery q;
  q.query_id = r.string_field("query_id");
  r.set_id(q.query_id);
  q.words = r.string_list("words");
  q.entities = r.string_list("entities");
  return q;
}

std::vector<RawQuery> read_queries(std::istream& in, const std::string& source) {
  return read_lines<RawQuery>(in, source, [](std::string_view l, const std::string& s) {
    return parse_query(l, s);
  });
}

std::vector<RawQuery> read_queries(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_queries(in, path.string());
}

void write_documents(std::ostream& out, std::span<const RawDocument> docs) {
  for (const auto& d : docs) {
    json entities = json::array();
    for (const auto& m : d.entities) {
      entities.push_back(json{{"id", m.entity_id}, {"positions", m.positions}});
    }
    json j;
    j["doc_id"] = d.doc_id;
    j["words"] = d.words;
    j["entities"] = std::move(entities);
    j["salient"] = d.salient;
    out << j.dump() << '\n';
  }
}

void write_descriptions(std::ostream& out, std::span<const RawDescription> descriptions) {
  for (const auto& d : descriptions) {
    json j;
    j["entity_id"] = d.entity_id;
    j["words"] = d.words;
    out << j.dump() << '\n';
  }
}

void write_queries(std::ostream& out, std::span<const RawQuery> queries) {
  for (const auto& q : queries) {
    json j;
    j["query_id"] = q.query_id;
    j["words"] = q.words;
    j["entities"] = q.entities;
    out << j.dump() << '\n';
  }
}

std::vector<InitialEmbedding> read_initial_embeddings(std::istream& in,
                                                      const std::string& source) {
  return read_lines<InitialEmbedding>(in, source, [](std::string_view l, const std::string& s) {
    RecordReader r(l, s);
    InitialEmbedding e;
    e.symbol = r.string_field("symbol");
    r.set_id(e.symbol);
    const std::string kind = r.string_field("kind");
    if (kind == "word") {
      e.kind = SymbolKind::kWord;
    } else if (kind == "entity") {
      e.kind = SymbolKind::kEntity;
    } else {
      r.fail("kind", "expected \"word\" or \"entity\"");
    }
    const json& v = r.require("vector");
    if (!v.is_array() || v.empty()) r.fail("vector", "expected a non-empty array of numbers");
    for (const auto& x : v) {
      if (!x.is_number()) r.fail("vector", "expected numbers");
      e.vector.push_back(x.get<double>());
    }
    return e;
  });
}

std::vector<InitialEmbedding> read_initial_embeddings(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_initial_embeddings(in, path.string());
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  json j;
  j["format_version"] = kVocabularyFormatVersion;
  j["words"] = vocab.word_symbols();
  j["entities"] = vocab.entity_symbols();
  out << j.dump() << '\n';
}

Vocabulary read_vocabulary(std::istream& in, const std::string& source) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(source, "vocabulary", "<record>", std::string("invalid JSON: ") + e.what());
  }
  auto list = [&](const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_array()) {
      throw FormatError(source, "vocabulary", field, "missing or not an array");
    }
    std::vector<std::string> out;
    for (const auto& s : *it) {
      if (!s.is_string()) throw FormatError(source, "vocabulary", field, "expected strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  };
  return Vocabulary(list("words"), list("entities"));
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_vocabulary(in, path.string());
}

}  // namespace kesm
