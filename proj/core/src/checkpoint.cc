#include "kesm/checkpoint.h"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "kesm/errors.h"

namespace kesm {
namespace {

using nlohmann::json;

template <typename M>
json matrix_to_json(const M& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

class Reader {
 public:
  Reader(const json& root, std::string source) : root_(root), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw FormatError(source_, "checkpoint", field, what);
  }

  const json& at(const char* field) const {
    auto it = root_.find(field);
    if (it == root_.end()) fail(field, "missing");
    return *it;
  }

  double number(const json& v, const std::string& field) const {
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
  }

  std::vector<double> numbers(const json& v, const std::string& field) const {
    if (!v.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(number(x, field));
    return out;
  }

  std::vector<std::string> strings(const json& v, const std::string& field) const {
    if (!v.is_array()) fail(field, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
      if (!x.is_string()) fail(field, "expected strings");
      out.push_back(x.get<std::string>());
    }
    return out;
  }

  template <typename M>
  void matrix(const char* field, M& m, Eigen::Index rows, Eigen::Index cols) const {
    const json& v = at(field);
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
      fail(field, "expected " + std::to_string(rows) + " rows");
    }
    m.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const std::vector<double> row = numbers(v[static_cast<std::size_t>(i)], field);
      if (static_cast<Eigen::Index>(row.size()) != cols) {
        fail(field, "expected " + std::to_string(cols) + " columns");
      }
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
    }
  }

 private:
  const json& root_;
  std::string source_;
};

}  // namespace

void save_checkpoint(const Model& model, std::ostream& out) {
  const ModelParams& p = model.params;
  json j;
  j["format_version"] = kCheckpointFormatVersion;
  j["d"] = p.dim;
  j["h"] = p.window;
  json mu = json::array();
  json sigma = json::array();
  for (const auto& k : model.bank.kernels()) {
    mu.push_back(k.mu);
    sigma.push_back(k.sigma);
  }
  j["kernels"] = {{"mu", std::move(mu)}, {"sigma", std::move(sigma)}};
  j["vocabulary"] = {{"words", model.vocab.word_symbols()},
                     {"entities", model.vocab.entity_symbols()}};
  json descriptions = json::object();
  for (const auto& [entity, words] : model.descriptions.entries()) {
    json list = json::array();
    for (Index w : words) list.push_back(model.vocab.symbol(w));
    descriptions[model.vocab.symbol(entity)] = std::move(list);
  }
  j["descriptions"] = std::move(descriptions);
  j["V"] = matrix_to_json(p.embeddings);
  j["W_c"] = matrix_to_json(p.conv);
  j["W_p"] = matrix_to_json(p.projection);
  j["W_s"] = vector_to_json(p.salience_weights);
  j["b_s"] = p.salience_bias;
  out << j.dump() << '\n';
  if (!out) throw IoError("checkpoint write failed");
}

Model load_checkpoint(std::istream& in, const std::string& source) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(source, "checkpoint", "<document>", std::string("invalid JSON: ") + e.what());
  }
  Reader r(root, source);
  const json& version = r.at("format_version");
  if (!version.is_number_integer() || version.get<int>() != kCheckpointFormatVersion) {
    r.fail("format_version", "unsupported version");
  }

  Model model;
  const json& vocab = r.at("vocabulary");
  if (!vocab.is_object() || !vocab.contains("words") || !vocab.contains("entities")) {
    r.fail("vocabulary", "expected {words, entities}");
  }
  model.vocab = Vocabulary(r.strings(vocab["words"], "vocabulary.words"),
                           r.strings(vocab["entities"], "vocabulary.entities"));

  const json& kernels = r.at("kernels");
  if (!kernels.is_object() || !kernels.contains("mu") || !kernels.contains("sigma")) {
    r.fail("kernels", "expected {mu, sigma}");
  }
  const auto mu = r.numbers(kernels["mu"], "kernels.mu");
  const auto sigma = r.numbers(kernels["sigma"], "kernels.sigma");
  if (mu.size() != sigma.size()) r.fail("kernels", "mu and sigma differ in length");
  std::vector<Kernel> bank;
  for (std::size_t k = 0; k < mu.size(); ++k) bank.push_back({mu[k], sigma[k]});
  model.bank = KernelBank(std::move(bank));

  if (const auto it = root.find("descriptions"); it != root.end()) {
    if (!it->is_object()) r.fail("descriptions", "expected an object");
    for (const auto& [entity, words] : it->items()) {
      if (!model.vocab.has_entity(entity)) r.fail("descriptions", "unknown entity '" + entity + "'");
      std::vector<Index> encoded;
      for (const auto& w : r.strings(words, "descriptions")) encoded.push_back(model.vocab.word_index(w));
      model.descriptions.set(model.vocab.entity_index(entity), std::move(encoded));
    }
  }

  ModelParams& p = model.params;
  const json& d = r.at("d");
  const json& h = r.at("h");
  if (!d.is_number_integer() || d.get<int>() < 1) r.fail("d", "expected a positive integer");
  if (!h.is_number_integer() || h.get<int>() < 1) r.fail("h", "expected a positive integer");
  p.dim = d.get<int>();
  p.window = h.get<int>();
  const Eigen::Index dim = p.dim;
  r.matrix("V", p.embeddings, static_cast<Eigen::Index>(model.vocab.size()), dim);
  r.matrix("W_c", p.conv, dim, p.window * dim);
  r.matrix("W_p", p.projection, dim, 2 * dim);
  const auto ws = r.numbers(r.at("W_s"), "W_s");
  if (ws.size() != 2 * model.bank.size()) r.fail("W_s", "expected 2K entries");
  p.salience_weights = Eigen::Map<const Vector>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  p.salience_bias = r.number(r.at("b_s"), "b_s");
  p.check_shapes(model.vocab.size(), model.bank.size());
  return model;
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return load_checkpoint(in, path.string());
}

}  // namespace kesm
