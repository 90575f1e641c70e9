#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "kesm/baselines.h"
#include "kesm/checkpoint.h"
#include "kesm/corpus_io.h"
#include "kesm/errors.h"
#include "kesm/metrics.h"
#include "kesm/parallel.h"
#include "kesm/ranking.h"
#include "kesm/salience.h"
#include "kesm/significance.h"
#include "kesm/synthetic.h"
#include "kesm/trainer.h"
#include "kesm/trec_io.h"
#include "manifest.h"

namespace kesm::cli {
namespace {

namespace fs = std::filesystem;

void warn(const std::string& message) { std::cerr << "kesm: warning: " << message << '\n'; }
void info(const std::string& message) { std::cerr << "kesm: " << message << '\n'; }

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string snapshot(const CLI::App* app) { return app->config_to_str(true, false); }

// ---------------------------------------------------------------- build-vocab

struct BuildVocabOptions {
  std::string docs;
  int min_count = kDefaultMinCount;
  std::string out;
};

void cmd_build_vocab(const BuildVocabOptions& o, const CLI::App* app) {
  if (o.min_count < 1) throw ValidationError("--min-count must be >= 1");
  RunManifest manifest("build-vocab", snapshot(app), 0);
  manifest.add_input("docs", o.docs);
  const auto docs = read_documents(fs::path(o.docs));
  const Vocabulary vocab = build_vocabulary(docs, o.min_count);
  write_atomic(o.out, [&](std::ostream& out) { write_vocabulary(out, vocab); });
  manifest.add_output(o.out);
  manifest.set_note("words", std::to_string(vocab.num_words()));
  manifest.set_note("entities", std::to_string(vocab.num_entities()));
  manifest.write(manifest_path(o.out));
  info("vocabulary: " + std::to_string(vocab.num_words()) + " words, " +
       std::to_string(vocab.num_entities()) + " entities (including Unk)");
}

// ---------------------------------------------------------------------- train

struct TrainOptions {
  std::string train;
  std::string dev;
  std::string desc;
  std::string vocab;
  std::string init_embeddings;
  std::string out;
  int min_count = kDefaultMinCount;
  TrainConfig config;
};

void cmd_train(const TrainOptions& o, const CLI::App* app) {
  o.config.validate();
  RunManifest manifest("train", snapshot(app), o.config.seed);
  manifest.add_input("train", o.train);
  manifest.add_input("dev", o.dev);

  const auto raw_train = read_documents(fs::path(o.train));
  const auto raw_dev = read_documents(fs::path(o.dev));
  Vocabulary vocab;
  if (!o.vocab.empty()) {
    manifest.add_input("vocab", o.vocab);
    vocab = read_vocabulary(fs::path(o.vocab));
  } else {
    vocab = build_vocabulary(raw_train, o.min_count);
  }

  EncodeStats stats;
  const auto train = encode_documents(raw_train, vocab, &stats);
  const auto dev = encode_documents(raw_dev, vocab, &stats);
  if (stats.dropped_labels > 0) {
    warn(std::to_string(stats.dropped_labels) + " salient labels dropped (entity never mentioned)");
  }

  DescriptionStore descriptions;
  if (!o.desc.empty()) {
    manifest.add_input("descriptions", o.desc);
    DescriptionStats dstats;
    descriptions = load_descriptions(read_descriptions(fs::path(o.desc)), vocab,
                                     DescriptionStore::kDefaultMaxWords, &dstats);
    if (dstats.skipped_unknown > 0) {
      warn(std::to_string(dstats.skipped_unknown) + " descriptions skipped (entity not in vocabulary)");
    }
    if (dstats.duplicates > 0) warn(std::to_string(dstats.duplicates) + " duplicate descriptions");
  }

  std::vector<InitialEmbedding> init;
  if (!o.init_embeddings.empty()) {
    manifest.add_input("init_embeddings", o.init_embeddings);
    init = read_initial_embeddings(fs::path(o.init_embeddings));
  }

  Model model;
  model.vocab = vocab;
  model.descriptions = descriptions;
  model.bank = KernelBank::default_bank();
  const ModelParams start = initial_params(vocab, model.bank.size(), o.config, init);
  const TrainResult result =
      train_salience(train, dev, descriptions, model.bank, start, o.config,
                     [](const DevEvaluation& e) {
                       info("epoch " + std::to_string(e.epoch) + " batch " +
                            std::to_string(e.batches) + " dev P@1 " + format_value(e.precision_at_1));
                     });
  model.params = result.params;

  write_atomic(o.out, [&](std::ostream& out) { save_checkpoint(model, out); });
  manifest.add_output(o.out);
  manifest.set_note("best_dev_precision_at_1", format_value(result.best_precision_at_1));
  manifest.set_note("batches", std::to_string(result.batches));
  manifest.write(manifest_path(o.out));
}

// -------------------------------------------------------------------- predict

struct PredictOptions {
  std::string model;
  std::string docs;
  std::string method = "kesm";
  std::string out;
  std::string dev;
  std::string letor_train;
  std::optional<double> alpha;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct PredictedRanking {
  std::string doc_id;
  std::vector<std::pair<std::string, double>> entities;  // ranked
};

// Ranks the raw entity ids of `raw` by the scores of their vocabulary indices.
PredictedRanking rank_raw_entities(const RawDocument& raw, const Vocabulary& vocab,
                                   const std::map<Index, double>& scores) {
  PredictedRanking out;
  out.doc_id = raw.doc_id;
  std::set<std::string> seen;
  struct Row {
    Index index;
    std::string id;
    double score;
  };
  std::vector<Row> rows;
  for (const auto& m : raw.entities) {
    if (m.positions.empty() || !seen.insert(m.entity_id).second) continue;
    const Index e = vocab.entity_index(m.entity_id);
    rows.push_back({e, m.entity_id, scores.at(e)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.index != b.index) return a.index < b.index;
    return a.id < b.id;
  });
  for (const auto& r : rows) out.entities.emplace_back(r.id, r.score);
  return out;
}

void cmd_predict(const PredictOptions& o, const CLI::App* app) {
  RunManifest manifest("predict", snapshot(app), o.seed);
  manifest.add_input("docs", o.docs);
  const auto raw = read_documents(fs::path(o.docs));

  Model model;
  const bool needs_model = o.method != "frequency";
  if (needs_model) {
    if (o.model.empty()) throw ValidationError("--method " + o.method + " requires --model");
    manifest.add_input("model", o.model);
    model = load_checkpoint(fs::path(o.model));
  } else {
    // Every mentioned entity keeps its own index.
    model.vocab = build_vocabulary(raw, 1);
  }
  const auto docs = encode_documents(raw, model.vocab);

  std::function<std::map<Index, double>(const Document&)> scorer;
  if (o.method == "kesm") {
    scorer = [&](const Document& d) {
      std::map<Index, double> s;
      for (const auto& r : rank_entities(d, model.descriptions, model.params, model.bank)) {
        s[r.entity] = r.score;
      }
      return s;
    };
  } else if (o.method == "frequency") {
    scorer = [](const Document& d) { return frequency_scores(d); };
  } else if (o.method == "pagerank") {
    double alpha = 0.5;
    if (o.alpha) {
      alpha = *o.alpha;
    } else if (!o.dev.empty()) {
      manifest.add_input("dev", o.dev);
      const auto dev = encode_documents(read_documents(fs::path(o.dev)), model.vocab);
      alpha = fit_pagerank_alpha(dev, model.descriptions, model.params);
      info("pagerank alpha fit on dev: " + format_value(alpha));
    }
    manifest.set_note("alpha", format_value(alpha));
    scorer = [&, alpha](const Document& d) {
      return d.mentions.empty() ? std::map<Index, double>{}
                                : pagerank_scores(d, model.descriptions, model.params, alpha);
    };
  } else if (o.method == "letor") {
    if (o.letor_train.empty()) throw ValidationError("--method letor requires --letor-train");
    manifest.add_input("letor_train", o.letor_train);
    const auto train = encode_documents(read_documents(fs::path(o.letor_train)), model.vocab);
    const auto pairs = letor_training_pairs(train, model.params);
    if (pairs.empty()) throw ValidationError("--letor-train yields no salience pairs");
    LinearTrainConfig config;
    config.seed = o.seed;
    auto ranker = std::make_shared<LinearRankerParams>(
        train_linear_pairwise(pairs, letor_feature_names(), config).params);
    scorer = [&model, ranker](const Document& d) { return letor_scores(d, model.params, *ranker); };
  }

  std::vector<PredictedRanking> predictions(docs.size());
  parallel_for(docs.size(), o.threads, [&](std::size_t i) {
    predictions[i] = rank_raw_entities(raw[i], model.vocab, scorer(docs[i]));
  });

  write_atomic(o.out, [&](std::ostream& out) {
    for (const auto& p : predictions) {
      int rank = 0;
      for (const auto& [id, score] : p.entities) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.9g", score);
        out << p.doc_id << '\t' << id << '\t' << ++rank << '\t' << buf << '\n';
      }
    }
  });
  manifest.add_output(o.out);
  manifest.write(manifest_path(o.out));
}

// ----------------------------------------------------------------------- eval

// doc_id -> ranked entity ids, from `doc_id<TAB>entity_id<TAB>rank<TAB>score`.
std::map<std::string, std::vector<std::string>> read_predictions(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::map<std::string, std::vector<std::pair<int, std::string>>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string doc, entity, rank_text;
    if (!std::getline(fields, doc, '\t') || !std::getline(fields, entity, '\t') ||
        !std::getline(fields, rank_text, '\t')) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected doc_id, entity_id, rank, score");
    }
    int rank = 0;
    try {
      rank = std::stoi(rank_text);
    } catch (const std::exception&) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": invalid rank");
    }
    rows[doc].emplace_back(rank, entity);
  }
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [doc, list] : rows) {
    std::stable_sort(list.begin(), list.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [rank, entity] : list) out[doc].push_back(std::move(entity));
  }
  return out;
}

struct EvalOptions {
  std::vector<std::string> inputs;  // predictions or runs
  std::string docs;
  std::string qrels;
  std::string out;
  std::size_t permutations = kDefaultPermutations;
  std::uint64_t seed = 1;
};

// metric -> unit -> value, per labelled system.
using MetricTable = std::map<std::string, std::map<std::string, double>>;

std::vector<std::string> labels_for(const std::vector<std::string>& paths) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::string label = fs::path(paths[i]).stem().string();
    if (std::count(labels.begin(), labels.end(), label) > 0) label += "#" + std::to_string(i);
    labels.push_back(label);
  }
  return labels;
}

void write_report(const EvalOptions& o, const std::vector<std::string>& metrics,
                  const std::vector<std::string>& labels, const std::vector<MetricTable>& tables) {
  auto emit = [&](std::ostream& out) {
    const bool multi = labels.size() > 1;
    for (std::size_t s = 0; s < tables.size(); ++s) {
      const std::string prefix = multi ? labels[s] + ":" : "";
      for (const auto& metric : metrics) {
        const auto& units = tables[s].at(metric);
        double sum = 0.0;
        for (const auto& [unit, v] : units) {
          out << unit << '\t' << prefix << metric << '\t' << format_value(v) << '\n';
          sum += v;
        }
        out << "ALL\t" << prefix << metric << '\t'
            << format_value(units.empty() ? 0.0 : sum / static_cast<double>(units.size())) << '\n';
      }
    }
    for (std::size_t s = 1; s < tables.size(); ++s) {
      const std::string prefix = labels[s] + "-vs-" + labels[0] + ":";
      for (const auto& metric : metrics) {
        const auto& a = tables[s].at(metric);
        const auto& b = tables[0].at(metric);
        const WinTieLoss wtl = win_tie_loss(a, b);
        std::vector<double> diffs;
        for (const auto& [unit, v] : a) diffs.push_back(v - b.at(unit));
        const double p = permutation_test(diffs, o.permutations, o.seed);
        out << "ALL\t" << prefix << metric << ":win\t" << wtl.win << '\n';
        out << "ALL\t" << prefix << metric << ":tie\t" << wtl.tie << '\n';
        out << "ALL\t" << prefix << metric << ":loss\t" << wtl.loss << '\n';
        out << "ALL\t" << prefix << metric << ":p_value\t" << format_value(p) << '\n';
      }
    }
  };
  if (o.out.empty()) {
    emit(std::cout);
  } else {
    write_atomic(o.out, emit);
  }
}

void cmd_eval_salience(const EvalOptions& o, const CLI::App* app) {
  RunManifest manifest("eval salience", snapshot(app), o.seed);
  manifest.add_input("docs", o.docs);
  const auto raw = read_documents(fs::path(o.docs));
  std::vector<std::pair<std::string, std::set<std::string>>> units;
  std::size_t skipped = 0;
  for (const auto& d : raw) {
    std::set<std::string> mentioned;
    for (const auto& m : d.entities) {
      if (!m.positions.empty()) mentioned.insert(m.entity_id);
    }
    std::set<std::string> relevant;
    for (const auto& s : d.salient) {
      if (mentioned.count(s)) relevant.insert(s);
    }
    if (relevant.empty()) {
      ++skipped;
      continue;
    }
    units.emplace_back(d.doc_id, std::move(relevant));
  }
  if (skipped > 0) warn(std::to_string(skipped) + " documents without salient labels skipped");

  const std::vector<std::string> metrics = {"P@1", "P@5", "R@1", "R@5"};
  std::vector<MetricTable> tables;
  for (const auto& path : o.inputs) {
    manifest.add_input("pred", path);
    const auto predictions = read_predictions(path);
    MetricTable table;
    for (const auto& m : metrics) table[m];
    for (const auto& [doc_id, relevant] : units) {
      auto it = predictions.find(doc_id);
      const std::vector<std::string> ranking = it == predictions.end() ? std::vector<std::string>{} : it->second;
      for (int k : {1, 5}) {
        const auto pr = precision_recall_at_k(ranking, relevant, k);
        table["P@" + std::to_string(k)][doc_id] = pr->precision;
        table["R@" + std::to_string(k)][doc_id] = pr->recall;
      }
    }
    tables.push_back(std::move(table));
  }
  write_report(o, metrics, labels_for(o.inputs), tables);
  if (!o.out.empty()) {
    manifest.add_output(o.out);
    manifest.write(manifest_path(o.out));
  }
}

void cmd_eval_search(const EvalOptions& o, const CLI::App* app) {
  RunManifest manifest("eval search", snapshot(app), o.seed);
  manifest.add_input("qrels", o.qrels);
  const Qrels qrels = read_qrels(fs::path(o.qrels));
  int g_max = 1;
  for (const auto& [q, docs] : qrels) {
    for (const auto& [d, g] : docs) g_max = std::max(g_max, g);
  }

  std::vector<std::map<std::string, std::vector<std::string>>> rankings;
  std::set<std::string> run_queries;
  for (const auto& path : o.inputs) {
    manifest.add_input("run", path);
    auto run = read_run(fs::path(path));
    std::stable_sort(run.begin(), run.end(),
                     [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
    std::map<std::string, std::vector<std::string>> by_query;
    for (const auto& e : run) {
      by_query[e.query_id].push_back(e.doc_id);
      run_queries.insert(e.query_id);
    }
    rankings.push_back(std::move(by_query));
  }

  std::vector<std::string> units;
  std::size_t skipped = 0;
  for (const auto& q : run_queries) {
    auto it = qrels.find(q);
    const bool judged = it != qrels.end() &&
                        std::any_of(it->second.begin(), it->second.end(),
                                    [](const auto& kv) { return kv.second > 0; });
    if (judged) {
      units.push_back(q);
    } else {
      ++skipped;
    }
  }
  if (skipped > 0) warn(std::to_string(skipped) + " run queries without relevant judgments skipped");

  const std::string ndcg = "NDCG@" + std::to_string(kSearchCutoff);
  const std::string err = "ERR@" + std::to_string(kSearchCutoff);
  std::vector<MetricTable> tables;
  for (const auto& by_query : rankings) {
    MetricTable table;
    table[ndcg];
    table[err];
    for (const auto& q : units) {
      auto it = by_query.find(q);
      const std::vector<std::string> ranking = it == by_query.end() ? std::vector<std::string>{} : it->second;
      table[ndcg][q] = ndcg_at_k(ranking, qrels.at(q), kSearchCutoff).value_or(0.0);
      table[err][q] = err_at_k(ranking, qrels.at(q), kSearchCutoff, g_max);
    }
    tables.push_back(std::move(table));
  }
  write_report(o, {ndcg, err}, labels_for(o.inputs), tables);
  if (!o.out.empty()) {
    manifest.add_output(o.out);
    manifest.write(manifest_path(o.out));
  }
}

// ------------------------------------------------------------------- features

struct FeaturesOptions {
  std::string model;
  std::string queries;
  std::string docs;
  std::string base;
  std::string qrels;
  std::string out;
  double floor = kFeatureFloor;
  int threads = 1;
};

void cmd_features(const FeaturesOptions& o, const CLI::App* app) {
  if (!(o.floor > 0.0)) throw ValidationError("--floor must be > 0");
  RunManifest manifest("features", snapshot(app), 0);
  manifest.add_input("model", o.model);
  manifest.add_input("queries", o.queries);
  manifest.add_input("docs", o.docs);
  manifest.add_input("base", o.base);
  const Model model = load_checkpoint(fs::path(o.model));

  std::map<std::string, Query> queries;
  for (const auto& q : read_queries(fs::path(o.queries))) queries[q.query_id] = encode_query(q, model.vocab);
  std::map<std::string, Document> docs;
  for (const auto& d : read_documents(fs::path(o.docs))) docs[d.doc_id] = encode_document(d, model.vocab);
  const auto run = read_run(fs::path(o.base));
  Qrels qrels;
  if (!o.qrels.empty()) {
    manifest.add_input("qrels", o.qrels);
    qrels = read_qrels(fs::path(o.qrels));
  }

  std::size_t missing_docs = 0;
  std::size_t fallbacks = 0;
  for (const auto& e : run) {
    if (!queries.count(e.query_id)) {
      throw ValidationError("base run query '" + e.query_id + "' not found in --queries");
    }
    if (!docs.count(e.doc_id)) ++missing_docs;
  }
  if (missing_docs > 0) warn(std::to_string(missing_docs) + " run documents missing from --docs");

  const std::size_t K = model.bank.size();
  std::vector<RankingInstance> instances(run.size());
  std::vector<char> fallback(run.size(), 0);
  parallel_for(run.size(), o.threads, [&](std::size_t i) {
    const RunEntry& e = run[i];
    const Query& q = queries.at(e.query_id);
    auto doc = docs.find(e.doc_id);
    Vector psi;
    if (doc == docs.end() || doc->second.mentions.empty() || q.entities.empty()) {
      psi = all_floor_features(K, q.entities.size(), o.floor);
      fallback[i] = 1;
    } else {
      psi = query_doc_features(q, doc->second, model.descriptions, model.params, model.bank, o.floor);
    }
    RankingInstance& inst = instances[i];
    inst.query_id = e.query_id;
    inst.doc_id = e.doc_id;
    inst.features.resize(psi.size() + 1);
    inst.features << psi, e.score;
    auto qit = qrels.find(e.query_id);
    if (qit != qrels.end()) {
      auto dit = qit->second.find(e.doc_id);
      if (dit != qit->second.end()) inst.grade = dit->second;
    }
  });
  for (char f : fallback) fallbacks += static_cast<std::size_t>(f);
  if (fallbacks > 0) warn(std::to_string(fallbacks) + " pairs received the all-floor feature vector");

  write_atomic(o.out, [&](std::ostream& out) { export_features(instances, out); });
  manifest.add_output(o.out);
  manifest.write(manifest_path(o.out));
}

// --------------------------------------------------------------------- rerank

struct RerankOptions {
  std::string features;
  std::string base;
  std::string out;
  std::string tag = "kesm";
  RankerTrainConfig config;
  std::uint64_t seed = 1;
  int threads = 1;
};

void cmd_rerank(RerankOptions o, const CLI::App* app) {
  RunManifest manifest("rerank", snapshot(app), o.seed);
  manifest.add_input("features", o.features);
  manifest.add_input("base", o.base);
  const auto instances = read_features(fs::path(o.features));
  const auto base = read_run(fs::path(o.base));
  if (instances.empty()) throw ValidationError("feature file is empty");

  const auto dim = static_cast<std::size_t>(instances.front().features.size());
  std::vector<std::string> names;
  if (dim % 2 == 1) {
    names = ranking_feature_names((dim - 1) / 2);
  } else {
    for (std::size_t i = 0; i < dim; ++i) names.push_back("f" + std::to_string(i + 1));
  }
  o.config.linear.seed = o.seed;
  const CrossValidationResult cv = train_ranker(instances, names, o.config);
  if (cv.skipped_queries > 0) {
    warn(std::to_string(cv.skipped_queries) + " queries without relevant/irrelevant pairs");
  }
  RerankStats stats;
  const auto reranked = rerank_run(base, cv.scores, o.tag, &stats);
  if (stats.missing_scores > 0) {
    warn(std::to_string(stats.missing_scores) + " base entries without features ranked last");
  }
  write_atomic(o.out, [&](std::ostream& out) { write_run(out, reranked); });
  manifest.add_output(o.out);
  manifest.write(manifest_path(o.out));
}

// -------------------------------------------------------------- gen-synthetic

struct SyntheticOptions {
  std::string spec;
  std::uint64_t seed = 1;
  std::string out;
};

void cmd_gen_synthetic(const SyntheticOptions& o, const CLI::App* app) {
  RunManifest manifest("gen-synthetic", snapshot(app), o.seed);
  SyntheticSpec spec;
  if (!o.spec.empty()) {
    manifest.add_input("spec", o.spec);
    spec = load_synthetic_spec(o.spec);
  }
  const SyntheticCorpus corpus = generate_synthetic_corpus(spec, o.seed);
  fs::create_directories(o.out);
  const fs::path dir(o.out);
  write_atomic(dir / "train.jsonl", [&](std::ostream& out) { write_documents(out, corpus.train); });
  write_atomic(dir / "dev.jsonl", [&](std::ostream& out) { write_documents(out, corpus.dev); });
  write_atomic(dir / "test.jsonl", [&](std::ostream& out) { write_documents(out, corpus.test); });
  write_atomic(dir / "descriptions.jsonl",
               [&](std::ostream& out) { write_descriptions(out, corpus.descriptions); });
  for (const char* name : {"train.jsonl", "dev.jsonl", "test.jsonl", "descriptions.jsonl"}) {
    manifest.add_output(dir / name);
  }
  manifest.write(dir / "manifest.json");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Entity salience estimation and salience-based re-ranking toolkit", "kesm"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string("kesm ") + KESM_VERSION + " (checkpoint format " +
                           std::to_string(kCheckpointFormatVersion) + ")");
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");

  BuildVocabOptions vocab_opts;
  auto* vocab_cmd = app.add_subcommand("build-vocab", "Build the word/entity vocabulary");
  vocab_cmd->add_option("--docs", vocab_opts.docs, "Training documents (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  vocab_cmd->add_option("--min-count", vocab_opts.min_count, "Minimum occurrences to keep a symbol")
      ->capture_default_str();
  vocab_cmd->add_option("--out", vocab_opts.out, "Vocabulary file")->required();

  TrainOptions train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train the kernel salience model");
  train_cmd->add_option("--train", train_opts.train)->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--dev", train_opts.dev)->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--desc", train_opts.desc, "Entity descriptions")->check(CLI::ExistingFile);
  train_cmd->add_option("--vocab", train_opts.vocab, "Vocabulary (default: built from --train)")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--init-embeddings", train_opts.init_embeddings)->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_opts.out, "Checkpoint file")->required();
  train_cmd->add_option("--min-count", train_opts.min_count)->capture_default_str();
  train_cmd->add_option("--seed", train_opts.config.seed)->capture_default_str();
  train_cmd->add_option("--lr", train_opts.config.lr)->capture_default_str();
  train_cmd->add_option("--batch-size", train_opts.config.batch_size)->capture_default_str();
  train_cmd->add_option("--epochs", train_opts.config.max_epochs)->capture_default_str();
  train_cmd->add_option("--patience", train_opts.config.patience)->capture_default_str();
  train_cmd->add_option("--eval-interval", train_opts.config.eval_interval)->capture_default_str();
  train_cmd->add_option("--max-pairs", train_opts.config.max_pairs)->capture_default_str();
  train_cmd->add_option("--dim", train_opts.config.dim)->capture_default_str();
  train_cmd->add_option("--init-scale", train_opts.config.init_scale)->capture_default_str();
  train_cmd->add_option("--threads", train_opts.config.threads)->capture_default_str();

  PredictOptions predict_opts;
  auto* predict_cmd = app.add_subcommand("predict", "Rank the entities of each document");
  predict_cmd->add_option("--model", predict_opts.model)->check(CLI::ExistingFile);
  predict_cmd->add_option("--docs", predict_opts.docs)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--method", predict_opts.method)
      ->check(CLI::IsMember({"kesm", "frequency", "pagerank", "letor"}))
      ->capture_default_str();
  predict_cmd->add_option("--out", predict_opts.out)->required();
  predict_cmd->add_option("--alpha", predict_opts.alpha, "PageRank mixture weight")
      ->check(CLI::Range(0.0, 1.0));
  predict_cmd->add_option("--dev", predict_opts.dev, "Dev documents for fitting the PageRank alpha")
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--letor-train", predict_opts.letor_train,
                          "Training documents for the LeToR-lite ranker")
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--seed", predict_opts.seed)->capture_default_str();
  predict_cmd->add_option("--threads", predict_opts.threads)->capture_default_str();

  EvalOptions salience_opts;
  EvalOptions search_opts;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate predictions or runs");
  eval_cmd->require_subcommand(1);
  auto* eval_salience = eval_cmd->add_subcommand("salience", "P@{1,5}, R@{1,5}, W/T/L, p-value");
  eval_salience->add_option("--pred", salience_opts.inputs)->required()->check(CLI::ExistingFile);
  eval_salience->add_option("--docs", salience_opts.docs)->required()->check(CLI::ExistingFile);
  eval_salience->add_option("--out", salience_opts.out, "Report file (default: stdout)");
  eval_salience->add_option("--permutations", salience_opts.permutations)->capture_default_str();
  eval_salience->add_option("--seed", salience_opts.seed)->capture_default_str();
  auto* eval_search = eval_cmd->add_subcommand("search", "NDCG@20, ERR@20, W/T/L, p-value");
  eval_search->add_option("--run", search_opts.inputs)->required()->check(CLI::ExistingFile);
  eval_search->add_option("--qrels", search_opts.qrels)->required()->check(CLI::ExistingFile);
  eval_search->add_option("--out", search_opts.out, "Report file (default: stdout)");
  eval_search->add_option("--permutations", search_opts.permutations)->capture_default_str();
  eval_search->add_option("--seed", search_opts.seed)->capture_default_str();

  FeaturesOptions features_opts;
  auto* features_cmd = app.add_subcommand("features", "Export salience ranking features");
  features_cmd->add_option("--model", features_opts.model)->required()->check(CLI::ExistingFile);
  features_cmd->add_option("--queries", features_opts.queries)->required()->check(CLI::ExistingFile);
  features_cmd->add_option("--docs", features_opts.docs)->required()->check(CLI::ExistingFile);
  features_cmd->add_option("--base", features_opts.base)->required()->check(CLI::ExistingFile);
  features_cmd->add_option("--qrels", features_opts.qrels)->check(CLI::ExistingFile);
  features_cmd->add_option("--out", features_opts.out)->required();
  features_cmd->add_option("--floor", features_opts.floor)->capture_default_str();
  features_cmd->add_option("--threads", features_opts.threads)->capture_default_str();

  RerankOptions rerank_opts;
  auto* rerank_cmd = app.add_subcommand("rerank", "Cross-validated re-ranking of a base run");
  rerank_cmd->add_option("--features", rerank_opts.features)->required()->check(CLI::ExistingFile);
  rerank_cmd->add_option("--base", rerank_opts.base)->required()->check(CLI::ExistingFile);
  rerank_cmd->add_option("--out", rerank_opts.out)->required();
  rerank_cmd->add_option("--tag", rerank_opts.tag)->capture_default_str();
  rerank_cmd->add_option("--folds", rerank_opts.config.folds)->check(CLI::PositiveNumber)->capture_default_str();
  rerank_cmd->add_option("--lambda", rerank_opts.config.linear.lambda)->capture_default_str();
  rerank_cmd->add_option("--lr", rerank_opts.config.linear.lr)->capture_default_str();
  rerank_cmd->add_option("--epochs", rerank_opts.config.linear.epochs)->capture_default_str();
  rerank_cmd->add_option("--seed", rerank_opts.seed)->capture_default_str();
  rerank_cmd->add_option("--threads", rerank_opts.threads)->capture_default_str();

  SyntheticOptions synthetic_opts;
  auto* synthetic_cmd = app.add_subcommand("gen-synthetic", "Generate a synthetic salience corpus");
  synthetic_cmd->add_option("--spec", synthetic_opts.spec, "Generator config (TOML or JSON)")
      ->check(CLI::ExistingFile);
  synthetic_cmd->add_option("--seed", synthetic_opts.seed)->capture_default_str();
  synthetic_cmd->add_option("--out", synthetic_opts.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*vocab_cmd) cmd_build_vocab(vocab_opts, vocab_cmd);
    if (*train_cmd) cmd_train(train_opts, train_cmd);
    if (*predict_cmd) cmd_predict(predict_opts, predict_cmd);
    if (*eval_salience) cmd_eval_salience(salience_opts, eval_salience);
    if (*eval_search) cmd_eval_search(search_opts, eval_search);
    if (*features_cmd) cmd_features(features_opts, features_cmd);
    if (*rerank_cmd) cmd_rerank(rerank_opts, rerank_cmd);
    if (*synthetic_cmd) cmd_gen_synthetic(synthetic_opts, synthetic_cmd);
  } catch (const ValidationError& e) {
    std::cerr << "kesm: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kesm: error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace kesm::cli
