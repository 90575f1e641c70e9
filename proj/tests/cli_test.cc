#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "cli.h"
#include "fixtures.h"
#include "kesm/checkpoint.h"
#include "kesm/corpus_io.h"
#include "kesm/trec_io.h"
#include "manifest.h"

namespace kesm {
namespace {

namespace fs = std::filesystem;
using testing::read_text;
using testing::write_text;

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "kesm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir();
    write_text(*dir_ / "spec.toml",
               "num_topics = 3\nentities_per_topic = 6\ntrain_docs = 40\ndev_docs = 20\ntest_docs = 20\n"
               "words_per_topic = 12\ngeneral_words = 15\n");
    ASSERT_EQ(run({"gen-synthetic", "--spec", path("spec.toml"), "--seed", "3", "--out", path("corpus")}), 0);
    ASSERT_EQ(run({"train", "--train", path("corpus/train.jsonl"), "--dev", path("corpus/dev.jsonl"), "--desc",
                   path("corpus/descriptions.jsonl"), "--dim", "16", "--epochs", "3", "--batch-size", "16",
                   "--seed", "7", "--out", path("model.json")}),
              0);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string path(const std::string& name) { return (*dir_ / name).string(); }

  static testing::TempDir* dir_;
};

testing::TempDir* Cli::dir_ = nullptr;

TEST_F(Cli, VersionAndHelpExitZero) {
  EXPECT_EQ(run({"--version"}), 0);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"no-such-command"}), 2);
}

TEST_F(Cli, GenSyntheticWritesSplitsAndManifest) {
  for (const char* f : {"train.jsonl", "dev.jsonl", "test.jsonl", "descriptions.jsonl", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(*dir_ / "corpus" / f)) << f;
  }
  EXPECT_EQ(read_documents(fs::path(path("corpus/train.jsonl"))).size(), 40u);
}

TEST_F(Cli, BuildVocabAndManifest) {
  ASSERT_EQ(run({"build-vocab", "--docs", path("corpus/train.jsonl"), "--min-count", "2", "--out", path("vocab.json")}), 0);
  const Vocabulary v = read_vocabulary(fs::path(path("vocab.json")));
  EXPECT_GT(v.num_words(), 1u);
  const auto manifest = nlohmann::json::parse(read_text(path("vocab.json.manifest.json")));
  EXPECT_EQ(manifest["command"], "build-vocab");
  EXPECT_EQ(manifest["inputs"][0]["sha256"], cli::file_sha256(path("corpus/train.jsonl")));
  EXPECT_TRUE(manifest.contains("toolkit_version"));
  EXPECT_TRUE(manifest["timings"].contains("wall_seconds"));
  EXPECT_NE(manifest["config"].get<std::string>().find("min-count"), std::string::npos);
}

TEST_F(Cli, BuildVocabErrors) {
  EXPECT_EQ(run({"build-vocab", "--docs", path("missing.jsonl"), "--out", path("v2.json")}), 2);
  EXPECT_FALSE(fs::exists(path("v2.json")));
  EXPECT_EQ(run({"build-vocab", "--docs", path("corpus/train.jsonl"), "--min-count", "0", "--out", path("v3.json")}), 2);
  EXPECT_FALSE(fs::exists(path("v3.json")));
}

TEST_F(Cli, TrainIsDeterministicAndUsesVocabFile) {
  ASSERT_EQ(run({"build-vocab", "--docs", path("corpus/train.jsonl"), "--out", path("tv.json")}), 0);
  std::vector<std::string> bytes;
  for (int i = 0; i < 2; ++i) {
    const std::string out = path("det-" + std::to_string(i) + ".json");
    ASSERT_EQ(run({"train", "--train", path("corpus/train.jsonl"), "--dev", path("corpus/dev.jsonl"), "--desc",
                   path("corpus/descriptions.jsonl"), "--vocab", path("tv.json"), "--seed", "7", "--dim", "8",
                   "--epochs", "1", "--out", out}),
              0);
    bytes.push_back(read_text(out));
    EXPECT_TRUE(fs::exists(out + ".manifest.json"));
  }
  EXPECT_EQ(bytes[0], bytes[1]);
  const Model m = load_checkpoint(fs::path(path("det-0.json")));
  EXPECT_EQ(m.vocab, read_vocabulary(fs::path(path("tv.json"))));
}

TEST_F(Cli, TrainRejectsUnlabelledDev) {
  auto docs = read_documents(fs::path(path("corpus/dev.jsonl")));
  for (auto& d : docs) d.salient.clear();
  std::ostringstream out;
  write_documents(out, docs);
  write_text(*dir_ / "nolabels.jsonl", out.str());
  EXPECT_EQ(run({"train", "--train", path("corpus/train.jsonl"), "--dev", path("nolabels.jsonl"), "--dim", "8",
                 "--out", path("never.json")}),
            2);
  EXPECT_FALSE(fs::exists(path("never.json")));
  EXPECT_EQ(run({"train", "--train", path("corpus/train.jsonl"), "--dev", path("corpus/dev.jsonl"),
                 "--batch-size", "0", "--out", path("never.json")}),
            2);
}

TEST_F(Cli, PredictMethods) {
  for (const char* method : {"kesm", "pagerank", "frequency"}) {
    const std::string out = path(std::string("pred-") + method + ".tsv");
    ASSERT_EQ(run({"predict", "--model", path("model.json"), "--docs", path("corpus/test.jsonl"), "--method",
                   method, "--out", out}),
              0)
        << method;
    std::istringstream lines(read_text(out));
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 3) << line;
  }
  ASSERT_EQ(run({"predict", "--model", path("model.json"), "--docs", path("corpus/test.jsonl"), "--method",
                 "letor", "--letor-train", path("corpus/train.jsonl"), "--out", path("pred-letor.tsv")}),
            0);
  EXPECT_EQ(run({"predict", "--model", path("model.json"), "--docs", path("corpus/test.jsonl"), "--method",
                 "letor", "--out", path("x.tsv")}),
            2);
}

TEST_F(Cli, PredictFrequencyNeedsNoModel) {
  EXPECT_EQ(run({"predict", "--docs", path("corpus/test.jsonl"), "--method", "frequency", "--out",
                 path("freq-nomodel.tsv")}),
            0);
  EXPECT_EQ(run({"predict", "--docs", path("corpus/test.jsonl"), "--method", "kesm", "--out", path("x.tsv")}), 2);
}

TEST_F(Cli, PredictUnknownMethod) {
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(run({"predict", "--docs", path("corpus/test.jsonl"), "--method", "bm25", "--out", path("x.tsv")}), 2);
  const std::string err = ::testing::internal::GetCapturedStderr();
  for (const char* m : {"kesm", "frequency", "pagerank", "letor"}) EXPECT_NE(err.find(m), std::string::npos);
}

TEST_F(Cli, EvalSalienceReport) {
  ASSERT_EQ(run({"predict", "--docs", path("corpus/test.jsonl"), "--method", "frequency", "--out", path("a.tsv")}), 0);
  ASSERT_EQ(run({"predict", "--model", path("model.json"), "--docs", path("corpus/test.jsonl"), "--out", path("b.tsv")}), 0);
  ASSERT_EQ(run({"eval", "salience", "--pred", path("a.tsv"), "--pred", path("b.tsv"), "--docs",
                 path("corpus/test.jsonl"), "--out", path("report.tsv")}),
            0);
  const std::string report = read_text(path("report.tsv"));
  for (const char* needle : {"ALL\ta:P@1\t", "ALL\tb:R@5\t", "ALL\tb-vs-a:P@1:win\t", "ALL\tb-vs-a:P@1:p_value\t",
                             "test-0000\ta:P@5\t"}) {
    EXPECT_NE(report.find(needle), std::string::npos) << needle;
  }
}

TEST_F(Cli, EvalSearchSkipsUnjudgedQueries) {
  write_text(*dir_ / "run.trec",
             "q1 Q0 d1 1 3.0 base\nq1 Q0 d2 2 2.0 base\nq2 Q0 d3 1 1.0 base\nq9 Q0 d4 1 1.0 base\n");
  write_text(*dir_ / "qrels.txt", "q1 0 d1 0\nq1 0 d2 1\nq2 0 d3 2\n");
  ::testing::internal::CaptureStderr();
  ASSERT_EQ(run({"eval", "search", "--run", path("run.trec"), "--qrels", path("qrels.txt"), "--out",
                 path("search.tsv")}),
            0);
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_NE(err.find("1 run queries"), std::string::npos) << err;
  const std::string report = read_text(path("search.tsv"));
  EXPECT_NE(report.find("q1\tNDCG@20\t0.630930"), std::string::npos) << report;
  EXPECT_NE(report.find("q2\tERR@20\t0.750000"), std::string::npos) << report;
  EXPECT_EQ(report.find("q9\t"), std::string::npos);
  EXPECT_NE(report.find("ALL\tNDCG@20\t"), std::string::npos);
}

TEST_F(Cli, FeaturesThenRerank) {
  // Queries name entities from the synthetic vocabulary; one query entity is unseen.
  const auto docs = read_documents(fs::path(path("corpus/test.jsonl")));
  std::ostringstream queries, run_file, qrels;
  for (int q = 0; q < 6; ++q) {
    const std::string qid = "q" + std::to_string(q);
    const std::string entity = docs[static_cast<std::size_t>(q)].salient.front();
    queries << R"({"query_id":")" << qid << R"(","words":["w"],"entities":[")" << entity
            << (q == 0 ? R"(","unknown-entity"]})" : R"("]})") << "\n";
    for (int d = 0; d < 8; ++d) {
      const auto& doc = docs[static_cast<std::size_t>((q + d) % docs.size())];
      run_file << qid << " Q0 " << doc.doc_id << " " << d + 1 << " " << 10 - d << " base\n";
      qrels << qid << " 0 " << doc.doc_id << " " << (d == 0 ? 1 : 0) << "\n";
    }
  }
  run_file << "q0 Q0 missing-doc 9 1 base\n";
  write_text(*dir_ / "q.jsonl", queries.str());
  write_text(*dir_ / "base.trec", run_file.str());
  write_text(*dir_ / "base.qrels", qrels.str());
  ASSERT_EQ(run({"features", "--model", path("model.json"), "--queries", path("q.jsonl"), "--docs",
                 path("corpus/test.jsonl"), "--base", path("base.trec"), "--qrels", path("base.qrels"), "--out",
                 path("feat.svmlight")}),
            0);
  const auto instances = read_features(fs::path(path("feat.svmlight")));
  ASSERT_EQ(instances.size(), 49u);
  EXPECT_EQ(instances.front().features.size(), 23);
  EXPECT_EQ(instances.front().grade, 1);
  EXPECT_DOUBLE_EQ(instances.front().features[22], 10.0);  // base score is the last feature

  ASSERT_EQ(run({"rerank", "--features", path("feat.svmlight"), "--base", path("base.trec"), "--folds", "3",
                 "--seed", "7", "--out", path("kesm.trec")}),
            0);
  const auto reranked = read_run(fs::path(path("kesm.trec")));
  EXPECT_EQ(reranked.size(), 49u);
  EXPECT_EQ(reranked.front().tag, "kesm");
  EXPECT_TRUE(fs::exists(path("kesm.trec.manifest.json")));
  EXPECT_EQ(run({"rerank", "--features", path("feat.svmlight"), "--base", path("base.trec"), "--folds", "1",
                 "--out", path("never.trec")}),
            2);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  write_text(*dir_ / "cfg.toml", "[build-vocab]\nmin-count = 1000000\n");
  ASSERT_EQ(run({"--config", path("cfg.toml"), "build-vocab", "--docs", path("corpus/train.jsonl"), "--out",
                 path("cfg-vocab.json")}),
            0);
  EXPECT_EQ(read_vocabulary(fs::path(path("cfg-vocab.json"))).size(), 2u);
  ASSERT_EQ(run({"--config", path("cfg.toml"), "build-vocab", "--docs", path("corpus/train.jsonl"), "--min-count",
                 "1", "--out", path("cfg-vocab2.json")}),
            0);
  EXPECT_GT(read_vocabulary(fs::path(path("cfg-vocab2.json"))).size(), 2u);
}

TEST_F(Cli, RuntimeFailureExitsOneWithoutPartialOutput) {
  EXPECT_EQ(run({"build-vocab", "--docs", path("corpus/train.jsonl"), "--out", path("no/such/dir/v.json")}), 1);
  write_text(*dir_ / "broken.jsonl", "{\"doc_id\": \"x\", \"words\": 3}\n");
  EXPECT_EQ(run({"build-vocab", "--docs", path("broken.jsonl"), "--out", path("broken-vocab.json")}), 2);
  EXPECT_FALSE(fs::exists(path("broken-vocab.json")));
}

TEST(WriteAtomic, FailureLeavesNothingBehind) {
  testing::TempDir dir;
  const fs::path target = dir / "out.txt";
  EXPECT_THROW(cli::write_atomic(target,
                                 [](std::ostream& out) {
                                   out << "partial";
                                   throw std::runtime_error("boom");
                                 }),
               std::runtime_error);
  EXPECT_FALSE(fs::exists(target));
  EXPECT_TRUE(fs::is_empty(dir.path()));
  cli::write_atomic(target, [](std::ostream& out) { out << "done"; });
  EXPECT_EQ(read_text(target), "done");
}

TEST(Manifest, Sha256OfKnownContent) {
  testing::TempDir dir;
  write_text(dir / "abc", "abc");
  EXPECT_EQ(cli::file_sha256(dir / "abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace kesm
