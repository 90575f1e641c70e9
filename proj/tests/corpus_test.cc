#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.h"
#include "kesm/corpus_io.h"
#include "kesm/document.h"
#include "kesm/errors.h"
#include "kesm/synthetic.h"
#include "kesm/vocabulary.h"

namespace kesm {
namespace {

RawDocument raw_doc(std::string id, std::vector<std::string> words,
                    std::vector<RawMention> entities, std::vector<std::string> salient = {}) {
  return {std::move(id), std::move(words), std::move(entities), std::move(salient)};
}

TEST(Vocabulary, KeepsSymbolsAtMinCount) {
  const std::vector<RawDocument> docs = {
      raw_doc("d1", {"a", "a", "b", "a"}, {{"E1", {0, 1}}, {"E2", {2}}}),
      raw_doc("d2", {"c"}, {{"E2", {0}}})};
  const Vocabulary v = build_vocabulary(docs, 2);
  EXPECT_TRUE(v.has_word("a"));
  EXPECT_FALSE(v.has_word("b"));
  EXPECT_EQ(v.word_index("b"), v.unk_word());
  EXPECT_TRUE(v.has_entity("E1"));
  EXPECT_TRUE(v.has_entity("E2"));
  EXPECT_NE(v.entity_index("E1"), v.entity_index("E2"));
}

TEST(Vocabulary, EmptyStreamHasOnlyUnknowns) {
  const Vocabulary v = build_vocabulary(std::vector<RawDocument>{}, 2);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.symbol(v.unk_word()), "Unk_word");
  EXPECT_EQ(v.symbol(v.unk_entity()), "Unk_entity");
  EXPECT_EQ(v.word_index("anything"), 0);
  EXPECT_EQ(v.entity_index("anything"), v.unk_entity());
}

TEST(Vocabulary, WordAndEntityNamespacesAreSeparate) {
  const Vocabulary v = build_vocabulary(std::vector{raw_doc("d", {"x", "x"}, {{"x", {0, 1}}})}, 2);
  EXPECT_NE(v.word_index("x"), v.entity_index("x"));
  EXPECT_EQ(v.kind(v.word_index("x")), SymbolKind::kWord);
  EXPECT_EQ(v.kind(v.entity_index("x")), SymbolKind::kEntity);
}

TEST(Vocabulary, RejectsMinCountBelowOne) {
  EXPECT_THROW(build_vocabulary(std::vector<RawDocument>{}, 0), ValidationError);
}

TEST(Vocabulary, ShardedCountsMerge) {
  const std::vector<RawDocument> docs = {raw_doc("d1", {"a", "b"}, {{"E", {0}}}),
                                         raw_doc("d2", {"a", "c"}, {{"E", {1}}})};
  VocabularyBuilder left, right;
  left.add(docs[0]);
  right.add(docs[1]);
  left.merge(right);
  EXPECT_EQ(left.build(2), build_vocabulary(docs, 2));
}

TEST(Vocabulary, FileRoundTrip) {
  const Vocabulary v({"alpha", "beta"}, {"E1"});
  std::stringstream ss;
  write_vocabulary(ss, v);
  EXPECT_EQ(read_vocabulary(ss), v);
}

TEST(EncodeDocument, UnseenWordBecomesUnk) {
  const Vocabulary v({"known"}, {"E"});
  const Document d = encode_document(raw_doc("d", {"known", "zzz"}, {}), v);
  EXPECT_EQ(d.words[1], v.unk_word());
  EXPECT_EQ(d.words[0], v.word_index("known"));
}

TEST(EncodeDocument, UnmentionedSalientLabelIsDropped) {
  const Vocabulary v({"w"}, {"A", "B"});
  EncodeStats stats;
  const Document d = encode_document(raw_doc("d", {"w", "w"}, {{"A", {0}}}, {"A", "B"}), v, &stats);
  EXPECT_EQ(stats.dropped_labels, 1u);
  EXPECT_EQ(d.salient, std::vector<Index>{v.entity_index("A")});
}

TEST(EncodeDocument, IdentityEncode) {
  const Vocabulary v({"a", "b", "c", "d", "e"}, {"X", "Y"});
  const Document d = encode_document(raw_doc("d", {"a", "b", "c", "d", "e"}, {{"X", {0}}, {"Y", {3}}}), v);
  EXPECT_EQ(d.words.size(), 5u);
  EXPECT_EQ(d.mentions.size(), 2u);
  EXPECT_EQ(d.mentions[1].position, 3);
}

TEST(EncodeDocument, PositionOutOfRangeThrows) {
  const Vocabulary v({"a"}, {"X"});
  EXPECT_THROW(encode_document(raw_doc("d", {"a"}, {{"X", {1}}}), v), ValidationError);
  EXPECT_THROW(encode_document(raw_doc("d", {"a"}, {{"X", {-1}}}), v), ValidationError);
}

TEST(EncodeDocument, DuplicatePositionsCountTwice) {
  const Vocabulary v({"a"}, {"X"});
  const Document d = encode_document(raw_doc("d", {"a"}, {{"X", {0, 0}}}), v);
  EXPECT_EQ(d.mention_count(v.entity_index("X")), 2u);
}

TEST(ParseDocument, MalformedRecordNamesIdAndField) {
  try {
    parse_document(R"({"doc_id":"doc-9","words":["a"],"entities":[{"id":"E","positions":["x"]}]})");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.record_id(), "doc-9");
    EXPECT_EQ(e.field(), "entities.positions");
  }
  EXPECT_THROW(parse_document(R"({"doc_id":"d","words":[],"entities":[{"id":"E","positions":[0]}]})"),
               FormatError);
  EXPECT_THROW(parse_document("{not json"), FormatError);
}

TEST(ParseDocument, WriteThenReadRoundTrip) {
  const std::vector<RawDocument> docs = {raw_doc("d1", {"a", "b"}, {{"E", {0, 1}}}, {"E"}),
                                         raw_doc("d2", {}, {})};
  std::stringstream ss;
  write_documents(ss, docs);
  const auto back = read_documents(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].doc_id, "d1");
  EXPECT_EQ(back[0].entities[0].positions, (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(back[0].salient, std::vector<std::string>{"E"});
  EXPECT_TRUE(back[1].words.empty());
}

TEST(Descriptions, TruncatedToTwentyWords) {
  const Vocabulary v({"w"}, {"E"});
  const std::vector<RawDescription> records = {{"E", std::vector<std::string>(30, "w")}};
  const DescriptionStore store = load_descriptions(records, v);
  ASSERT_NE(store.find(v.entity_index("E")), nullptr);
  EXPECT_EQ(store.find(v.entity_index("E"))->size(), 20u);
}

TEST(Descriptions, EmptyIsDistinctFromAbsent) {
  const Vocabulary v({"w"}, {"E", "F"});
  const std::vector<RawDescription> records = {{"E", {}}};
  const DescriptionStore store = load_descriptions(records, v);
  ASSERT_NE(store.find(v.entity_index("E")), nullptr);
  EXPECT_TRUE(store.find(v.entity_index("E"))->empty());
  EXPECT_EQ(store.find(v.entity_index("F")), nullptr);
}

TEST(Descriptions, UnknownEntitySkippedAndDuplicateLastWins) {
  const Vocabulary v({"a", "b"}, {"E"});
  const std::vector<RawDescription> records = {{"Q", {"a"}}, {"E", {"a"}}, {"E", {"b", "b"}}};
  DescriptionStats stats;
  const DescriptionStore store = load_descriptions(records, v, 20, &stats);
  EXPECT_EQ(stats.skipped_unknown, 1u);
  EXPECT_EQ(stats.duplicates, 1u);
  EXPECT_EQ(store.find(v.entity_index("E"))->size(), 2u);
  EXPECT_THROW(load_descriptions(records, v, 0), ValidationError);
}

Document labelled(std::vector<Index> entities, std::vector<Index> salient) {
  Document d;
  d.doc_id = "d";
  d.words.assign(entities.size(), 0);
  for (std::size_t i = 0; i < entities.size(); ++i) d.mentions.push_back({entities[i], static_cast<std::int32_t>(i)});
  d.salient = std::move(salient);
  return d;
}

TEST(SaliencePairs, FullCrossProduct) {
  const auto pairs = make_salience_pairs(labelled({10, 11, 12}, {10}), 0, 1, 10);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].positive, 10);
  EXPECT_EQ(pairs[0].negative, 11);
  EXPECT_EQ(pairs[1].negative, 12);
}

TEST(SaliencePairs, DegenerateDocumentsYieldNothing) {
  EXPECT_TRUE(make_salience_pairs(labelled({10, 11}, {}), 0, 1).empty());
  EXPECT_TRUE(make_salience_pairs(labelled({10, 11}, {10, 11}), 0, 1).empty());
}

TEST(SaliencePairs, SampledSubsetIsDeterministic) {
  std::vector<Index> entities;
  for (Index e = 10; e < 40; ++e) entities.push_back(e);
  const Document d = labelled(entities, {10, 11, 12, 13, 14});
  const auto a = make_salience_pairs(d, 3, 42, 20);
  const auto b = make_salience_pairs(d, 3, 42, 20);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].positive, b[i].positive);
    EXPECT_EQ(a[i].negative, b[i].negative);
    EXPECT_EQ(a[i].doc, 3u);
  }
}

TEST(Synthetic, StopEntityIsMostFrequentButNeverSalient) {
  SyntheticSpec spec;
  spec.num_topics = 1;
  spec.train_docs = 1;
  spec.dev_docs = 1;
  spec.test_docs = 1;
  const SyntheticCorpus c = generate_synthetic_corpus(spec, 3);
  const RawDocument& d = c.train.front();
  std::size_t stop = 0, best_other = 0;
  for (const auto& m : d.entities) {
    if (m.entity_id == kStopEntity) {
      stop = m.positions.size();
    } else {
      best_other = std::max(best_other, m.positions.size());
    }
  }
  EXPECT_GT(stop, best_other);
  ASSERT_FALSE(d.salient.empty());
  for (const auto& s : d.salient) EXPECT_NE(s, kStopEntity);
}

TEST(Synthetic, SameSeedSameBytes) {
  testing::TempDir a, b;
  write_synthetic_corpus(generate_synthetic_corpus(SyntheticSpec{}, 9), a.path());
  write_synthetic_corpus(generate_synthetic_corpus(SyntheticSpec{}, 9), b.path());
  for (const char* f : {"train.jsonl", "dev.jsonl", "test.jsonl", "descriptions.jsonl"}) {
    EXPECT_EQ(testing::read_text(a / f), testing::read_text(b / f)) << f;
  }
}

TEST(Synthetic, InconsistentSpecRejected) {
  SyntheticSpec spec;
  spec.num_topics = 0;
  EXPECT_THROW(generate_synthetic_corpus(spec, 1), ValidationError);
  EXPECT_THROW(synthetic_spec_from_map({{"num_topics", "many"}}), ValidationError);
  EXPECT_THROW(synthetic_spec_from_map({{"no_such_key", "1"}}), ValidationError);
}

TEST(Synthetic, SpecFromTomlAndJson) {
  testing::TempDir dir;
  testing::write_text(dir / "s.toml", "num_topics = 2\ntrain_docs = 7\n");
  testing::write_text(dir / "s.json", R"({"num_topics": 3, "topic_word_ratio": 0.5})");
  const SyntheticSpec toml = load_synthetic_spec(dir / "s.toml");
  EXPECT_EQ(toml.num_topics, 2);
  EXPECT_EQ(toml.train_docs, 7);
  const SyntheticSpec json = load_synthetic_spec(dir / "s.json");
  EXPECT_EQ(json.num_topics, 3);
  EXPECT_DOUBLE_EQ(json.topic_word_ratio, 0.5);
}

}  // namespace
}  // namespace kesm
