#include <doctest.h>

#include <random>

#include "medex/postprocess.hpp"

using namespace medex;

namespace {

SubwordToken sub(std::string text, std::size_t word_index, std::size_t start, std::size_t end) {
  SubwordToken t;
  t.text = std::move(text);
  t.word_index = word_index;
  t.span = {start, end};
  return t;
}

WordPrediction word(std::size_t index, std::size_t start, std::size_t end, std::string label) {
  WordPrediction w;
  w.word_index = index;
  w.span = {start, end};
  w.label = std::move(label);
  return w;
}

}  // namespace

TEST_CASE("aggregate_word_labels: the first subword's label wins") {
  PredictedSequence seq;
  seq.doc_id = "d";
  seq.subwords = {sub("li", 0, 0, 2), sub("##sino", 0, 2, 6), sub("##pril", 0, 6, 10)};
  seq.labels = {"B-Drug", "O", "I-Drug"};
  auto words = aggregate_word_labels(seq);
  REQUIRE(words.size() == 1);
  CHECK(words[0].label == "B-Drug");
  CHECK(words[0].span == Span{0, 10});
}

TEST_CASE("aggregate_word_labels identity cases") {
  PredictedSequence seq;
  seq.doc_id = "d";
  seq.subwords = {sub("x", 0, 0, 1), sub("y", 1, 2, 3), sub("##z", 1, 3, 4)};
  seq.labels = {"O", "I-Drug", "I-Drug"};
  auto words = aggregate_word_labels(seq);
  REQUIRE(words.size() == 2);
  CHECK(words[0].label == "O");
  CHECK(words[1].label == "I-Drug");
}

TEST_CASE("decode_mentions merges B/I runs into one span") {
  ClinicalNote note("d", "abcd efgh ij");
  auto mentions = decode_mentions(
      note, {word(0, 0, 4, "B-Drug"), word(1, 5, 9, "I-Drug"), word(2, 10, 12, "O")},
      TaskMode::Task1);
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].span == Span{0, 9});
  CHECK(mentions[0].surface == "abcd efgh");
  CHECK(!mentions[0].event.has_value());
}

TEST_CASE("decode_mentions repairs an orphan I to B") {
  ClinicalNote note("d", "abcd efgh ij");
  auto mentions = decode_mentions(
      note, {word(0, 0, 4, "O"), word(1, 5, 9, "I-Drug"), word(2, 10, 12, "O")}, TaskMode::Task1);
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].span == Span{5, 9});
}

TEST_CASE("decode_mentions: all O decodes to nothing; type switches split runs") {
  ClinicalNote note("d", "abcd efgh ij");
  CHECK(decode_mentions(note, {word(0, 0, 4, "O"), word(1, 5, 9, "O")}, TaskMode::Task1).empty());

  auto mentions = decode_mentions(
      note,
      {word(0, 0, 4, "B-Disposition"), word(1, 5, 9, "I-NoDisposition"), word(2, 10, 12, "O")},
      TaskMode::Task2);
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0].event == EventLabel::Disposition);
  CHECK(mentions[1].event == EventLabel::NoDisposition);
  CHECK(mentions[1].span == Span{5, 9});
}

TEST_CASE("decode is total over the tag alphabet (fuzz)") {
  std::mt19937 rng(41);
  const std::vector<std::string> alphabet = {"O",
                                             "B-Disposition",
                                             "I-Disposition",
                                             "B-NoDisposition",
                                             "I-NoDisposition",
                                             "B-Undetermined",
                                             "I-Undetermined"};
  std::string text(500, 'x');
  ClinicalNote note("d", text);
  for (int iter = 0; iter < 1000; ++iter) {
    std::size_t n = 1 + bounded_rand(rng, 30);
    std::vector<WordPrediction> words;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t len = 1 + bounded_rand(rng, 5);
      words.push_back(word(i, pos, pos + len,
                           alphabet[bounded_rand(rng, (std::uint32_t)alphabet.size())]));
      pos += len + 1;
    }
    auto mentions = decode_mentions(note, words, TaskMode::Task2);
    // decoded mentions are well-formed and ordered
    std::size_t prev_end = 0;
    for (const auto& m : mentions) {
      CHECK(m.span.start < m.span.end);
      CHECK(m.span.start >= prev_end);
      prev_end = m.span.end;
      CHECK(m.event.has_value());
    }
    // and the decoded output always forms a valid corpus
    Corpus corpus;
    corpus.notes.push_back(note);
    corpus.mentions = mentions;
    CHECK(validate_corpus(corpus).empty());
  }
}

TEST_CASE("merge_chunk_predictions joins a mention split across chunks") {
  ClinicalNote note("d", "insulin glargine daily");
  PredictedSequence c0;
  c0.doc_id = "d";
  c0.sentence_index = 0;
  c0.chunk_index = 0;
  c0.subwords = {sub("insulin", 0, 0, 7)};
  c0.labels = {"B-Drug"};
  PredictedSequence c1;
  c1.doc_id = "d";
  c1.sentence_index = 0;
  c1.chunk_index = 1;
  c1.subwords = {sub("glargine", 1, 8, 16), sub("daily", 2, 17, 22)};
  c1.labels = {"B-Drug", "O"};  // restarted B at the chunk boundary

  auto merged = merge_chunk_predictions(note, {c0, c1}, TaskMode::Task1);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].span == Span{0, 16});
  CHECK(merged[0].surface == "insulin glargine");
}

TEST_CASE("merge_chunk_predictions keeps mentions separated by an O word apart") {
  ClinicalNote note("d", "insulin also glargine");
  PredictedSequence c0;
  c0.doc_id = "d";
  c0.sentence_index = 0;
  c0.chunk_index = 0;
  c0.subwords = {sub("insulin", 0, 0, 7), sub("also", 1, 8, 12)};
  c0.labels = {"B-Drug", "O"};
  PredictedSequence c1;
  c1.doc_id = "d";
  c1.sentence_index = 0;
  c1.chunk_index = 1;
  c1.subwords = {sub("glargine", 2, 13, 21)};
  c1.labels = {"B-Drug"};
  auto merged = merge_chunk_predictions(note, {c0, c1}, TaskMode::Task1);
  CHECK(merged.size() == 2);
}

TEST_CASE("merge_chunk_predictions does not join across sentences or labels") {
  ClinicalNote note("d", "insulin glargine");
  PredictedSequence c0;
  c0.doc_id = "d";
  c0.sentence_index = 0;
  c0.chunk_index = 0;
  c0.subwords = {sub("insulin", 0, 0, 7)};
  c0.labels = {"B-Disposition"};
  PredictedSequence c1 = c0;
  c1.sentence_index = 1;  // different sentence: no join
  c1.chunk_index = 0;
  c1.subwords = {sub("glargine", 1, 8, 16)};
  c1.labels = {"B-Disposition"};
  CHECK(merge_chunk_predictions(note, {c0, c1}, TaskMode::Task2).size() == 2);

  c1.sentence_index = 0;
  c1.chunk_index = 1;
  c1.labels = {"B-NoDisposition"};  // different label: no join
  CHECK(merge_chunk_predictions(note, {c0, c1}, TaskMode::Task2).size() == 2);
}

TEST_CASE("merge_chunk_predictions on a single chunk equals plain decoding") {
  ClinicalNote note("d", "abcd efgh");
  PredictedSequence c0;
  c0.doc_id = "d";
  c0.subwords = {sub("abcd", 0, 0, 4), sub("efgh", 1, 5, 9)};
  c0.labels = {"B-Drug", "I-Drug"};
  auto merged = merge_chunk_predictions(note, {c0}, TaskMode::Task1);
  auto direct = decode_mentions(note, aggregate_word_labels(c0), TaskMode::Task1);
  REQUIRE(merged.size() == direct.size());
  CHECK(merged[0] == direct[0]);
}

namespace {

MedicationMention disposition_at(const std::string& id, std::size_t start, std::size_t end) {
  MedicationMention m;
  m.mention_id = id;
  m.doc_id = "d";
  m.span = {start, end};
  m.surface = std::string(end - start, 'x');
  m.event = EventLabel::Disposition;
  return m;
}

}  // namespace

TEST_CASE("attach_context populates all five dimensions") {
  auto m = disposition_at("T1", 0, 4);
  DimensionPredictions predictions;
  predictions[dimension_index(ContextDimension::Action)]["d:T1"] = "Stop";
  predictions[dimension_index(ContextDimension::Temporality)]["d:T1"] = "Past";
  predictions[dimension_index(ContextDimension::Certainty)]["d:T1"] = "Certain";
  predictions[dimension_index(ContextDimension::Actor)]["d:T1"] = "Patient";
  predictions[dimension_index(ContextDimension::Negation)]["d:T1"] = "Negated";
  auto out = attach_context({m}, predictions);
  REQUIRE(out.size() == 1);
  REQUIRE(out[0].context.has_value());
  CHECK(out[0].context->action == ActionLabel::Stop);
  CHECK(out[0].context->temporality == TemporalityLabel::Past);
  CHECK(out[0].context->negation == NegationLabel::Negated);
}

TEST_CASE("attach_context ignores stray predictions with a warning") {
  auto m = disposition_at("T1", 0, 4);
  MedicationMention other;
  other.mention_id = "T2";
  other.doc_id = "d";
  other.span = {5, 9};
  other.surface = "xxxx";
  other.event = EventLabel::NoDisposition;

  DimensionPredictions predictions;
  for (ContextDimension dim : kContextDimensions) {
    predictions[dimension_index(dim)]["d:T1"] = dimension_classes(dim).front();
    predictions[dimension_index(dim)]["d:T2"] = dimension_classes(dim).front();
  }
  std::vector<std::string> warnings;
  auto out = attach_context({m, other}, predictions, &warnings);
  CHECK(!out[1].context.has_value());
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("d:T2") != std::string::npos);
}

TEST_CASE("attach_context fails listing mentions missing a prediction") {
  auto m = disposition_at("T1", 0, 4);
  DimensionPredictions predictions;
  for (ContextDimension dim : kContextDimensions) {
    if (dim == ContextDimension::Negation) continue;
    predictions[dimension_index(dim)]["d:T1"] = dimension_classes(dim).front();
  }
  try {
    attach_context({m}, predictions);
    FAIL("expected completeness error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Completeness);
    CHECK(std::string(e.what()).find("d:T1") != std::string::npos);
    CHECK(std::string(e.what()).find("Negation") != std::string::npos);
  }
}
