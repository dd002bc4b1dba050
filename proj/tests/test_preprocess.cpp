#include <doctest.h>

#include <random>

#include "medex/preprocess.hpp"

using namespace medex;

namespace {

SubwordVocab char_vocab() {
  // Single characters plus continuations: every ASCII word tokenizes.
  SubwordVocab vocab;
  vocab.scheme = SubwordScheme::WordPiece;
  vocab.unknown_token = "[UNK]";
  vocab.continuation_marker = "##";
  vocab.pieces.insert("[UNK]");
  for (char c = 33; c < 127; ++c) {
    vocab.pieces.insert(std::string(1, c));
    vocab.pieces.insert("##" + std::string(1, c));
  }
  return vocab;
}

MedicationMention mention_over(const ClinicalNote& note, std::size_t start, std::size_t end,
                               std::optional<EventLabel> event = EventLabel::NoDisposition) {
  MedicationMention m;
  m.mention_id = "T1";
  m.doc_id = note.doc_id;
  m.span = {start, end};
  m.surface = slice(note, {start, end});
  m.event = event;
  return m;
}

SubwordToken sub(std::string text, std::size_t word_index, std::size_t start, std::size_t end) {
  SubwordToken t;
  t.text = std::move(text);
  t.word_index = word_index;
  t.span = {start, end};
  return t;
}

}  // namespace

TEST_CASE("segment_sentences splits at terminator + whitespace + capital") {
  ClinicalNote note("d", "Continue aspirin. Stop statin.");
  auto spans = segment_sentences(note);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == Span{0, 17});
  CHECK(spans[1] == Span{18, 30});
  CHECK(slice(note, spans[0]) == "Continue aspirin.");
  CHECK(slice(note, spans[1]) == "Stop statin.");
}

TEST_CASE("segment_sentences treats short colon lines as section headers") {
  ClinicalNote note("d", "MEDICATIONS:\naspirin 81mg");
  auto spans = segment_sentences(note);
  REQUIRE(spans.size() == 2);
  CHECK(slice(note, spans[0]) == "MEDICATIONS:");
  CHECK(slice(note, spans[1]) == "aspirin 81mg");
}

TEST_CASE("segment_sentences single word and non-boundaries") {
  CHECK(segment_sentences(ClinicalNote("d", "aspirin")) == std::vector<Span>{Span{0, 7}});
  // lowercase after the terminator: no boundary
  auto spans = segment_sentences(ClinicalNote("d", "e.g. test. lower stays"));
  CHECK(spans.size() == 1);
  // seven words ending in ':' is not a header line
  ClinicalNote long_colon("d", "one two three four five six seven:\nnext line");
  CHECK(segment_sentences(long_colon).size() == 1);
}

TEST_CASE("segment_sentences splits at blank lines") {
  ClinicalNote note("d", "first block here\n\nsecond block there");
  auto spans = segment_sentences(note);
  REQUIRE(spans.size() == 2);
  CHECK(slice(note, spans[0]) == "first block here");
  CHECK(slice(note, spans[1]) == "second block there");
}

TEST_CASE("segmentation covers all non-whitespace text, ordered and disjoint") {
  std::mt19937 rng(7);
  const std::string chars = "abcDEF.!? :\n\n  ";
  for (int iter = 0; iter < 200; ++iter) {
    std::string text;
    std::size_t len = 1 + bounded_rand(rng, 120);
    for (std::size_t i = 0; i < len; ++i)
      text.push_back(chars[bounded_rand(rng, static_cast<std::uint32_t>(chars.size()))]);
    bool has_ink = false;
    for (char c : text) has_ink |= !is_ascii_space(static_cast<unsigned char>(c));
    if (!has_ink) continue;
    ClinicalNote note("d", text);
    auto spans = segment_sentences(note);
    std::vector<bool> covered(note.char_count(), false);
    std::size_t prev_end = 0;
    for (const Span& s : spans) {
      CHECK(s.start >= prev_end);
      CHECK(s.start < s.end);
      CHECK(s.end <= note.char_count());
      for (std::size_t i = s.start; i < s.end; ++i) covered[i] = true;
      prev_end = s.end;
    }
    for (std::size_t i = 0; i < note.char_count(); ++i) {
      if (!is_ascii_space(note.chars()[i])) CHECK(covered[i]);
    }
  }
}

TEST_CASE("tokenize_words: alphanumeric runs and single punctuation") {
  ClinicalNote note("d", "aspirin 81mg daily.");
  auto words = tokenize_words(note, {0, note.char_count()});
  REQUIRE(words.size() == 4);
  CHECK(words[0].text == "aspirin");
  CHECK(words[0].span == Span{0, 7});
  CHECK(words[1].text == "81mg");
  CHECK(words[1].span == Span{8, 12});
  CHECK(words[2].text == "daily");
  CHECK(words[3].text == ".");
  CHECK(words[3].span == Span{18, 19});
  for (const auto& w : words) CHECK(slice(note, w.span) == w.text);
}

TEST_CASE("tokenize_words: single token and punctuation splitting") {
  ClinicalNote x("d", "x");
  auto words = tokenize_words(x, {0, 1});
  REQUIRE(words.size() == 1);
  CHECK(words[0].text == "x");

  ClinicalNote paren("d", "(aspirin)");
  auto ptoks = tokenize_words(paren, {0, 9});
  REQUIRE(ptoks.size() == 3);
  CHECK(ptoks[0].text == "(");
  CHECK(ptoks[1].text == "aspirin");
  CHECK(ptoks[2].text == ")");
}

TEST_CASE("project_bio assigns B to the first overlapping subword") {
  ClinicalNote note("d", "lisinopril");
  auto m = mention_over(note, 0, 10);
  std::vector<SubwordToken> subs = {sub("li", 0, 0, 2), sub("##sino", 0, 2, 6),
                                    sub("##pril", 0, 6, 10)};
  auto labels = project_bio(subs, {&m}, TaskMode::Task1);
  CHECK(labels == std::vector<std::string>{"B-Drug", "I-Drug", "I-Drug"});
}

TEST_CASE("project_bio leaves sentences without mentions all O") {
  std::vector<SubwordToken> subs = {sub("a", 0, 0, 1), sub("b", 1, 2, 3)};
  CHECK(project_bio(subs, {}, TaskMode::Task1) == std::vector<std::string>{"O", "O"});
}

TEST_CASE("project_bio uses the event label in Task2 mode") {
  ClinicalNote note("d", "lisinopril");
  auto m = mention_over(note, 0, 10, EventLabel::Disposition);
  std::vector<SubwordToken> subs = {sub("li", 0, 0, 2), sub("##sinopril", 0, 2, 10)};
  auto labels = project_bio(subs, {&m}, TaskMode::Task2);
  CHECK(labels == std::vector<std::string>{"B-Disposition", "I-Disposition"});
}

TEST_CASE("project_bio rejects overlapping gold mentions listing spans") {
  ClinicalNote note("d", "insulin glargine");
  auto a = mention_over(note, 0, 7);
  auto b = mention_over(note, 0, 16);
  std::vector<SubwordToken> subs = {sub("insulin", 0, 0, 7), sub("glargine", 1, 8, 16)};
  try {
    project_bio(subs, {&a, &b}, TaskMode::Task1);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Integrity);
    CHECK(std::string(e.what()).find("(0,16)") != std::string::npos);
    CHECK(std::string(e.what()).find("(0,7)") != std::string::npos);
  }
}

TEST_CASE("project_bio requires events in Task2 mode") {
  ClinicalNote note("d", "aspirin");
  auto m = mention_over(note, 0, 7, std::nullopt);
  std::vector<SubwordToken> subs = {sub("aspirin", 0, 0, 7)};
  CHECK_THROWS_AS(project_bio(subs, {&m}, TaskMode::Task2), Error);
}

namespace {

BioSequence make_sequence(std::size_t words, std::size_t subwords_per_word) {
  BioSequence seq;
  seq.doc_id = "d";
  std::size_t pos = 0;
  for (std::size_t w = 0; w < words; ++w) {
    for (std::size_t s = 0; s < subwords_per_word; ++s) {
      seq.subwords.push_back(sub("x", w, pos, pos + 1));
      seq.labels.push_back(w == 0 && s == 0 ? "B-Drug" : "I-Drug");
      ++pos;
    }
    ++pos;  // word gap
  }
  return seq;
}

}  // namespace

TEST_CASE("chunk keeps short sequences intact") {
  BioSequence seq = make_sequence(5, 2);
  auto chunks = chunk(seq, 512);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0].subwords.size() == 10);
  CHECK(chunks[0].labels == seq.labels);
  CHECK(chunks[0].chunk_index == 0);
}

TEST_CASE("chunk splits 600 subwords of 2-subword words into 510 + 90") {
  BioSequence seq = make_sequence(300, 2);
  auto chunks = chunk(seq, 512);
  REQUIRE(chunks.size() == 2);
  CHECK(chunks[0].subwords.size() == 510);
  CHECK(chunks[1].subwords.size() == 90);
  CHECK(chunks[0].chunk_index == 0);
  CHECK(chunks[1].chunk_index == 1);
  // the second chunk opens mid-mention: first label restarts with B-
  CHECK(chunks[1].labels.front() == "B-Drug");
  CHECK(chunks[1].labels[1] == "I-Drug");

  // partition: concatenating chunks reproduces the original sequence
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.subwords.size();
  CHECK(total == seq.subwords.size());
  std::size_t k = 0;
  for (const auto& c : chunks) {
    for (const auto& s : c.subwords) {
      CHECK(s.span == seq.subwords[k].span);
      ++k;
    }
  }
}

TEST_CASE("chunk boundary cases of the word-size limit") {
  // budget is max_seq_len - 2: a 510-subword word fits at 512
  BioSequence fits = make_sequence(1, 510);
  auto chunks = chunk(fits, 512);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0].subwords.size() == 510);

  BioSequence too_big = make_sequence(1, 511);
  CHECK_THROWS_AS(chunk(too_big, 512), Error);
  CHECK_THROWS_AS(chunk(too_big, 256), Error);
}

TEST_CASE("preprocess_note end to end keeps BIO grammar valid") {
  SubwordVocab vocab = char_vocab();
  ClinicalNote note("d", "MEDICATIONS:\nDr cole started aspirin today .\nShe takes statin .");
  MedicationMention m1 = mention_over(note, 29, 36, EventLabel::Disposition);
  CHECK(m1.surface == "aspirin");
  MedicationMention m2 = mention_over(note, 55, 61, EventLabel::NoDisposition);
  CHECK(m2.surface == "statin");
  PreprocessOptions opts;
  auto sequences = preprocess_note(note, {&m1, &m2}, vocab, TaskMode::Task2, opts);
  REQUIRE(sequences.size() == 3);
  std::size_t b_count = 0;
  for (const auto& seq : sequences) {
    CHECK(!check_bio_labels(seq).has_value());
    for (const auto& label : seq.labels) b_count += label[0] == 'B';
  }
  CHECK(b_count == 2);
}

TEST_CASE("extract_task3_instances yields one instance per Disposition mention") {
  Corpus corpus;
  std::string text = "Dr cole started aspirin today .\nShe takes statin daily .\nStop warfarin now .";
  corpus.notes.emplace_back("d1", text);
  const ClinicalNote& note = corpus.notes[0];
  auto disp = mention_over(note, 16, 23, EventLabel::Disposition);
  disp.context = ContextLabels{};
  disp.mention_id = "T1";
  auto nodisp = mention_over(note, 42, 48, EventLabel::NoDisposition);
  nodisp.mention_id = "T2";
  auto disp2 = mention_over(note, 62, 70, EventLabel::Disposition);
  disp2.context = ContextLabels{};
  disp2.context->action = ActionLabel::Stop;
  disp2.mention_id = "T3";
  corpus.mentions = {disp, nodisp, disp2};

  auto instances = extract_task3_instances(corpus);
  REQUIRE(instances.size() == 2);
  CHECK(instances[0].instance_id == "d1:T1");
  // window is the mention's sentence plus one on each side
  CHECK(instances[0].window.find("started aspirin") != std::string::npos);
  CHECK(instances[0].window.find("takes statin") != std::string::npos);
  CHECK(instances[1].window.find("Stop warfarin") != std::string::npos);
  // offsets are window-relative
  const Task3Instance& inst = instances[0];
  CHECK(inst.window.substr(inst.mention_begin, inst.mention_end - inst.mention_begin) ==
        "aspirin");
  CHECK(instances[1].labels->action == ActionLabel::Stop);
}

TEST_CASE("task3 window in a one-sentence document is that sentence alone") {
  Corpus corpus;
  corpus.notes.emplace_back("d1", "Dr cole started aspirin today .");
  auto disp = mention_over(corpus.notes[0], 16, 23, EventLabel::Disposition);
  disp.context = ContextLabels{};
  corpus.mentions = {disp};
  auto instances = extract_task3_instances(corpus);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].window == "Dr cole started aspirin today .");
}

TEST_CASE("bio sequence jsonl round trip") {
  BioSequence seq = make_sequence(3, 2);
  seq.doc_id = "note-7";
  seq.sentence_index = 4;
  seq.chunk_index = 1;
  std::string jsonl = bio_sequences_to_jsonl({seq});
  auto parsed = bio_sequences_from_jsonl(jsonl);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].doc_id == "note-7");
  CHECK(parsed[0].sentence_index == 4);
  CHECK(parsed[0].chunk_index == 1);
  CHECK(parsed[0].labels == seq.labels);
  REQUIRE(parsed[0].subwords.size() == seq.subwords.size());
  for (std::size_t i = 0; i < seq.subwords.size(); ++i) {
    CHECK(parsed[0].subwords[i].text == seq.subwords[i].text);
    CHECK(parsed[0].subwords[i].span == seq.subwords[i].span);
    CHECK(parsed[0].subwords[i].word_index == seq.subwords[i].word_index);
  }
  // byte-determinism of the writer
  CHECK(bio_sequences_to_jsonl({seq}) == jsonl);
}

TEST_CASE("bio jsonl reader rejects ragged labels") {
  BioSequence seq = make_sequence(2, 1);
  std::string jsonl = bio_sequences_to_jsonl({seq});
  // corrupt: drop one label
  std::size_t pos = jsonl.find("\"B-Drug\",");
  REQUIRE(pos != std::string::npos);
  jsonl.erase(pos, 9);
  CHECK_THROWS_AS(bio_sequences_from_jsonl(jsonl), Error);
}

TEST_CASE("task3 instance jsonl round trip including null labels") {
  Task3Instance inst;
  inst.instance_id = "d:T1";
  inst.doc_id = "d";
  inst.mention_id = "T1";
  inst.mention_span = {10, 17};
  inst.window = "Dr cole started aspirin today .";
  inst.mention_begin = 16;
  inst.mention_end = 23;
  Task3Instance labeled = inst;
  labeled.labels = ContextLabels{};
  labeled.labels->actor = ActorLabel::Patient;

  std::string jsonl = task3_instances_to_jsonl({inst, labeled});
  auto parsed = task3_instances_from_jsonl(jsonl);
  REQUIRE(parsed.size() == 2);
  CHECK(!parsed[0].labels.has_value());
  REQUIRE(parsed[1].labels.has_value());
  CHECK(parsed[1].labels->actor == ActorLabel::Patient);
  CHECK(parsed[1].mention_span == Span{10, 17});
  CHECK(parsed[1].mention_begin == 16);
}
