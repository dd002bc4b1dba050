#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medex/corpus.hpp"
#include "medex/subword.hpp"

namespace medex {

struct WordToken {
  std::string text;
  Span span;
};

enum class TaskMode { Task1, Task2 };

// A chunked, subword-tokenized sentence with per-subword BIO tags.
struct BioSequence {
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::size_t chunk_index = 0;
  std::vector<SubwordToken> subwords;
  std::vector<std::string> labels;
};

// Rule-based segmentation: boundaries at sentence terminators (. ! ?)
// followed by whitespace and a capital, at blank lines, and at section
// header lines (ending in ':' with at most 6 words). Returned spans are
// ordered, non-overlapping, trimmed, and cover all non-whitespace text.
std::vector<Span> segment_sentences(const ClinicalNote& note);

// Maximal alphanumeric runs are tokens; every punctuation character is its
// own token; whitespace separates.
std::vector<WordToken> tokenize_words(const ClinicalNote& note, const Span& sentence);

inline std::vector<SubwordToken> tokenize_subwords(const WordToken& word,
                                                   std::size_t word_index,
                                                   const SubwordVocab& vocab, bool lowercase) {
  return tokenize_word(word.text, word.span, word_index, vocab, lowercase);
}

// BIO tag helpers. A tag is "O" or "B-<type>" / "I-<type>".
std::string bio_tag(char prefix, std::string_view type);
bool split_bio_tag(std::string_view tag, char& prefix, std::string& type);

// Empty result means the sequence satisfies the tag grammar (no I- after O
// or after a differently typed tag, lengths equal).
std::optional<std::string> check_bio_labels(const BioSequence& seq);

// Projects mention spans onto subword tokens. The first overlapping subword
// of a mention gets B-, later ones I-; type is "Drug" in Task1 mode and the
// event label in Task2 mode. Overlapping gold mentions abort with an error
// listing the colliding spans.
std::vector<std::string> project_bio(const std::vector<SubwordToken>& subwords,
                                     const std::vector<const MedicationMention*>& mentions,
                                     TaskMode mode);

// Splits into chunks of at most max_seq_len - 2 subwords without ever
// splitting a word; a chunk starting mid-mention has its first label
// relabeled B-. A single word over the limit is an error naming the word.
std::vector<BioSequence> chunk(const BioSequence& sequence, std::size_t max_seq_len = 512);

struct PreprocessOptions {
  bool lowercase = false;
  std::size_t max_seq_len = 512;
};

// Full per-note pipeline: segment, tokenize, subword-tokenize, project,
// chunk. `mentions` are the note's mentions (any order).
std::vector<BioSequence> preprocess_note(const ClinicalNote& note,
                                         const std::vector<const MedicationMention*>& mentions,
                                         const SubwordVocab& vocab, TaskMode mode,
                                         const PreprocessOptions& opts);

// One task-3 training/prediction instance per Disposition mention. The
// window is the contiguous note slice covering the mention's sentence plus
// one sentence on each side; mention offsets are relative to the window.
struct Task3Instance {
  std::string instance_id;  // doc_id + ":" + mention record id, corpus-unique
  std::string doc_id;
  std::string mention_id;
  Span mention_span;  // note coordinates
  std::string window;
  std::size_t mention_begin = 0;  // window coordinates
  std::size_t mention_end = 0;
  std::optional<ContextLabels> labels;
};

std::vector<Task3Instance> extract_task3_instances(const Corpus& corpus);

// JSON-lines interchange. Predicted sequences reuse the same schema with
// the labels field filled by an external model.
std::string bio_sequences_to_jsonl(const std::vector<BioSequence>& sequences);
std::vector<BioSequence> bio_sequences_from_jsonl(std::string_view jsonl);

std::string task3_instances_to_jsonl(const std::vector<Task3Instance>& instances);
std::vector<Task3Instance> task3_instances_from_jsonl(std::string_view jsonl);

}  // namespace medex
