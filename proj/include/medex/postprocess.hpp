#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "medex/preprocess.hpp"

namespace medex {

// Same shape as a gold BioSequence; labels come from a model and may break
// the tag grammar, which decoding repairs.
using PredictedSequence = BioSequence;

struct WordPrediction {
  std::size_t word_index = 0;
  Span span;
  std::string label;
};

// Word reconstruction: each word takes its first subword's label;
// continuation-subword labels are discarded.
std::vector<WordPrediction> aggregate_word_labels(const PredictedSequence& seq);

// Maximal (B-X)(I-X)* runs become mentions; an orphan I-X is repaired to
// B-X and opens a new mention. Total on every tag sequence over the task's
// alphabet.
std::vector<MedicationMention> decode_mentions(const ClinicalNote& note,
                                               const std::vector<WordPrediction>& words,
                                               TaskMode mode);

// Decodes each chunk, then re-joins mentions that a chunk boundary split:
// consecutive chunks of one sentence whose boundary mentions carry the same
// label and are separated by whitespace only. Output sorted by (start, end).
std::vector<MedicationMention> merge_chunk_predictions(
    const ClinicalNote& note, const std::vector<PredictedSequence>& chunks, TaskMode mode);

// Per-dimension label predictions keyed by "<doc_id>:<mention_id>", indexed
// by dimension taxonomy position.
using DimensionPredictions = std::array<std::map<std::string, std::string>, 5>;

inline std::size_t dimension_index(ContextDimension dim) {
  return static_cast<std::size_t>(dim);
}

// Populates context on every Disposition mention from the five maps.
// A Disposition mention missing any dimension raises a Completeness error
// listing the ids; predictions for non-Disposition mentions are ignored
// with a warning.
std::vector<MedicationMention> attach_context(std::vector<MedicationMention> mentions,
                                              const DimensionPredictions& predictions,
                                              std::vector<std::string>* warnings = nullptr);

}  // namespace medex
