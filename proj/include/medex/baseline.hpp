#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "medex/corpus.hpp"

namespace medex {

// Deterministic lexicon tagger: stands in for the transformer taggers so
// the pipeline and evaluator run end to end with no external model.
struct LexiconEntry {
  EventLabel label = EventLabel::Disposition;
  std::size_t count = 0;  // occurrences of the surface in training
};

struct Lexicon {
  std::map<std::string, LexiconEntry> entries;  // keyed by case-folded surface
};

// One entry per distinct case-folded mention surface; label is the most
// frequent event, ties broken Disposition < NoDisposition < Undetermined.
Lexicon build_lexicon(const Corpus& train);

// Longest-match left-to-right scan over word n-grams (n <= 5), case
// insensitive, leftmost-longest wins. Output spans never overlap.
std::vector<MedicationMention> tag(const ClinicalNote& note, const Lexicon& lexicon);

// Sorted TSV: surface, label, count. Tabs/newlines/backslashes in surfaces
// are escaped.
std::string lexicon_to_tsv(const Lexicon& lexicon);
Lexicon lexicon_from_tsv(std::string_view tsv);

}  // namespace medex
