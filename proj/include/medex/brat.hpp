#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "medex/corpus.hpp"

namespace medex {

// One line of a standoff file. Only TextBound (T) and Attribute (A) records
// exist in this toolkit's dialect; other kinds are rejected at parse time.
struct StandoffRecord {
  enum class Kind { TextBound, Attribute };
  Kind kind = Kind::TextBound;
  std::string record_id;
  // TextBound payload
  std::string label;
  Span span;
  std::string surface;
  // Attribute payload
  std::string attribute_name;
  std::string target_id;
  std::string value;
};

// CRLF and lone CR become LF; offsets everywhere are computed after this.
std::string normalize_newlines(std::string_view text);

// Parses a standoff file against its note. TextBound labels must be one of
// the three event labels or "Drug" (an event-less mention). Attribute
// records may only target Disposition mentions; missing dimensions on a
// Disposition mention default to Unknown/NotNegated.
std::vector<MedicationMention> parse_ann(std::string_view ann_text, const ClinicalNote& note);

// Deterministic emission: TextBounds sorted by (start, end), ids T1..Tn;
// a Disposition mention with context gets all five Attribute lines right
// after its TextBound, ids A1..Am running through the file.
std::string emit_ann(const std::vector<MedicationMention>& mentions);

// Loads every <id>.txt / <id>.ann pair under dir. Unpaired files are
// reported through `warnings`, not errors; any parse failure aborts with
// the file name prepended.
Corpus load_corpus(const std::string& dir, Split split,
                   std::vector<std::string>* warnings = nullptr);

// Same, with .ann records in ann_dir and .txt notes in txt_dir (prediction
// directories carry annotations only).
Corpus load_corpus_paired(const std::string& ann_dir, const std::string& txt_dir, Split split,
                          std::vector<std::string>* warnings = nullptr);

// Writes <id>.txt and <id>.ann for every note of the corpus into dir
// (created if missing).
void write_corpus_dir(const std::string& dir, const Corpus& corpus);

}  // namespace medex
