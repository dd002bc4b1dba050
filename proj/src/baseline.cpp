#include "medex/baseline.hpp"

#include <algorithm>
#include <array>

#include "medex/preprocess.hpp"

namespace medex {

namespace {

constexpr std::size_t kMaxNgram = 5;

std::string escape_tsv(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') out += "\\\\";
    else if (c == '\t') out += "\\t";
    else if (c == '\n') out += "\\n";
    else out.push_back(c);
  }
  return out;
}

std::string unescape_tsv(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;
      if (s[i] == 't') out.push_back('\t');
      else if (s[i] == 'n') out.push_back('\n');
      else out.push_back(s[i]);
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace

Lexicon build_lexicon(const Corpus& train) {
  // votes[surface][event] = occurrences
  std::map<std::string, std::array<std::size_t, 3>> votes;
  for (const MedicationMention& m : train.mentions) {
    if (!m.event) continue;  // event-less mentions cannot vote
    votes[to_lower_ascii(m.surface)][static_cast<std::size_t>(*m.event)]++;
  }
  Lexicon lexicon;
  for (const auto& [surface, counts] : votes) {
    std::size_t best = 0;  // ties resolve to the lowest index: Disposition first
    for (std::size_t i = 1; i < counts.size(); ++i) {
      if (counts[i] > counts[best]) best = i;
    }
    LexiconEntry entry;
    entry.label = static_cast<EventLabel>(best);
    entry.count = counts[0] + counts[1] + counts[2];
    lexicon.entries.emplace(surface, entry);
  }
  return lexicon;
}

std::vector<MedicationMention> tag(const ClinicalNote& note, const Lexicon& lexicon) {
  std::vector<MedicationMention> out;
  for (const Span& sentence : segment_sentences(note)) {
    std::vector<WordToken> words = tokenize_words(note, sentence);
    std::size_t i = 0;
    while (i < words.size()) {
      std::size_t matched = 0;
      for (std::size_t n = std::min(kMaxNgram, words.size() - i); n >= 1; --n) {
        Span candidate{words[i].span.start, words[i + n - 1].span.end};
        auto it = lexicon.entries.find(to_lower_ascii(slice(note, candidate)));
        if (it != lexicon.entries.end()) {
          MedicationMention m;
          m.doc_id = note.doc_id;
          m.span = candidate;
          m.surface = slice(note, candidate);
          m.event = it->second.label;
          out.push_back(std::move(m));
          matched = n;
          break;
        }
      }
      i += matched ? matched : 1;
    }
  }
  return out;
}

std::string lexicon_to_tsv(const Lexicon& lexicon) {
  std::string out;
  for (const auto& [surface, entry] : lexicon.entries) {
    out += escape_tsv(surface) + "\t" + to_string(entry.label) + "\t" +
           std::to_string(entry.count) + "\n";
  }
  return out;
}

Lexicon lexicon_from_tsv(std::string_view tsv) {
  Lexicon lexicon;
  std::vector<std::string> lines = split(tsv, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 3)
      fail(ErrorKind::Format,
           "lexicon line " + std::to_string(i + 1) + ": expected 3 fields, got " +
               std::to_string(fields.size()));
    LexiconEntry entry;
    entry.label = parse_event_label(fields[1]);
    entry.count = std::stoull(fields[2]);
    if (entry.count < 1)
      fail(ErrorKind::Format, "lexicon line " + std::to_string(i + 1) + ": count must be >= 1");
    lexicon.entries[unescape_tsv(fields[0])] = entry;
  }
  return lexicon;
}

}  // namespace medex
