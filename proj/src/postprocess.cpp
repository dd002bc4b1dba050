#include "medex/postprocess.hpp"

#include <algorithm>
#include <set>

namespace medex {

std::vector<WordPrediction> aggregate_word_labels(const PredictedSequence& seq) {
  if (seq.labels.size() != seq.subwords.size())
    fail(ErrorKind::Integrity,
         "aggregate_word_labels: labels length " + std::to_string(seq.labels.size()) +
             " != subwords length " + std::to_string(seq.subwords.size()));
  std::vector<WordPrediction> out;
  std::size_t i = 0;
  while (i < seq.subwords.size()) {
    std::size_t j = i;
    Span span = seq.subwords[i].span;
    while (j < seq.subwords.size() &&
           seq.subwords[j].word_index == seq.subwords[i].word_index) {
      span.end = std::max(span.end, seq.subwords[j].span.end);
      ++j;
    }
    WordPrediction word;
    word.word_index = seq.subwords[i].word_index;
    word.span = span;
    word.label = seq.labels[i];  // first-subword label wins
    out.push_back(std::move(word));
    i = j;
  }
  return out;
}

namespace {

std::optional<EventLabel> decode_type(const std::string& type, TaskMode mode) {
  if (mode == TaskMode::Task1) return std::nullopt;
  auto event = try_parse_event_label(type);
  if (!event) fail(ErrorKind::Taxonomy, "decode_mentions: unknown event type \"" + type + "\"");
  return event;
}

}  // namespace

std::vector<MedicationMention> decode_mentions(const ClinicalNote& note,
                                               const std::vector<WordPrediction>& words,
                                               TaskMode mode) {
  std::vector<MedicationMention> out;
  std::optional<std::string> open_type;
  Span open_span;

  auto close = [&]() {
    if (!open_type) return;
    MedicationMention m;
    m.doc_id = note.doc_id;
    m.span = open_span;
    m.surface = slice(note, m.span);
    m.event = decode_type(*open_type, mode);
    out.push_back(std::move(m));
    open_type.reset();
  };

  for (const WordPrediction& word : words) {
    char prefix;
    std::string type;
    if (!split_bio_tag(word.label, prefix, type))
      fail(ErrorKind::Parse, "decode_mentions: malformed tag \"" + word.label + "\"");
    if (prefix == 'O') {
      close();
    } else if (prefix == 'B' || !open_type || *open_type != type) {
      // B- starts a run; an orphan I- (after O or a different type) is
      // repaired to B- and also starts one.
      close();
      open_type = type;
      open_span = word.span;
    } else {
      open_span.end = std::max(open_span.end, word.span.end);
    }
  }
  close();
  return out;
}

std::vector<MedicationMention> merge_chunk_predictions(
    const ClinicalNote& note, const std::vector<PredictedSequence>& chunks, TaskMode mode) {
  for (const PredictedSequence& c : chunks) {
    if (c.doc_id != note.doc_id)
      fail(ErrorKind::Usage, "merge_chunk_predictions: chunk for doc \"" + c.doc_id +
                                 "\" does not belong to note \"" + note.doc_id + "\"");
  }
  std::vector<const PredictedSequence*> ordered;
  for (const PredictedSequence& c : chunks) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(),
            [](const PredictedSequence* a, const PredictedSequence* b) {
              if (a->sentence_index != b->sentence_index)
                return a->sentence_index < b->sentence_index;
              return a->chunk_index < b->chunk_index;
            });

  auto gap_is_whitespace = [&](std::size_t from, std::size_t to) {
    if (to < from) return false;
    for (std::size_t i = from; i < to; ++i) {
      if (!is_ascii_space(note.chars()[i])) return false;
    }
    return true;
  };
  auto same_label = [](const MedicationMention& a, const MedicationMention& b) {
    return a.event == b.event;
  };

  std::vector<MedicationMention> merged;
  const PredictedSequence* prev_chunk = nullptr;
  bool last_from_prev_chunk = false;
  for (const PredictedSequence* chunk : ordered) {
    std::vector<MedicationMention> mentions =
        decode_mentions(note, aggregate_word_labels(*chunk), mode);
    // An all-whitespace gap implies both fragments touch the boundary
    // (any intervening O word would put non-whitespace into the gap).
    bool continues_prev = prev_chunk && last_from_prev_chunk &&
                          prev_chunk->sentence_index == chunk->sentence_index &&
                          prev_chunk->chunk_index + 1 == chunk->chunk_index;
    bool did_merge = false;
    if (continues_prev && !mentions.empty() && !merged.empty() &&
        same_label(merged.back(), mentions.front()) &&
        gap_is_whitespace(merged.back().span.end, mentions.front().span.start)) {
      merged.back().span.end = mentions.front().span.end;
      merged.back().surface = slice(note, merged.back().span);
      mentions.erase(mentions.begin());
      did_merge = true;
    }
    last_from_prev_chunk = !mentions.empty() || did_merge;
    prev_chunk = chunk;
    merged.insert(merged.end(), mentions.begin(), mentions.end());
  }
  std::sort(merged.begin(), merged.end(), mention_span_order);
  return merged;
}

std::vector<MedicationMention> attach_context(std::vector<MedicationMention> mentions,
                                              const DimensionPredictions& predictions,
                                              std::vector<std::string>* warnings) {
  std::set<std::string> disposition_keys;
  std::vector<std::string> missing;
  for (MedicationMention& m : mentions) {
    if (m.event != EventLabel::Disposition) continue;
    const std::string key = m.doc_id + ":" + m.mention_id;
    disposition_keys.insert(key);
    for (ContextDimension dim : kContextDimensions) {
      if (!predictions[dimension_index(dim)].count(key))
        missing.push_back(key + " (" + dimension_name(dim) + ")");
    }
  }
  if (!missing.empty()) {
    std::string joined;
    for (const std::string& id : missing) joined += (joined.empty() ? "" : ", ") + id;
    fail(ErrorKind::Completeness,
         "missing context predictions for Disposition mentions: " + joined);
  }

  std::set<std::string> stray;
  for (ContextDimension dim : kContextDimensions) {
    for (const auto& [key, value] : predictions[dimension_index(dim)]) {
      if (!disposition_keys.count(key)) stray.insert(key);
    }
  }
  if (warnings) {
    for (const std::string& key : stray)
      warnings->push_back("prediction for non-Disposition mention " + key + " ignored");
  }

  for (MedicationMention& m : mentions) {
    if (m.event != EventLabel::Disposition) continue;
    const std::string key = m.doc_id + ":" + m.mention_id;
    ContextLabels labels;
    for (ContextDimension dim : kContextDimensions)
      set_dimension_label(labels, dim, predictions[dimension_index(dim)].at(key));
    m.context = labels;
  }
  return mentions;
}

}  // namespace medex
