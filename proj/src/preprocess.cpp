#include "medex/preprocess.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

namespace medex {

namespace {

using nlohmann::json;

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

struct Line {
  std::size_t start;  // char offset of first char
  std::size_t end;    // char offset past last char (excludes the newline)
};

bool line_is_blank(const std::u32string& chars, const Line& line) {
  for (std::size_t i = line.start; i < line.end; ++i) {
    if (!is_ascii_space(chars[i])) return false;
  }
  return true;
}

// Header rule: trimmed line ends in ':' and has at most 6 whitespace-
// separated words.
bool line_is_header(const std::u32string& chars, const Line& line) {
  std::size_t b = line.start, e = line.end;
  while (b < e && is_ascii_space(chars[b])) ++b;
  while (e > b && is_ascii_space(chars[e - 1])) --e;
  if (b == e || chars[e - 1] != U':') return false;
  std::size_t words = 0;
  bool in_word = false;
  for (std::size_t i = b; i < e; ++i) {
    if (is_ascii_space(chars[i])) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++words;
    }
  }
  return words <= 6;
}

std::optional<Span> trimmed_span(const std::u32string& chars, std::size_t start, std::size_t end) {
  while (start < end && is_ascii_space(chars[start])) ++start;
  while (end > start && is_ascii_space(chars[end - 1])) --end;
  if (start == end) return std::nullopt;
  return Span{start, end};
}

void emit_block_sentences(const std::u32string& chars, std::size_t block_start,
                          std::size_t block_end, std::vector<Span>& out) {
  std::size_t pos = block_start;
  std::size_t i = block_start;
  while (i < block_end) {
    if (is_terminator(chars[i]) && i + 1 < block_end && is_ascii_space(chars[i + 1])) {
      std::size_t k = i + 1;
      while (k < block_end && is_ascii_space(chars[k])) ++k;
      if (k < block_end && is_ascii_upper(chars[k])) {
        if (auto span = trimmed_span(chars, pos, i + 1)) out.push_back(*span);
        pos = k;
        i = k;
        continue;
      }
    }
    ++i;
  }
  if (auto span = trimmed_span(chars, pos, block_end)) out.push_back(*span);
}

}  // namespace

std::vector<Span> segment_sentences(const ClinicalNote& note) {
  const std::u32string& chars = note.chars();

  std::vector<Line> lines;
  std::size_t line_start = 0;
  for (std::size_t i = 0; i <= chars.size(); ++i) {
    if (i == chars.size() || chars[i] == U'\n') {
      lines.push_back({line_start, i});
      line_start = i + 1;
    }
  }

  std::vector<Span> out;
  bool in_block = false;
  std::size_t block_start = 0;
  auto close_block = [&](std::size_t end) {
    if (in_block) {
      emit_block_sentences(chars, block_start, end, out);
      in_block = false;
    }
  };
  for (const Line& line : lines) {
    if (line_is_blank(chars, line)) {
      close_block(line.start);
    } else if (line_is_header(chars, line)) {
      close_block(line.start);
      if (auto span = trimmed_span(chars, line.start, line.end)) out.push_back(*span);
    } else if (!in_block) {
      in_block = true;
      block_start = line.start;
    }
  }
  close_block(chars.size());
  return out;
}

std::vector<WordToken> tokenize_words(const ClinicalNote& note, const Span& sentence) {
  if (sentence.end > note.char_count() || sentence.start > sentence.end)
    fail(ErrorKind::Range, "tokenize_words: sentence span out of bounds");
  const std::u32string& chars = note.chars();
  std::vector<WordToken> out;
  std::size_t i = sentence.start;
  while (i < sentence.end) {
    if (is_ascii_space(chars[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_word_char(chars[i])) {
      while (i < sentence.end && is_word_char(chars[i])) ++i;
    } else {
      ++i;  // punctuation: one character per token
    }
    WordToken token;
    token.span = Span{start, i};
    token.text = utf8::encode(chars.substr(start, i - start));
    out.push_back(std::move(token));
  }
  return out;
}

std::string bio_tag(char prefix, std::string_view type) {
  if (prefix == 'O') return "O";
  return std::string(1, prefix) + "-" + std::string(type);
}

bool split_bio_tag(std::string_view tag, char& prefix, std::string& type) {
  if (tag == "O") {
    prefix = 'O';
    type.clear();
    return true;
  }
  if (tag.size() >= 3 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
    prefix = tag[0];
    type = std::string(tag.substr(2));
    return true;
  }
  return false;
}

std::optional<std::string> check_bio_labels(const BioSequence& seq) {
  if (seq.labels.size() != seq.subwords.size())
    return "labels length " + std::to_string(seq.labels.size()) + " != subwords length " +
           std::to_string(seq.subwords.size());
  std::string prev_type;
  char prev_prefix = 'O';
  for (std::size_t i = 0; i < seq.labels.size(); ++i) {
    char prefix;
    std::string type;
    if (!split_bio_tag(seq.labels[i], prefix, type))
      return "malformed tag \"" + seq.labels[i] + "\" at position " + std::to_string(i);
    if (prefix == 'I' && (prev_prefix == 'O' || prev_type != type))
      return "I-" + type + " at position " + std::to_string(i) + " does not continue a " + type +
             " run";
    prev_prefix = prefix;
    prev_type = type;
  }
  return std::nullopt;
}

std::vector<std::string> project_bio(const std::vector<SubwordToken>& subwords,
                                     const std::vector<const MedicationMention*>& mentions,
                                     TaskMode mode) {
  std::vector<const MedicationMention*> sorted = mentions;
  std::sort(sorted.begin(), sorted.end(),
            [](const MedicationMention* a, const MedicationMention* b) {
              return a->span < b->span;
            });
  const MedicationMention* widest = nullptr;
  for (const MedicationMention* m : sorted) {
    if (widest && m->span.start < widest->span.end)
      fail(ErrorKind::Integrity,
           "overlapping gold mentions: (" + std::to_string(widest->span.start) + "," +
               std::to_string(widest->span.end) + ") and (" + std::to_string(m->span.start) +
               "," + std::to_string(m->span.end) + ")");
    if (!widest || m->span.end > widest->span.end) widest = m;
  }

  auto type_of = [&](const MedicationMention& m) -> std::string {
    if (mode == TaskMode::Task1) return "Drug";
    if (!m.event)
      fail(ErrorKind::Integrity,
           "mention at (" + std::to_string(m.span.start) + "," + std::to_string(m.span.end) +
               ") has no event label required by Task2 mode");
    return to_string(*m.event);
  };

  std::map<const MedicationMention*, bool> seen;
  std::vector<std::string> labels;
  labels.reserve(subwords.size());
  for (const SubwordToken& sub : subwords) {
    const MedicationMention* hit = nullptr;
    for (const MedicationMention* m : sorted) {
      if (sub.span.start == sub.span.end) {
        // Zero-width byte-level piece (e.g. a bare leading-space marker):
        // counts as inside a mention covering its position, so a word's
        // first marker token still takes the B- tag.
        if (m->span.start <= sub.span.start && sub.span.start < m->span.end) {
          hit = m;
          break;
        }
      } else if (m->span.overlaps(sub.span)) {
        hit = m;
        break;
      }
    }
    if (!hit) {
      labels.push_back("O");
      continue;
    }
    bool& was_seen = seen[hit];
    labels.push_back(bio_tag(was_seen ? 'I' : 'B', type_of(*hit)));
    was_seen = true;
  }
  return labels;
}

std::vector<BioSequence> chunk(const BioSequence& sequence, std::size_t max_seq_len) {
  if (max_seq_len < 3) fail(ErrorKind::Usage, "max_seq_len must be at least 3");
  const std::size_t budget = max_seq_len - 2;

  if (sequence.labels.size() != sequence.subwords.size())
    fail(ErrorKind::Integrity, "chunk: labels length " + std::to_string(sequence.labels.size()) +
                                   " != subwords length " +
                                   std::to_string(sequence.subwords.size()));

  // Word groups: runs of equal word_index. Split points never fall inside one.
  struct Group {
    std::size_t begin, end;
  };
  std::vector<Group> groups;
  std::size_t i = 0;
  while (i < sequence.subwords.size()) {
    std::size_t j = i;
    while (j < sequence.subwords.size() &&
           sequence.subwords[j].word_index == sequence.subwords[i].word_index) {
      ++j;
    }
    if (j - i > budget) {
      std::string word_text;
      for (std::size_t k = i; k < j; ++k) word_text += sequence.subwords[k].text;
      fail(ErrorKind::Range, "word \"" + word_text + "\" has " + std::to_string(j - i) +
                                 " subwords, more than the chunk budget of " +
                                 std::to_string(budget));
    }
    groups.push_back({i, j});
    i = j;
  }

  std::vector<BioSequence> chunks;
  std::size_t g = 0;
  while (g < groups.size()) {
    BioSequence piece;
    piece.doc_id = sequence.doc_id;
    piece.sentence_index = sequence.sentence_index;
    piece.chunk_index = chunks.size();
    std::size_t used = 0;
    while (g < groups.size() && used + (groups[g].end - groups[g].begin) <= budget) {
      for (std::size_t k = groups[g].begin; k < groups[g].end; ++k) {
        piece.subwords.push_back(sequence.subwords[k]);
        piece.labels.push_back(sequence.labels[k]);
      }
      used += groups[g].end - groups[g].begin;
      ++g;
    }
    // A chunk opening mid-mention restarts the run with B-.
    if (!piece.labels.empty()) {
      char prefix;
      std::string type;
      if (split_bio_tag(piece.labels.front(), prefix, type) && prefix == 'I')
        piece.labels.front() = bio_tag('B', type);
    }
    chunks.push_back(std::move(piece));
  }
  if (chunks.empty()) {
    BioSequence empty_chunk;
    empty_chunk.doc_id = sequence.doc_id;
    empty_chunk.sentence_index = sequence.sentence_index;
    empty_chunk.chunk_index = 0;
    chunks.push_back(std::move(empty_chunk));
  }
  return chunks;
}

std::vector<BioSequence> preprocess_note(const ClinicalNote& note,
                                         const std::vector<const MedicationMention*>& mentions,
                                         const SubwordVocab& vocab, TaskMode mode,
                                         const PreprocessOptions& opts) {
  std::vector<BioSequence> out;
  std::vector<Span> sentences = segment_sentences(note);
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    std::vector<WordToken> words = tokenize_words(note, sentences[si]);
    if (words.empty()) continue;
    BioSequence seq;
    seq.doc_id = note.doc_id;
    seq.sentence_index = si;
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      auto pieces = tokenize_subwords(words[wi], wi, vocab, opts.lowercase);
      seq.subwords.insert(seq.subwords.end(), pieces.begin(), pieces.end());
    }
    seq.labels = project_bio(seq.subwords, mentions, mode);
    auto chunks = chunk(seq, opts.max_seq_len);
    out.insert(out.end(), chunks.begin(), chunks.end());
  }
  return out;
}

std::vector<Task3Instance> extract_task3_instances(const Corpus& corpus) {
  std::vector<Task3Instance> out;
  for (const ClinicalNote& note : corpus.notes) {
    std::vector<const MedicationMention*> doc_mentions = corpus.mentions_of(note.doc_id);
    std::vector<Span> sentences;
    for (const MedicationMention* m : doc_mentions) {
      if (m->event != EventLabel::Disposition) continue;
      if (sentences.empty()) sentences = segment_sentences(note);
      // Sentence containing the mention start (first sentence ending past it).
      std::size_t idx = sentences.size();
      for (std::size_t s = 0; s < sentences.size(); ++s) {
        if (sentences[s].end > m->span.start) {
          idx = s;
          break;
        }
      }
      if (idx == sentences.size()) idx = sentences.size() - 1;
      std::size_t first = idx > 0 ? idx - 1 : 0;
      std::size_t last = std::min(idx + 1, sentences.size() - 1);
      Span window_span{sentences[first].start, std::max(sentences[last].end, m->span.end)};

      Task3Instance inst;
      inst.instance_id = m->doc_id + ":" + m->mention_id;
      inst.doc_id = m->doc_id;
      inst.mention_id = m->mention_id;
      inst.mention_span = m->span;
      inst.window = slice(note, window_span);
      inst.mention_begin = m->span.start - window_span.start;
      inst.mention_end = m->span.end - window_span.start;
      inst.labels = m->context;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

namespace {

json context_to_json(const ContextLabels& labels) {
  json j;
  for (ContextDimension dim : kContextDimensions)
    j[dimension_name(dim)] = get_dimension_label(labels, dim);
  return j;
}

ContextLabels context_from_json(const json& j) {
  ContextLabels labels;
  for (ContextDimension dim : kContextDimensions) {
    const std::string name = dimension_name(dim);
    if (!j.contains(name))
      fail(ErrorKind::Format, "context labels object missing \"" + name + "\"");
    set_dimension_label(labels, dim, j.at(name).get<std::string>());
  }
  return labels;
}

}  // namespace

std::string bio_sequences_to_jsonl(const std::vector<BioSequence>& sequences) {
  std::string out;
  for (const BioSequence& seq : sequences) {
    json j;
    j["doc_id"] = seq.doc_id;
    j["sentence_index"] = seq.sentence_index;
    j["chunk_index"] = seq.chunk_index;
    json subs = json::array();
    for (const SubwordToken& s : seq.subwords) {
      subs.push_back({{"text", s.text},
                      {"word_index", s.word_index},
                      {"start", s.span.start},
                      {"end", s.span.end}});
    }
    j["subwords"] = std::move(subs);
    j["labels"] = seq.labels;
    out += j.dump();
    out += "\n";
  }
  return out;
}

std::vector<BioSequence> bio_sequences_from_jsonl(std::string_view jsonl) {
  std::vector<BioSequence> out;
  std::vector<std::string> lines = split(jsonl, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::exception& e) {
      fail(ErrorKind::Format, "line " + std::to_string(i + 1) + ": " + e.what());
    }
    try {
      BioSequence seq;
      seq.doc_id = j.at("doc_id").get<std::string>();
      seq.sentence_index = j.at("sentence_index").get<std::size_t>();
      seq.chunk_index = j.at("chunk_index").get<std::size_t>();
      for (const json& s : j.at("subwords")) {
        SubwordToken token;
        token.text = s.at("text").get<std::string>();
        token.word_index = s.at("word_index").get<std::size_t>();
        token.span = Span{s.at("start").get<std::size_t>(), s.at("end").get<std::size_t>()};
        seq.subwords.push_back(std::move(token));
      }
      seq.labels = j.at("labels").get<std::vector<std::string>>();
      if (seq.labels.size() != seq.subwords.size())
        fail(ErrorKind::Format,
             "line " + std::to_string(i + 1) + ": labels length " +
                 std::to_string(seq.labels.size()) + " != subwords length " +
                 std::to_string(seq.subwords.size()));
      out.push_back(std::move(seq));
    } catch (const json::exception& e) {
      fail(ErrorKind::Format, "line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::string task3_instances_to_jsonl(const std::vector<Task3Instance>& instances) {
  std::string out;
  for (const Task3Instance& inst : instances) {
    json j;
    j["instance_id"] = inst.instance_id;
    j["doc_id"] = inst.doc_id;
    j["mention_id"] = inst.mention_id;
    j["span"] = {inst.mention_span.start, inst.mention_span.end};
    j["window"] = inst.window;
    j["mention_begin"] = inst.mention_begin;
    j["mention_end"] = inst.mention_end;
    j["labels"] = inst.labels ? context_to_json(*inst.labels) : json(nullptr);
    out += j.dump();
    out += "\n";
  }
  return out;
}

std::vector<Task3Instance> task3_instances_from_jsonl(std::string_view jsonl) {
  std::vector<Task3Instance> out;
  std::vector<std::string> lines = split(jsonl, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      json j = json::parse(lines[i]);
      Task3Instance inst;
      inst.instance_id = j.at("instance_id").get<std::string>();
      inst.doc_id = j.at("doc_id").get<std::string>();
      inst.mention_id = j.at("mention_id").get<std::string>();
      inst.mention_span =
          Span{j.at("span").at(0).get<std::size_t>(), j.at("span").at(1).get<std::size_t>()};
      inst.window = j.at("window").get<std::string>();
      inst.mention_begin = j.at("mention_begin").get<std::size_t>();
      inst.mention_end = j.at("mention_end").get<std::size_t>();
      if (!j.at("labels").is_null()) inst.labels = context_from_json(j.at("labels"));
      out.push_back(std::move(inst));
    } catch (const json::exception& e) {
      fail(ErrorKind::Format, "line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace medex
