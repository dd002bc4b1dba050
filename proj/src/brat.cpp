#include "medex/brat.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

namespace medex {

namespace fs = std::filesystem;

std::string normalize_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

namespace {

// Surface fields are single-line; newlines inside a mention become spaces
// on emission and the comparison on parse applies the same mapping.
std::string flatten_newlines(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\n') c = ' ';
  }
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& message) {
  fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + message);
}

}  // namespace

std::vector<MedicationMention> parse_ann(std::string_view ann_text, const ClinicalNote& note) {
  std::vector<StandoffRecord> text_bounds;
  std::vector<std::pair<std::size_t, StandoffRecord>> attributes;  // with line numbers
  std::set<std::string> seen_ids;

  std::vector<std::string> lines = split(ann_text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::size_t line_no = i + 1;
    if (line.empty()) continue;

    std::vector<std::string> fields = split(line, '\t');
    const std::string& id = fields[0];
    if (id.empty()) parse_fail(line_no, "empty record id");
    if (!seen_ids.insert(id).second) parse_fail(line_no, "duplicate record id \"" + id + "\"");

    if (id[0] == 'T') {
      if (fields.size() != 3)
        parse_fail(line_no, "TextBound needs 3 tab-separated fields, got " +
                                std::to_string(fields.size()));
      if (!all_digits(std::string_view(id).substr(1)))
        parse_fail(line_no, "malformed TextBound id \"" + id + "\"");
      std::vector<std::string> head = split(fields[1], ' ');
      if (head.size() != 3) {
        if (fields[1].find(';') != std::string::npos)
          parse_fail(line_no, "discontinuous spans are not supported");
        parse_fail(line_no, "TextBound header needs \"Label start end\", got \"" + fields[1] + "\"");
      }
      if (!all_digits(head[1]) || !all_digits(head[2]))
        parse_fail(line_no, "non-numeric offsets \"" + head[1] + " " + head[2] + "\"");
      StandoffRecord rec;
      rec.kind = StandoffRecord::Kind::TextBound;
      rec.record_id = id;
      rec.label = head[0];
      rec.span = Span{std::stoull(head[1]), std::stoull(head[2])};
      rec.surface = fields[2];
      text_bounds.push_back(std::move(rec));
    } else if (id[0] == 'A') {
      if (fields.size() != 2)
        parse_fail(line_no, "Attribute needs 2 tab-separated fields, got " +
                                std::to_string(fields.size()));
      if (!all_digits(std::string_view(id).substr(1)))
        parse_fail(line_no, "malformed Attribute id \"" + id + "\"");
      std::vector<std::string> head = split(fields[1], ' ');
      if (head.size() != 3)
        parse_fail(line_no, "Attribute body needs \"Name Target Value\", got \"" + fields[1] + "\"");
      StandoffRecord rec;
      rec.kind = StandoffRecord::Kind::Attribute;
      rec.record_id = id;
      rec.attribute_name = head[0];
      rec.target_id = head[1];
      rec.value = head[2];
      attributes.emplace_back(line_no, std::move(rec));
    } else {
      parse_fail(line_no, "unsupported record kind '" + std::string(1, id[0]) + "'");
    }
  }

  std::map<std::string, MedicationMention> by_id;
  std::vector<std::string> order;
  for (const auto& rec : text_bounds) {
    MedicationMention m;
    m.mention_id = rec.record_id;
    m.doc_id = note.doc_id;
    m.span = rec.span;
    if (rec.label != "Drug") {
      auto event = try_parse_event_label(rec.label);
      if (!event)
        fail(ErrorKind::Parse,
             "record " + rec.record_id + ": unknown mention label \"" + rec.label + "\"");
      m.event = *event;
    }
    if (m.span.start >= m.span.end || m.span.end > note.char_count())
      fail(ErrorKind::Integrity, "record " + rec.record_id + ": span (" +
                                     std::to_string(m.span.start) + "," +
                                     std::to_string(m.span.end) +
                                     ") out of bounds for note of length " +
                                     std::to_string(note.char_count()));
    m.surface = slice(note, m.span);
    if (flatten_newlines(m.surface) != rec.surface)
      fail(ErrorKind::Integrity, "record " + rec.record_id + ": surface \"" + rec.surface +
                                     "\" does not match note text at span (" +
                                     std::to_string(m.span.start) + "," +
                                     std::to_string(m.span.end) + ")");
    if (m.event == EventLabel::Disposition) m.context = ContextLabels{};
    by_id.emplace(rec.record_id, std::move(m));
    order.push_back(rec.record_id);
  }

  std::set<std::pair<std::string, std::string>> seen_dims;
  for (const auto& [line_no, rec] : attributes) {
    auto it = by_id.find(rec.target_id);
    if (it == by_id.end())
      fail(ErrorKind::Reference, "attribute " + rec.record_id + ": dangling target \"" +
                                     rec.target_id + "\"");
    MedicationMention& target = it->second;
    if (target.event != EventLabel::Disposition)
      fail(ErrorKind::Integrity, "attribute " + rec.record_id + ": target " + rec.target_id +
                                     " is not a Disposition mention");
    ContextDimension dim;
    try {
      dim = parse_dimension(rec.attribute_name);
    } catch (const Error&) {
      parse_fail(line_no, "unknown attribute name \"" + rec.attribute_name + "\"");
    }
    if (!seen_dims.insert({rec.target_id, rec.attribute_name}).second)
      parse_fail(line_no, "duplicate " + rec.attribute_name + " attribute for " + rec.target_id);
    try {
      set_dimension_label(*target.context, dim, rec.value);
    } catch (const Error&) {
      parse_fail(line_no, "invalid " + rec.attribute_name + " value \"" + rec.value + "\"");
    }
  }

  std::vector<MedicationMention> mentions;
  mentions.reserve(order.size());
  for (const auto& id : order) mentions.push_back(std::move(by_id.at(id)));
  return mentions;
}

std::string emit_ann(const std::vector<MedicationMention>& mentions) {
  if (mentions.empty()) return "";
  for (const auto& m : mentions) {
    if (m.doc_id != mentions.front().doc_id)
      fail(ErrorKind::Usage, "emit_ann: mentions from mixed documents (\"" +
                                 mentions.front().doc_id + "\" vs \"" + m.doc_id + "\")");
  }
  std::vector<MedicationMention> sorted = mentions;
  std::sort(sorted.begin(), sorted.end(), mention_span_order);

  std::string out;
  std::size_t attr_counter = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const MedicationMention& m = sorted[i];
    const std::string tid = "T" + std::to_string(i + 1);
    const std::string label = m.event ? to_string(*m.event) : std::string("Drug");
    out += tid + "\t" + label + " " + std::to_string(m.span.start) + " " +
           std::to_string(m.span.end) + "\t" + flatten_newlines(m.surface) + "\n";
    if (m.context) {
      for (ContextDimension dim : kContextDimensions) {
        out += "A" + std::to_string(++attr_counter) + "\t" + dimension_name(dim) + " " + tid +
               " " + get_dimension_label(*m.context, dim) + "\n";
      }
    }
  }
  return out;
}

Corpus load_corpus_paired(const std::string& ann_dir, const std::string& txt_dir, Split split,
                          std::vector<std::string>* warnings) {
  if (!fs::is_directory(ann_dir)) fail(ErrorKind::Io, "not a directory: " + ann_dir);
  if (!fs::is_directory(txt_dir)) fail(ErrorKind::Io, "not a directory: " + txt_dir);

  std::set<std::string> txt_stems;
  std::set<std::string> ann_stems;
  for (const auto& entry : fs::directory_iterator(txt_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      txt_stems.insert(entry.path().stem().string());
  }
  for (const auto& entry : fs::directory_iterator(ann_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ann")
      ann_stems.insert(entry.path().stem().string());
  }

  Corpus corpus;
  corpus.split = split;
  for (const std::string& stem : txt_stems) {
    std::string text =
        normalize_newlines(read_file((fs::path(txt_dir) / (stem + ".txt")).string()));
    corpus.notes.emplace_back(stem, std::move(text));
    if (!ann_stems.count(stem)) {
      if (warnings) warnings->push_back("no .ann file for " + stem + ".txt");
      continue;
    }
    std::string ann =
        normalize_newlines(read_file((fs::path(ann_dir) / (stem + ".ann")).string()));
    try {
      auto mentions = parse_ann(ann, corpus.notes.back());
      corpus.mentions.insert(corpus.mentions.end(), mentions.begin(), mentions.end());
    } catch (const Error& e) {
      fail(e.kind(), stem + ".ann: " + e.what());
    }
  }
  for (const std::string& stem : ann_stems) {
    if (!txt_stems.count(stem) && warnings)
      warnings->push_back("no .txt file for " + stem + ".ann, skipped");
  }
  return corpus;
}

Corpus load_corpus(const std::string& dir, Split split, std::vector<std::string>* warnings) {
  return load_corpus_paired(dir, dir, split, warnings);
}

void write_corpus_dir(const std::string& dir, const Corpus& corpus) {
  fs::create_directories(dir);
  std::map<std::string, std::vector<MedicationMention>> grouped;
  for (const auto& m : corpus.mentions) grouped[m.doc_id].push_back(m);
  for (const auto& note : corpus.notes) {
    write_file((fs::path(dir) / (note.doc_id + ".txt")).string(), note.text);
    auto it = grouped.find(note.doc_id);
    const std::vector<MedicationMention> empty;
    write_file((fs::path(dir) / (note.doc_id + ".ann")).string(),
               emit_ann(it == grouped.end() ? empty : it->second));
  }
}

}  // namespace medex
