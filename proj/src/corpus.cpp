#include "medex/corpus.hpp"

#include <algorithm>
#include <set>

namespace medex {

std::string to_string(EventLabel v) {
  switch (v) {
    case EventLabel::Disposition: return "Disposition";
    case EventLabel::NoDisposition: return "NoDisposition";
    case EventLabel::Undetermined: return "Undetermined";
  }
  return "?";
}

std::string to_string(ActionLabel v) {
  switch (v) {
    case ActionLabel::Start: return "Start";
    case ActionLabel::Stop: return "Stop";
    case ActionLabel::Increase: return "Increase";
    case ActionLabel::Decrease: return "Decrease";
    case ActionLabel::UniqueDose: return "UniqueDose";
    case ActionLabel::OtherChange: return "OtherChange";
    case ActionLabel::Unknown: return "Unknown";
  }
  return "?";
}

std::string to_string(TemporalityLabel v) {
  switch (v) {
    case TemporalityLabel::Past: return "Past";
    case TemporalityLabel::Present: return "Present";
    case TemporalityLabel::Future: return "Future";
    case TemporalityLabel::Unknown: return "Unknown";
  }
  return "?";
}

std::string to_string(CertaintyLabel v) {
  switch (v) {
    case CertaintyLabel::Certain: return "Certain";
    case CertaintyLabel::Hypothetical: return "Hypothetical";
    case CertaintyLabel::Conditional: return "Conditional";
    case CertaintyLabel::Unknown: return "Unknown";
  }
  return "?";
}

std::string to_string(ActorLabel v) {
  switch (v) {
    case ActorLabel::Physician: return "Physician";
    case ActorLabel::Patient: return "Patient";
    case ActorLabel::Unknown: return "Unknown";
  }
  return "?";
}

std::string to_string(NegationLabel v) {
  switch (v) {
    case NegationLabel::Negated: return "Negated";
    case NegationLabel::NotNegated: return "NotNegated";
  }
  return "?";
}

namespace {

[[noreturn]] void bad_label(std::string_view what, std::string_view s) {
  fail(ErrorKind::Taxonomy,
       "unknown " + std::string(what) + " label: \"" + std::string(s) + "\"");
}

}  // namespace

EventLabel parse_event_label(std::string_view s) {
  if (s == "Disposition") return EventLabel::Disposition;
  if (s == "NoDisposition") return EventLabel::NoDisposition;
  if (s == "Undetermined") return EventLabel::Undetermined;
  bad_label("event", s);
}

std::optional<EventLabel> try_parse_event_label(std::string_view s) {
  if (s == "Disposition") return EventLabel::Disposition;
  if (s == "NoDisposition") return EventLabel::NoDisposition;
  if (s == "Undetermined") return EventLabel::Undetermined;
  return std::nullopt;
}

ActionLabel parse_action_label(std::string_view s) {
  if (s == "Start") return ActionLabel::Start;
  if (s == "Stop") return ActionLabel::Stop;
  if (s == "Increase") return ActionLabel::Increase;
  if (s == "Decrease") return ActionLabel::Decrease;
  if (s == "UniqueDose") return ActionLabel::UniqueDose;
  if (s == "OtherChange") return ActionLabel::OtherChange;
  if (s == "Unknown") return ActionLabel::Unknown;
  bad_label("action", s);
}

TemporalityLabel parse_temporality_label(std::string_view s) {
  if (s == "Past") return TemporalityLabel::Past;
  if (s == "Present") return TemporalityLabel::Present;
  if (s == "Future") return TemporalityLabel::Future;
  if (s == "Unknown") return TemporalityLabel::Unknown;
  bad_label("temporality", s);
}

CertaintyLabel parse_certainty_label(std::string_view s) {
  if (s == "Certain") return CertaintyLabel::Certain;
  if (s == "Hypothetical") return CertaintyLabel::Hypothetical;
  if (s == "Conditional") return CertaintyLabel::Conditional;
  if (s == "Unknown") return CertaintyLabel::Unknown;
  bad_label("certainty", s);
}

ActorLabel parse_actor_label(std::string_view s) {
  if (s == "Physician") return ActorLabel::Physician;
  if (s == "Patient") return ActorLabel::Patient;
  if (s == "Unknown") return ActorLabel::Unknown;
  bad_label("actor", s);
}

NegationLabel parse_negation_label(std::string_view s) {
  if (s == "Negated") return NegationLabel::Negated;
  if (s == "NotNegated") return NegationLabel::NotNegated;
  bad_label("negation", s);
}

std::string dimension_name(ContextDimension dim) {
  switch (dim) {
    case ContextDimension::Action: return "Action";
    case ContextDimension::Temporality: return "Temporality";
    case ContextDimension::Certainty: return "Certainty";
    case ContextDimension::Actor: return "Actor";
    case ContextDimension::Negation: return "Negation";
  }
  return "?";
}

ContextDimension parse_dimension(std::string_view name) {
  if (name == "Action") return ContextDimension::Action;
  if (name == "Temporality") return ContextDimension::Temporality;
  if (name == "Certainty") return ContextDimension::Certainty;
  if (name == "Actor") return ContextDimension::Actor;
  if (name == "Negation") return ContextDimension::Negation;
  bad_label("dimension", name);
}

const std::vector<std::string>& dimension_classes(ContextDimension dim) {
  static const std::vector<std::string> action = {
      "Start", "Stop", "Increase", "Decrease", "UniqueDose", "OtherChange", "Unknown"};
  static const std::vector<std::string> temporality = {"Past", "Present", "Future", "Unknown"};
  static const std::vector<std::string> certainty = {
      "Certain", "Hypothetical", "Conditional", "Unknown"};
  static const std::vector<std::string> actor = {"Physician", "Patient", "Unknown"};
  static const std::vector<std::string> negation = {"Negated", "NotNegated"};
  switch (dim) {
    case ContextDimension::Action: return action;
    case ContextDimension::Temporality: return temporality;
    case ContextDimension::Certainty: return certainty;
    case ContextDimension::Actor: return actor;
    case ContextDimension::Negation: return negation;
  }
  return action;
}

std::string get_dimension_label(const ContextLabels& labels, ContextDimension dim) {
  switch (dim) {
    case ContextDimension::Action: return to_string(labels.action);
    case ContextDimension::Temporality: return to_string(labels.temporality);
    case ContextDimension::Certainty: return to_string(labels.certainty);
    case ContextDimension::Actor: return to_string(labels.actor);
    case ContextDimension::Negation: return to_string(labels.negation);
  }
  return "?";
}

void set_dimension_label(ContextLabels& labels, ContextDimension dim, std::string_view value) {
  switch (dim) {
    case ContextDimension::Action: labels.action = parse_action_label(value); return;
    case ContextDimension::Temporality:
      labels.temporality = parse_temporality_label(value);
      return;
    case ContextDimension::Certainty: labels.certainty = parse_certainty_label(value); return;
    case ContextDimension::Actor: labels.actor = parse_actor_label(value); return;
    case ContextDimension::Negation: labels.negation = parse_negation_label(value); return;
  }
}

ClinicalNote::ClinicalNote(std::string id, std::string contents)
    : doc_id(std::move(id)), text(std::move(contents)), chars_(utf8::decode(text)) {}

std::string slice(const ClinicalNote& note, const Span& span) {
  if (span.start >= span.end || span.end > note.char_count())
    fail(ErrorKind::Range, "span (" + std::to_string(span.start) + "," +
                               std::to_string(span.end) + ") out of bounds for note \"" +
                               note.doc_id + "\" of length " +
                               std::to_string(note.char_count()));
  return utf8::encode(note.chars().substr(span.start, span.end - span.start));
}

namespace {

int event_rank(const std::optional<EventLabel>& event) {
  if (!event) return 3;
  return static_cast<int>(*event);
}

}  // namespace

bool mention_span_order(const MedicationMention& a, const MedicationMention& b) {
  if (a.span != b.span) return a.span < b.span;
  if (event_rank(a.event) != event_rank(b.event)) return event_rank(a.event) < event_rank(b.event);
  return a.surface < b.surface;
}

std::string to_string(Split split) { return split == Split::Train ? "train" : "test"; }

const ClinicalNote* Corpus::find_note(std::string_view doc_id) const {
  for (const auto& note : notes) {
    if (note.doc_id == doc_id) return &note;
  }
  return nullptr;
}

std::vector<const MedicationMention*> Corpus::mentions_of(std::string_view doc_id) const {
  std::vector<const MedicationMention*> out;
  for (const auto& m : mentions) {
    if (m.doc_id == doc_id) out.push_back(&m);
  }
  std::sort(out.begin(), out.end(), [](const MedicationMention* a, const MedicationMention* b) {
    return mention_span_order(*a, *b);
  });
  return out;
}

std::vector<std::string> validate_corpus(const Corpus& corpus) {
  std::vector<std::string> violations;
  std::set<std::string> doc_ids;
  std::map<std::string, const ClinicalNote*> by_id;

  for (const auto& note : corpus.notes) {
    if (note.doc_id.empty()) violations.push_back("note with empty doc_id");
    if (!doc_ids.insert(note.doc_id).second)
      violations.push_back("duplicate doc_id \"" + note.doc_id + "\"");
    if (note.text.empty())
      violations.push_back("note \"" + note.doc_id + "\": empty text");
    by_id[note.doc_id] = &note;
  }

  std::map<std::string, std::set<std::pair<Span, int>>> seen_per_doc;
  for (const auto& m : corpus.mentions) {
    const std::string where = "doc \"" + m.doc_id + "\" mention \"" + m.mention_id + "\"";
    auto it = by_id.find(m.doc_id);
    if (it == by_id.end()) {
      violations.push_back(where + ": doc_id does not resolve to a note");
      continue;
    }
    const ClinicalNote& note = *it->second;
    if (m.span.start >= m.span.end || m.span.end > note.char_count()) {
      violations.push_back(where + ": span (" + std::to_string(m.span.start) + "," +
                           std::to_string(m.span.end) + ") out of bounds for text of length " +
                           std::to_string(note.char_count()));
      continue;
    }
    if (slice(note, m.span) != m.surface)
      violations.push_back(where + ": surface \"" + m.surface +
                           "\" does not equal note text at span");
    if (m.context && m.event != EventLabel::Disposition)
      violations.push_back(where + ": context labels present but event is not Disposition");
    auto key = std::make_pair(m.span, event_rank(m.event));
    if (!seen_per_doc[m.doc_id].insert(key).second)
      violations.push_back(where + ": duplicate mention by (span, event)");
  }
  return violations;
}

}  // namespace medex
