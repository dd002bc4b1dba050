#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medex/util.hpp"

namespace medex {

// Half-open character interval [start, end). Offsets count Unicode scalar
// values of the owning note's text, not bytes.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool overlaps(const Span& other) const {
    return std::max(start, other.start) < std::min(end, other.end);
  }
  auto operator<=>(const Span&) const = default;
};

enum class EventLabel { Disposition, NoDisposition, Undetermined };
enum class ActionLabel { Start, Stop, Increase, Decrease, UniqueDose, OtherChange, Unknown };
enum class TemporalityLabel { Past, Present, Future, Unknown };
enum class CertaintyLabel { Certain, Hypothetical, Conditional, Unknown };
enum class ActorLabel { Physician, Patient, Unknown };
enum class NegationLabel { Negated, NotNegated };

std::string to_string(EventLabel v);
std::string to_string(ActionLabel v);
std::string to_string(TemporalityLabel v);
std::string to_string(CertaintyLabel v);
std::string to_string(ActorLabel v);
std::string to_string(NegationLabel v);

// Closed-set parses; any other string raises a Taxonomy error.
EventLabel parse_event_label(std::string_view s);
ActionLabel parse_action_label(std::string_view s);
TemporalityLabel parse_temporality_label(std::string_view s);
CertaintyLabel parse_certainty_label(std::string_view s);
ActorLabel parse_actor_label(std::string_view s);
NegationLabel parse_negation_label(std::string_view s);

std::optional<EventLabel> try_parse_event_label(std::string_view s);

// The five task-3 axes. Unknown/NotNegated are explicit values: a populated
// ContextLabels never has an "absent" dimension.
struct ContextLabels {
  ActionLabel action = ActionLabel::Unknown;
  TemporalityLabel temporality = TemporalityLabel::Unknown;
  CertaintyLabel certainty = CertaintyLabel::Unknown;
  ActorLabel actor = ActorLabel::Unknown;
  NegationLabel negation = NegationLabel::NotNegated;

  bool operator==(const ContextLabels&) const = default;
};

enum class ContextDimension { Action, Temporality, Certainty, Actor, Negation };

inline constexpr ContextDimension kContextDimensions[] = {
    ContextDimension::Action, ContextDimension::Temporality, ContextDimension::Certainty,
    ContextDimension::Actor, ContextDimension::Negation};

std::string dimension_name(ContextDimension dim);
ContextDimension parse_dimension(std::string_view name);

// Class names of one dimension in taxonomy order (the tie-break and
// one-vs-rest ordering everywhere).
const std::vector<std::string>& dimension_classes(ContextDimension dim);

std::string get_dimension_label(const ContextLabels& labels, ContextDimension dim);
void set_dimension_label(ContextLabels& labels, ContextDimension dim, std::string_view value);

struct ClinicalNote {
  std::string doc_id;
  std::string text;  // UTF-8, newlines normalized to LF on load

  ClinicalNote() = default;
  ClinicalNote(std::string id, std::string contents);

  // Decoded view used by offset-sensitive code.
  const std::u32string& chars() const { return chars_; }
  std::size_t char_count() const { return chars_.size(); }

 private:
  std::u32string chars_;
};

// Exact character subsequence [start, end); out-of-bounds spans raise a
// Range error naming the offsets.
std::string slice(const ClinicalNote& note, const Span& span);

struct MedicationMention {
  // mention_id is a file artifact (the standoff record id); it is excluded
  // from equality so round-trips compare annotation content only.
  std::string mention_id;
  std::string doc_id;
  Span span;
  std::string surface;
  std::optional<EventLabel> event;
  std::optional<ContextLabels> context;

  bool operator==(const MedicationMention& other) const {
    return doc_id == other.doc_id && span == other.span && surface == other.surface &&
           event == other.event && context == other.context;
  }
};

// Deterministic ordering used by emission and reporting:
// (start, end, event rank, surface); event-less mentions sort last.
bool mention_span_order(const MedicationMention& a, const MedicationMention& b);

enum class Split { Train, Test };

std::string to_string(Split split);

struct Corpus {
  Split split = Split::Train;
  std::vector<ClinicalNote> notes;
  std::vector<MedicationMention> mentions;

  const ClinicalNote* find_note(std::string_view doc_id) const;
  std::vector<const MedicationMention*> mentions_of(std::string_view doc_id) const;
};

// Returns one human-readable description per broken invariant; empty means
// the corpus is valid. Violations are data, not errors.
std::vector<std::string> validate_corpus(const Corpus& corpus);

}  // namespace medex
