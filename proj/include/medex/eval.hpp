#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "medex/corpus.hpp"

namespace medex {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  void add(const ConfusionCounts& other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

struct MetricTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
};

// 0/0 cells evaluate to 0.0, never NaN; reports flag them.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
double f_score(double p, double r);
MetricTriple metrics(const ConfusionCounts& c);

enum class MatchMode { Strict, Lenient };

struct MatchResult {
  ConfusionCounts counts;
  std::vector<std::pair<const MedicationMention*, const MedicationMention*>> pairs;
  std::vector<const MedicationMention*> unmatched_gold;
  std::vector<const MedicationMention*> unmatched_pred;
};

// Greedy one-to-one matching in (start, end) order over one document.
// Strict pairs identical spans; lenient pairs overlapping spans; labels
// (event) must also agree when `labeled`. Mixing documents is a usage error.
MatchResult match_spans(const std::vector<const MedicationMention*>& gold,
                        const std::vector<const MedicationMention*>& pred, MatchMode mode,
                        bool labeled);

struct TaskEval {
  ConfusionCounts strict_counts;
  ConfusionCounts lenient_counts;
  MetricTriple strict;
  MetricTriple lenient;
};

// Task 1: every mention counts as a Drug; label-blind matching.
TaskEval evaluate_task1(const std::vector<MedicationMention>& gold,
                        const std::vector<MedicationMention>& pred);

struct Task2Eval {
  TaskEval micro;
  std::map<EventLabel, TaskEval> per_label;
};

// Task 2: label-aware matching on the event label; per-class counts plus
// the micro aggregate.
Task2Eval evaluate_task2(const std::vector<MedicationMention>& gold,
                         const std::vector<MedicationMention>& pred);

struct Task3Eval {
  std::array<ConfusionCounts, 5> dimension_counts;  // taxonomy order
  std::array<MetricTriple, 5> dimensions;
  ConfusionCounts overall_counts;  // micro pool of the five dimensions
  MetricTriple overall;
  MetricTriple overall_macro;  // arithmetic mean of the five triples
  ConfusionCounts combined_counts;
  MetricTriple combined;
};

// Task 3: Disposition mentions only, paired leniently first; a pair is TP
// for a dimension iff its labels agree, TP for combined iff all five agree;
// unmatched mentions count against every dimension and combined.
Task3Eval evaluate_task3(const std::vector<MedicationMention>& gold,
                         const std::vector<MedicationMention>& pred);

struct EvalReport {
  TaskEval task1;
  Task2Eval task2;
  Task3Eval task3;
  bool macro_overall = false;  // report the macro task-3 overall instead of micro
};

EvalReport evaluate_all(const std::vector<MedicationMention>& gold,
                        const std::vector<MedicationMention>& pred, bool macro_overall = false);

enum class ReportFormat { Text, Json, Csv };

ReportFormat parse_report_format(std::string_view s);

// Text uses 4-decimal cells; JSON carries full precision plus raw counts;
// all three are byte-deterministic.
std::string render_report(const EvalReport& report, ReportFormat format);

}  // namespace medex
