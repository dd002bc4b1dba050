#include "medex/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace medex {

double precision(const ConfusionCounts& c) {
  return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const ConfusionCounts& c) {
  return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f_score(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

MetricTriple metrics(const ConfusionCounts& c) {
  MetricTriple t;
  t.precision = precision(c);
  t.recall = recall(c);
  t.f_score = f_score(t.precision, t.recall);
  return t;
}

namespace {

bool spans_compatible(const MedicationMention& g, const MedicationMention& p, MatchMode mode) {
  if (mode == MatchMode::Strict) return g.span == p.span;
  return g.span.overlaps(p.span);
}

std::vector<const MedicationMention*> sorted_by_span(
    const std::vector<const MedicationMention*>& mentions) {
  std::vector<const MedicationMention*> out = mentions;
  std::sort(out.begin(), out.end(), [](const MedicationMention* a, const MedicationMention* b) {
    return mention_span_order(*a, *b);
  });
  return out;
}

}  // namespace

MatchResult match_spans(const std::vector<const MedicationMention*>& gold,
                        const std::vector<const MedicationMention*>& pred, MatchMode mode,
                        bool labeled) {
  const std::string* doc = nullptr;
  for (const auto* lists : {&gold, &pred}) {
    for (const MedicationMention* m : *lists) {
      if (!doc) doc = &m->doc_id;
      else if (m->doc_id != *doc)
        fail(ErrorKind::Usage, "match_spans: cross-document comparison (\"" + *doc + "\" vs \"" +
                                   m->doc_id + "\")");
    }
  }

  std::vector<const MedicationMention*> g = sorted_by_span(gold);
  std::vector<const MedicationMention*> p = sorted_by_span(pred);
  std::vector<bool> pred_used(p.size(), false);

  MatchResult result;
  for (const MedicationMention* gm : g) {
    bool matched = false;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (pred_used[j]) continue;
      if (!spans_compatible(*gm, *p[j], mode)) continue;
      if (labeled && gm->event != p[j]->event) continue;
      pred_used[j] = true;
      result.pairs.emplace_back(gm, p[j]);
      matched = true;
      break;
    }
    if (!matched) result.unmatched_gold.push_back(gm);
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!pred_used[j]) result.unmatched_pred.push_back(p[j]);
  }
  result.counts.tp = result.pairs.size();
  result.counts.fp = result.unmatched_pred.size();
  result.counts.fn = result.unmatched_gold.size();
  return result;
}

namespace {

// Groups both sides by doc_id so match_spans always sees one document.
std::map<std::string, std::pair<std::vector<const MedicationMention*>,
                                std::vector<const MedicationMention*>>>
group_by_doc(const std::vector<MedicationMention>& gold,
             const std::vector<MedicationMention>& pred) {
  std::map<std::string,
           std::pair<std::vector<const MedicationMention*>, std::vector<const MedicationMention*>>>
      docs;
  for (const MedicationMention& m : gold) docs[m.doc_id].first.push_back(&m);
  for (const MedicationMention& m : pred) docs[m.doc_id].second.push_back(&m);
  return docs;
}

}  // namespace

TaskEval evaluate_task1(const std::vector<MedicationMention>& gold,
                        const std::vector<MedicationMention>& pred) {
  TaskEval eval;
  for (const auto& [doc, lists] : group_by_doc(gold, pred)) {
    eval.strict_counts.add(match_spans(lists.first, lists.second, MatchMode::Strict, false).counts);
    eval.lenient_counts.add(
        match_spans(lists.first, lists.second, MatchMode::Lenient, false).counts);
  }
  eval.strict = metrics(eval.strict_counts);
  eval.lenient = metrics(eval.lenient_counts);
  return eval;
}

Task2Eval evaluate_task2(const std::vector<MedicationMention>& gold,
                         const std::vector<MedicationMention>& pred) {
  Task2Eval eval;
  for (EventLabel label :
       {EventLabel::Disposition, EventLabel::NoDisposition, EventLabel::Undetermined})
    eval.per_label[label] = TaskEval{};

  for (const auto& [doc, lists] : group_by_doc(gold, pred)) {
    for (MatchMode mode : {MatchMode::Strict, MatchMode::Lenient}) {
      MatchResult r = match_spans(lists.first, lists.second, mode, true);
      auto& micro = mode == MatchMode::Strict ? eval.micro.strict_counts
                                              : eval.micro.lenient_counts;
      micro.add(r.counts);
      auto cell_of = [&](const std::optional<EventLabel>& event) -> ConfusionCounts* {
        if (!event) return nullptr;  // event-less mentions count only in micro
        TaskEval& cell = eval.per_label[*event];
        return mode == MatchMode::Strict ? &cell.strict_counts : &cell.lenient_counts;
      };
      for (const auto& [gm, pm] : r.pairs) {
        if (ConfusionCounts* c = cell_of(gm->event)) c->tp += 1;
      }
      for (const MedicationMention* gm : r.unmatched_gold) {
        if (ConfusionCounts* c = cell_of(gm->event)) c->fn += 1;
      }
      for (const MedicationMention* pm : r.unmatched_pred) {
        if (ConfusionCounts* c = cell_of(pm->event)) c->fp += 1;
      }
    }
  }
  eval.micro.strict = metrics(eval.micro.strict_counts);
  eval.micro.lenient = metrics(eval.micro.lenient_counts);
  for (auto& [label, cell] : eval.per_label) {
    cell.strict = metrics(cell.strict_counts);
    cell.lenient = metrics(cell.lenient_counts);
  }
  return eval;
}

namespace {

std::string dimension_label_or_none(const MedicationMention& m, ContextDimension dim) {
  if (!m.context) return "<none>";
  return get_dimension_label(*m.context, dim);
}

}  // namespace

Task3Eval evaluate_task3(const std::vector<MedicationMention>& gold,
                         const std::vector<MedicationMention>& pred) {
  std::vector<MedicationMention> gold_disp, pred_disp;
  for (const MedicationMention& m : gold)
    if (m.event == EventLabel::Disposition) gold_disp.push_back(m);
  for (const MedicationMention& m : pred)
    if (m.event == EventLabel::Disposition) pred_disp.push_back(m);

  Task3Eval eval;
  for (const auto& [doc, lists] : group_by_doc(gold_disp, pred_disp)) {
    MatchResult r = match_spans(lists.first, lists.second, MatchMode::Lenient, true);
    for (const auto& [gm, pm] : r.pairs) {
      bool all_agree = true;
      for (ContextDimension dim : kContextDimensions) {
        std::size_t idx = static_cast<std::size_t>(dim);
        if (dimension_label_or_none(*gm, dim) == dimension_label_or_none(*pm, dim)) {
          eval.dimension_counts[idx].tp += 1;
        } else {
          eval.dimension_counts[idx].fp += 1;
          eval.dimension_counts[idx].fn += 1;
          all_agree = false;
        }
      }
      if (all_agree) {
        eval.combined_counts.tp += 1;
      } else {
        eval.combined_counts.fp += 1;
        eval.combined_counts.fn += 1;
      }
    }
    for (std::size_t idx = 0; idx < 5; ++idx) {
      eval.dimension_counts[idx].fn += r.unmatched_gold.size();
      eval.dimension_counts[idx].fp += r.unmatched_pred.size();
    }
    eval.combined_counts.fn += r.unmatched_gold.size();
    eval.combined_counts.fp += r.unmatched_pred.size();
  }

  double p_sum = 0, r_sum = 0, f_sum = 0;
  for (std::size_t idx = 0; idx < 5; ++idx) {
    eval.dimensions[idx] = metrics(eval.dimension_counts[idx]);
    eval.overall_counts.add(eval.dimension_counts[idx]);
    p_sum += eval.dimensions[idx].precision;
    r_sum += eval.dimensions[idx].recall;
    f_sum += eval.dimensions[idx].f_score;
  }
  eval.overall = metrics(eval.overall_counts);
  eval.overall_macro = MetricTriple{p_sum / 5.0, r_sum / 5.0, f_sum / 5.0};
  eval.combined = metrics(eval.combined_counts);
  return eval;
}

EvalReport evaluate_all(const std::vector<MedicationMention>& gold,
                        const std::vector<MedicationMention>& pred, bool macro_overall) {
  EvalReport report;
  report.task1 = evaluate_task1(gold, pred);
  report.task2 = evaluate_task2(gold, pred);
  report.task3 = evaluate_task3(gold, pred);
  report.macro_overall = macro_overall;
  return report;
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::Text;
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  fail(ErrorKind::Usage, "unknown report format \"" + std::string(s) +
                             "\" (expected text, json or csv)");
}

namespace {

using nlohmann::json;

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

bool degenerate(const ConfusionCounts& c) { return c.tp + c.fp == 0 || c.tp + c.fn == 0; }

std::string text_row(const std::string& name, const MetricTriple& t, const ConfusionCounts& c,
                     bool* flagged) {
  std::string row = "  ";
  row += name;
  if (name.size() < 24) row += std::string(24 - name.size(), ' ');
  row += fixed4(t.precision) + "  " + fixed4(t.recall) + "  " + fixed4(t.f_score);
  row += "  (" + std::to_string(c.tp) + "/" + std::to_string(c.fp) + "/" +
         std::to_string(c.fn) + ")";
  if (degenerate(c)) {
    row += " *";
    if (flagged) *flagged = true;
  }
  row += "\n";
  return row;
}

json triple_json(const MetricTriple& t, const ConfusionCounts& c) {
  return json{{"precision", t.precision}, {"recall", t.recall},   {"f_score", t.f_score},
              {"tp", c.tp},               {"fp", c.fp},           {"fn", c.fn},
              {"degenerate", degenerate(c)}};
}

std::string csv_row(const std::string& task, const std::string& section, const std::string& mode,
                    const MetricTriple& t, const ConfusionCounts& c) {
  return task + "," + section + "," + mode + "," + format_full(t.precision) + "," +
         format_full(t.recall) + "," + format_full(t.f_score) + "," + std::to_string(c.tp) + "," +
         std::to_string(c.fp) + "," + std::to_string(c.fn) + "\n";
}

}  // namespace

std::string render_report(const EvalReport& report, ReportFormat format) {
  const auto& t3 = report.task3;
  if (format == ReportFormat::Text) {
    bool flagged = false;
    std::string out;
    out += "Task 1: Medication Detection\n";
    out += "  mode                    precision  recall  f-score  (TP/FP/FN)\n";
    out += text_row("strict", report.task1.strict, report.task1.strict_counts, &flagged);
    out += text_row("lenient", report.task1.lenient, report.task1.lenient_counts, &flagged);
    out += "\nTask 2: Medication Event Classification\n";
    out += "  label                   precision  recall  f-score  (TP/FP/FN)\n";
    for (const auto& [label, cell] : report.task2.per_label) {
      out += text_row(to_string(label) + " strict", cell.strict, cell.strict_counts, &flagged);
      out += text_row(to_string(label) + " lenient", cell.lenient, cell.lenient_counts, &flagged);
    }
    out += text_row("micro strict", report.task2.micro.strict, report.task2.micro.strict_counts,
                    &flagged);
    out += text_row("micro lenient", report.task2.micro.lenient,
                    report.task2.micro.lenient_counts, &flagged);
    out += "\nTask 3: Context Classification\n";
    out += "  dimension               precision  recall  f-score  (TP/FP/FN)\n";
    for (ContextDimension dim : kContextDimensions) {
      std::size_t idx = static_cast<std::size_t>(dim);
      out += text_row(dimension_name(dim), t3.dimensions[idx], t3.dimension_counts[idx], &flagged);
    }
    if (report.macro_overall) {
      out += "  overall (macro)         " + fixed4(t3.overall_macro.precision) + "  " +
             fixed4(t3.overall_macro.recall) + "  " + fixed4(t3.overall_macro.f_score) + "\n";
    } else {
      out += text_row("overall (micro)", t3.overall, t3.overall_counts, &flagged);
    }
    out += text_row("combined", t3.combined, t3.combined_counts, &flagged);
    if (flagged) out += "\n  * metric over an empty denominator, reported as 0\n";
    return out;
  }

  if (format == ReportFormat::Json) {
    json j;
    j["task1"]["strict"] = triple_json(report.task1.strict, report.task1.strict_counts);
    j["task1"]["lenient"] = triple_json(report.task1.lenient, report.task1.lenient_counts);
    j["task2"]["micro"]["strict"] =
        triple_json(report.task2.micro.strict, report.task2.micro.strict_counts);
    j["task2"]["micro"]["lenient"] =
        triple_json(report.task2.micro.lenient, report.task2.micro.lenient_counts);
    for (const auto& [label, cell] : report.task2.per_label) {
      j["task2"]["per_label"][to_string(label)]["strict"] =
          triple_json(cell.strict, cell.strict_counts);
      j["task2"]["per_label"][to_string(label)]["lenient"] =
          triple_json(cell.lenient, cell.lenient_counts);
    }
    for (ContextDimension dim : kContextDimensions) {
      std::size_t idx = static_cast<std::size_t>(dim);
      j["task3"]["dimensions"][dimension_name(dim)] =
          triple_json(t3.dimensions[idx], t3.dimension_counts[idx]);
    }
    j["task3"]["overall"] = triple_json(t3.overall, t3.overall_counts);
    j["task3"]["overall_macro"] = {{"precision", t3.overall_macro.precision},
                                   {"recall", t3.overall_macro.recall},
                                   {"f_score", t3.overall_macro.f_score}};
    j["task3"]["combined"] = triple_json(t3.combined, t3.combined_counts);
    return j.dump(2) + "\n";
  }

  std::string out = "task,section,mode,precision,recall,f_score,tp,fp,fn\n";
  out += csv_row("task1", "all", "strict", report.task1.strict, report.task1.strict_counts);
  out += csv_row("task1", "all", "lenient", report.task1.lenient, report.task1.lenient_counts);
  for (const auto& [label, cell] : report.task2.per_label) {
    out += csv_row("task2", to_string(label), "strict", cell.strict, cell.strict_counts);
    out += csv_row("task2", to_string(label), "lenient", cell.lenient, cell.lenient_counts);
  }
  out += csv_row("task2", "micro", "strict", report.task2.micro.strict,
                 report.task2.micro.strict_counts);
  out += csv_row("task2", "micro", "lenient", report.task2.micro.lenient,
                 report.task2.micro.lenient_counts);
  for (ContextDimension dim : kContextDimensions) {
    std::size_t idx = static_cast<std::size_t>(dim);
    out += csv_row("task3", dimension_name(dim), "lenient", t3.dimensions[idx],
                   t3.dimension_counts[idx]);
  }
  out += csv_row("task3", "overall_micro", "lenient", t3.overall, t3.overall_counts);
  out += csv_row("task3", "combined", "lenient", t3.combined, t3.combined_counts);
  return out;
}

}  // namespace medex
