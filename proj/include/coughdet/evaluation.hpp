// Event-level evaluation: one-to-one matching of detections to annotated
// coughs, sensitivity/specificity scoring, and per-class confusion tables.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coughdet/detector.hpp"
#include "coughdet/types.hpp"

namespace coughdet {

inline constexpr double kOnsetToleranceSeconds = 0.100;
inline constexpr double kNegativeUnitSeconds = 1.0;

struct EventMatchResult {
  int true_positives = 0;
  int misses = 0;
  int false_alarms = 0;
  // Unmatched detections, attributed to the annotated class covering their
  // midpoint (background if none).
  std::vector<std::pair<DetectionEvent, EventClass>> false_alarm_events;
};

// Greedy one-to-one matching in onset order: a detection matches an
// unmatched cough when their intervals overlap or the detection onset lies
// within 100 ms of the cough onset.
inline EventMatchResult match_events(std::vector<DetectionEvent> detections,
                                     const std::vector<LabeledEvent>& truth) {
  std::sort(detections.begin(), detections.end(),
            [](const DetectionEvent& a, const DetectionEvent& b) { return a.onset_s < b.onset_s; });
  std::vector<const LabeledEvent*> coughs;
  for (const auto& e : truth)
    if (e.cls == EventClass::cough) coughs.push_back(&e);
  std::sort(coughs.begin(), coughs.end(),
            [](const LabeledEvent* a, const LabeledEvent* b) { return a->start_s < b->start_s; });

  EventMatchResult result;
  std::vector<char> matched(coughs.size(), 0);
  for (const auto& d : detections) {
    bool found = false;
    for (std::size_t i = 0; i < coughs.size(); ++i) {
      if (matched[i]) continue;
      const auto& c = *coughs[i];
      const bool overlap = d.onset_s < c.end_s && d.offset_s > c.start_s;
      const bool near_onset = std::abs(d.onset_s - c.start_s) <= kOnsetToleranceSeconds;
      if (overlap || near_onset) {
        matched[i] = 1;
        ++result.true_positives;
        found = true;
        break;
      }
    }
    if (!found) {
      const double mid = 0.5 * (d.onset_s + d.offset_s);
      EventClass cls = EventClass::background;
      for (const auto& e : truth)
        if (e.contains(mid)) {
          cls = e.cls;
          break;
        }
      ++result.false_alarms;
      result.false_alarm_events.emplace_back(d, cls);
    }
  }
  for (char m : matched)
    if (!m) ++result.misses;
  return result;
}

// Negative units: annotated non-cough events count one each; speech events
// and unannotated background gaps are chopped into 1 s pseudo-events. A unit
// is marked when an unmatched detection's midpoint falls inside it.
struct NegativeUnits {
  int total = 0;
  int marked = 0;
};

namespace detail {

inline int chop_units(double start, double end) {
  const double dur = end - start;
  if (dur <= 1e-9) return 0;
  return static_cast<int>(std::ceil(dur / kNegativeUnitSeconds - 1e-9));
}

}  // namespace detail

inline NegativeUnits count_negative_units(const EventMatchResult& match,
                                          const std::vector<LabeledEvent>& truth, double duration_s) {
  struct Unit {
    double start, end;
  };
  std::vector<Unit> units;
  std::vector<LabeledEvent> sorted = truth;
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledEvent& a, const LabeledEvent& b) { return a.start_s < b.start_s; });
  auto chop = [&](double s, double e) {
    const int n = detail::chop_units(s, e);
    for (int i = 0; i < n; ++i)
      units.push_back({s + i * kNegativeUnitSeconds, std::min(e, s + (i + 1) * kNegativeUnitSeconds)});
  };
  double cursor = 0.0;
  for (const auto& e : sorted) {
    if (e.start_s > cursor) chop(cursor, e.start_s);  // background gap
    cursor = std::max(cursor, e.end_s);
    switch (e.cls) {
      case EventClass::forced_expiration:
      case EventClass::throat_clearing:
      case EventClass::laugh:
        units.push_back({e.start_s, e.end_s});
        break;
      case EventClass::speech:
        chop(e.start_s, e.end_s);
        break;
      default:
        break;  // coughs are positives; explicit background rows are gaps
    }
    if (e.cls == EventClass::background) chop(e.start_s, e.end_s);
  }
  if (duration_s > cursor) chop(cursor, duration_s);

  NegativeUnits out;
  out.total = static_cast<int>(units.size());
  for (const auto& u : units) {
    bool hit = false;
    for (const auto& [d, cls] : match.false_alarm_events) {
      const double mid = 0.5 * (d.onset_s + d.offset_s);
      if (mid >= u.start && mid < u.end) {
        hit = true;
        break;
      }
    }
    if (hit) ++out.marked;
  }
  return out;
}

struct SubjectScore {
  std::string subject_id;
  int true_positives = 0;
  int misses = 0;
  int false_alarms = 0;
  int negatives_total = 0;
  int negatives_marked = 0;

  std::optional<double> sensitivity_pct() const {
    const int coughs = true_positives + misses;
    if (coughs == 0) return std::nullopt;
    return 100.0 * true_positives / coughs;
  }
  std::optional<double> specificity_pct() const {
    if (negatives_total == 0) return std::nullopt;
    return 100.0 * (negatives_total - negatives_marked) / negatives_total;
  }
};

struct ConfusionRow {
  EventClass cls = EventClass::background;
  // Events for event-like classes; seconds for speech and background.
  double amount = 0.0;
  int detected_as_cough = 0;
  bool amount_is_seconds = false;
};

struct EvaluationReport {
  double threshold = kDefaultThreshold;
  std::vector<SubjectScore> per_subject;  // ordered by subject id
  SubjectScore pooled;                    // event-pooled counts over subjects
  std::optional<double> mean_sensitivity_pct;
  std::optional<double> std_sensitivity_pct;
  std::optional<double> mean_specificity_pct;
  std::optional<double> std_specificity_pct;
  std::vector<ConfusionRow> confusion;
};

// Score accumulation for one recording.
struct RecordingOutcome {
  EventMatchResult match;
  NegativeUnits negatives;
  std::vector<LabeledEvent> truth;
  double duration_s = 0.0;
};

inline RecordingOutcome score_recording(const std::vector<DetectionEvent>& detections,
                                        const std::vector<LabeledEvent>& truth, double duration_s) {
  RecordingOutcome out;
  out.match = match_events(detections, truth);
  out.negatives = count_negative_units(out.match, truth, duration_s);
  out.truth = truth;
  out.duration_s = duration_s;
  return out;
}

inline std::vector<ConfusionRow> confusion_table(const std::vector<RecordingOutcome>& outcomes) {
  std::map<EventClass, ConfusionRow> rows;
  for (EventClass c : {EventClass::cough, EventClass::forced_expiration, EventClass::throat_clearing,
                       EventClass::laugh, EventClass::speech, EventClass::background}) {
    ConfusionRow r;
    r.cls = c;
    r.amount_is_seconds = c == EventClass::speech || c == EventClass::background;
    rows[c] = r;
  }
  for (const auto& o : outcomes) {
    double annotated = 0.0;
    for (const auto& e : o.truth) {
      if (e.cls == EventClass::speech)
        rows[EventClass::speech].amount += e.duration_s();
      else if (e.cls != EventClass::background)
        rows[e.cls].amount += 1.0;
      annotated += e.duration_s();
    }
    rows[EventClass::background].amount += std::max(0.0, o.duration_s - annotated);
    rows[EventClass::cough].detected_as_cough += o.match.true_positives;
    for (const auto& [d, cls] : o.match.false_alarm_events) ++rows[cls].detected_as_cough;
  }
  std::vector<ConfusionRow> out;
  for (EventClass c : {EventClass::cough, EventClass::forced_expiration, EventClass::throat_clearing,
                       EventClass::speech, EventClass::laugh, EventClass::background})
    out.push_back(rows[c]);
  return out;
}

// Aggregates per-recording outcomes grouped per subject into a report.
inline EvaluationReport assemble_report(
    const std::vector<std::pair<std::string, RecordingOutcome>>& outcomes, double threshold) {
  EvaluationReport report;
  report.threshold = threshold;
  std::map<std::string, SubjectScore> by_subject;
  std::vector<RecordingOutcome> all;
  for (const auto& [subject, o] : outcomes) {
    auto& s = by_subject[subject];
    s.subject_id = subject;
    s.true_positives += o.match.true_positives;
    s.misses += o.match.misses;
    s.false_alarms += o.match.false_alarms;
    s.negatives_total += o.negatives.total;
    s.negatives_marked += o.negatives.marked;
    all.push_back(o);
  }
  for (const auto& [id, s] : by_subject) {
    report.per_subject.push_back(s);
    report.pooled.true_positives += s.true_positives;
    report.pooled.misses += s.misses;
    report.pooled.false_alarms += s.false_alarms;
    report.pooled.negatives_total += s.negatives_total;
    report.pooled.negatives_marked += s.negatives_marked;
  }
  report.pooled.subject_id = "pooled";

  auto stats = [](const std::vector<double>& v) -> std::pair<std::optional<double>, std::optional<double>> {
    if (v.empty()) return {std::nullopt, std::nullopt};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return {mean, std::sqrt(var / static_cast<double>(v.size()))};
  };
  std::vector<double> sens, spec;
  for (const auto& s : report.per_subject) {
    if (auto v = s.sensitivity_pct()) sens.push_back(*v);
    if (auto v = s.specificity_pct()) spec.push_back(*v);
  }
  std::tie(report.mean_sensitivity_pct, report.std_sensitivity_pct) = stats(sens);
  std::tie(report.mean_specificity_pct, report.std_specificity_pct) = stats(spec);
  report.confusion = confusion_table(all);
  return report;
}

inline nlohmann::json report_to_json(const EvaluationReport& r) {
  auto subject_json = [](const SubjectScore& s) {
    nlohmann::json o;
    o["subject"] = s.subject_id;
    o["true_positives"] = s.true_positives;
    o["misses"] = s.misses;
    o["false_alarms"] = s.false_alarms;
    o["negatives_total"] = s.negatives_total;
    o["negatives_marked"] = s.negatives_marked;
    if (auto v = s.sensitivity_pct()) o["sensitivity_pct"] = *v;
    if (auto v = s.specificity_pct()) o["specificity_pct"] = *v;
    return o;
  };
  nlohmann::json j;
  j["format"] = "coughdet-report";
  j["threshold"] = r.threshold;
  j["pooled"] = subject_json(r.pooled);
  auto subj = nlohmann::json::array();
  for (const auto& s : r.per_subject) subj.push_back(subject_json(s));
  j["per_subject"] = subj;
  if (r.mean_sensitivity_pct) j["mean_sensitivity_pct"] = *r.mean_sensitivity_pct;
  if (r.std_sensitivity_pct) j["std_sensitivity_pct"] = *r.std_sensitivity_pct;
  if (r.mean_specificity_pct) j["mean_specificity_pct"] = *r.mean_specificity_pct;
  if (r.std_specificity_pct) j["std_specificity_pct"] = *r.std_specificity_pct;
  auto conf = nlohmann::json::array();
  for (const auto& row : r.confusion) {
    nlohmann::json o;
    o["class"] = to_string(row.cls);
    o["amount"] = row.amount;
    o["unit"] = row.amount_is_seconds ? "seconds" : "events";
    o["detected_as_cough"] = row.detected_as_cough;
    conf.push_back(o);
  }
  j["confusion"] = conf;
  return j;
}

// Human-readable layout: one row per subject, then average, standard
// deviation and pooled rows, followed by the confusion table.
inline std::string report_to_text(const EvaluationReport& r) {
  std::string out;
  char buf[256];
  auto fmt_opt = [](std::optional<double> v, char* b, std::size_t n) {
    if (v)
      std::snprintf(b, n, "%8.1f", *v);
    else
      std::snprintf(b, n, "%8s", "n/a");
  };
  std::snprintf(buf, sizeof(buf), "%-12s %9s %9s %5s %5s %5s\n", "subject", "sens(%)", "spec(%)", "TP",
                "miss", "FA");
  out += buf;
  char s1[16], s2[16];
  for (const auto& s : r.per_subject) {
    fmt_opt(s.sensitivity_pct(), s1, sizeof(s1));
    fmt_opt(s.specificity_pct(), s2, sizeof(s2));
    std::snprintf(buf, sizeof(buf), "%-12s %9s %9s %5d %5d %5d\n", s.subject_id.c_str(), s1, s2,
                  s.true_positives, s.misses, s.false_alarms);
    out += buf;
  }
  fmt_opt(r.mean_sensitivity_pct, s1, sizeof(s1));
  fmt_opt(r.mean_specificity_pct, s2, sizeof(s2));
  std::snprintf(buf, sizeof(buf), "%-12s %9s %9s\n", "Avg.", s1, s2);
  out += buf;
  fmt_opt(r.std_sensitivity_pct, s1, sizeof(s1));
  fmt_opt(r.std_specificity_pct, s2, sizeof(s2));
  std::snprintf(buf, sizeof(buf), "%-12s %9s %9s\n", "STDV", s1, s2);
  out += buf;
  fmt_opt(r.pooled.sensitivity_pct(), s1, sizeof(s1));
  fmt_opt(r.pooled.specificity_pct(), s2, sizeof(s2));
  std::snprintf(buf, sizeof(buf), "%-12s %9s %9s %5d %5d %5d\n", "pooled", s1, s2, r.pooled.true_positives,
                r.pooled.misses, r.pooled.false_alarms);
  out += buf;

  out += "\n";
  std::snprintf(buf, sizeof(buf), "%-18s %12s %18s\n", "class", "amount", "detected as cough");
  out += buf;
  for (const auto& row : r.confusion) {
    if (row.amount_is_seconds)
      std::snprintf(buf, sizeof(buf), "%-18s %9.0f %-3s %18d\n", to_string(row.cls), row.amount, "sec",
                    row.detected_as_cough);
    else
      std::snprintf(buf, sizeof(buf), "%-18s %9.0f %-3s %18d\n", to_string(row.cls), row.amount, "",
                    row.detected_as_cough);
    out += buf;
  }
  return out;
}

}  // namespace coughdet
