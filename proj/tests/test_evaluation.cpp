#include <catch_amalgamated.hpp>

#include <random>

#include "coughdet/pipeline.hpp"
#include "coughdet/synth.hpp"

using namespace coughdet;

namespace {

DetectionEvent det(double onset, double offset) { return {onset, offset, 0.9}; }

LabeledEvent truth(double start, double end, EventClass cls) { return {start, end, cls}; }

}  // namespace

TEST_CASE("an overlapping detection is a true positive") {
  const auto r = match_events({det(1.00, 1.15)}, {truth(0.98, 1.40, EventClass::cough)});
  REQUIRE(r.true_positives == 1);
  REQUIRE(r.misses == 0);
  REQUIRE(r.false_alarms == 0);
}

TEST_CASE("two detections inside one cough give one TP and one false alarm") {
  const auto r = match_events({det(1.00, 1.10), det(1.20, 1.30)}, {truth(0.98, 1.40, EventClass::cough)});
  REQUIRE(r.true_positives == 1);
  REQUIRE(r.false_alarms == 1);
  REQUIRE(r.false_alarm_events[0].second == EventClass::cough);  // midpoint inside the cough
}

TEST_CASE("a non-overlapping detection within 100 ms of the onset matches") {
  const auto near = match_events({det(0.92, 0.98)}, {truth(1.00, 1.40, EventClass::cough)});
  REQUIRE(near.true_positives == 1);
  const auto far = match_events({det(0.80, 0.88)}, {truth(1.00, 1.40, EventClass::cough)});
  REQUIRE(far.true_positives == 0);
  REQUIRE(far.misses == 1);
  REQUIRE(far.false_alarms == 1);
}

TEST_CASE("false alarms are attributed to the class covering their midpoint") {
  const auto r = match_events({det(2.00, 2.10)},
                              {truth(1.90, 2.50, EventClass::laugh), truth(3.0, 3.3, EventClass::cough)});
  REQUIRE(r.false_alarms == 1);
  REQUIRE(r.false_alarm_events[0].second == EventClass::laugh);
  REQUIRE(r.misses == 1);

  const auto bg = match_events({det(0.10, 0.20)}, {truth(3.0, 3.3, EventClass::cough)});
  REQUIRE(bg.false_alarm_events[0].second == EventClass::background);
}

TEST_CASE("TP plus misses equals the annotated cough count") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<LabeledEvent> coughs;
    double t = 1.0;
    const int n = 5 + static_cast<int>(u(rng)) % 10;
    for (int i = 0; i < n; ++i) {
      coughs.push_back(truth(t, t + 0.3, EventClass::cough));
      t += 1.0;
    }
    std::vector<DetectionEvent> detections;
    for (int i = 0; i < 8; ++i) {
      const double onset = u(rng);
      detections.push_back(det(onset, onset + 0.1));
    }
    const auto r = match_events(detections, coughs);
    REQUIRE(r.true_positives + r.misses == n);
    REQUIRE(r.true_positives + r.false_alarms == static_cast<int>(detections.size()));
  }
}

TEST_CASE("matching is invariant to a uniform time shift") {
  std::vector<DetectionEvent> detections = {det(1.0, 1.1), det(5.0, 5.2), det(9.3, 9.4)};
  std::vector<LabeledEvent> events = {truth(1.0, 1.4, EventClass::cough), truth(5.05, 5.5, EventClass::cough),
                                      truth(7.0, 7.4, EventClass::cough)};
  const auto base = match_events(detections, events);
  for (auto& d : detections) {
    d.onset_s += 3.5;
    d.offset_s += 3.5;
  }
  for (auto& e : events) {
    e.start_s += 3.5;
    e.end_s += 3.5;
  }
  const auto shifted = match_events(detections, events);
  REQUIRE(base.true_positives == shifted.true_positives);
  REQUIRE(base.misses == shifted.misses);
  REQUIRE(base.false_alarms == shifted.false_alarms);
}

TEST_CASE("matching does not depend on detection list order") {
  std::vector<DetectionEvent> detections = {det(5.0, 5.2), det(1.0, 1.1), det(3.0, 3.1)};
  std::vector<LabeledEvent> events = {truth(1.0, 1.4, EventClass::cough), truth(4.95, 5.5, EventClass::cough)};
  const auto a = match_events(detections, events);
  std::reverse(detections.begin(), detections.end());
  const auto b = match_events(detections, events);
  REQUIRE(a.true_positives == b.true_positives);
  REQUIRE(a.false_alarms == b.false_alarms);
}

TEST_CASE("scoring arithmetic: 10 coughs, 2 missed, no false alarms") {
  std::vector<LabeledEvent> events;
  std::vector<DetectionEvent> detections;
  for (int i = 0; i < 10; ++i) {
    events.push_back(truth(i * 2.0 + 1.0, i * 2.0 + 1.3, EventClass::cough));
    if (i >= 2) detections.push_back(det(i * 2.0 + 1.0, i * 2.0 + 1.2));
  }
  const auto outcome = score_recording(detections, events, 21.0);
  SubjectScore s;
  s.true_positives = outcome.match.true_positives;
  s.misses = outcome.match.misses;
  s.negatives_total = outcome.negatives.total;
  s.negatives_marked = outcome.negatives.marked;
  REQUIRE(*s.sensitivity_pct() == Catch::Approx(80.0));
  REQUIRE(*s.specificity_pct() == Catch::Approx(100.0));
}

TEST_CASE("zero annotated coughs leave sensitivity absent, not zero") {
  const auto outcome = score_recording({}, {truth(1.0, 2.0, EventClass::laugh)}, 5.0);
  SubjectScore s;
  s.true_positives = outcome.match.true_positives;
  s.misses = outcome.match.misses;
  s.negatives_total = outcome.negatives.total;
  REQUIRE_FALSE(s.sensitivity_pct().has_value());
  REQUIRE(s.specificity_pct().has_value());
}

TEST_CASE("negative units: events count once, speech and background chop into seconds") {
  std::vector<LabeledEvent> events = {
      truth(1.0, 1.5, EventClass::throat_clearing),  // 1 unit
      truth(3.0, 23.0, EventClass::speech),          // 20 units
  };
  // background: [0,1) -> 1, [1.5,3) -> 2, [23,25) -> 2
  EventMatchResult no_fa;
  const auto units = count_negative_units(no_fa, events, 25.0);
  REQUIRE(units.total == 1 + 20 + 1 + 2 + 2);
  REQUIRE(units.marked == 0);

  EventMatchResult one_fa;
  one_fa.false_alarm_events.emplace_back(det(10.0, 10.2), EventClass::speech);
  const auto marked = count_negative_units(one_fa, events, 25.0);
  REQUIRE(marked.marked == 1);
}

TEST_CASE("confusion table reports zero detections without false alarms") {
  std::vector<LabeledEvent> events = {truth(1.0, 1.3, EventClass::cough), truth(2.0, 2.8, EventClass::laugh),
                                      truth(4.0, 24.0, EventClass::speech)};
  const auto outcome = score_recording({det(1.0, 1.1)}, events, 30.0);
  const auto rows = confusion_table({outcome});
  for (const auto& row : rows) {
    switch (row.cls) {
      case EventClass::cough:
        REQUIRE(row.amount == 1.0);
        REQUIRE(row.detected_as_cough == 1);
        break;
      case EventClass::laugh:
        REQUIRE(row.amount == 1.0);
        REQUIRE(row.detected_as_cough == 0);
        break;
      case EventClass::speech:
        REQUIRE(row.amount_is_seconds);
        REQUIRE(row.amount == Catch::Approx(20.0));
        REQUIRE(row.detected_as_cough == 0);
        break;
      case EventClass::background:
        REQUIRE(row.amount_is_seconds);
        REQUIRE(row.amount == Catch::Approx(30.0 - 21.1));
        break;
      default:
        REQUIRE(row.detected_as_cough == 0);
    }
  }
}

// ------------------------------------------------- LOSO integration --------

namespace {

PipelineConfig fast_config(std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.selection_size = 25;
  cfg.train.max_epochs = 60;
  cfg.train.patience = 10;
  cfg.train.seed = seed;
  cfg.jobs = 2;
  return cfg;
}

const std::vector<CorpusItem>& tiny_corpus() {
  static const std::vector<CorpusItem> items = [] {
    const auto corpus = generate_synthetic_corpus(99, 2, 1);
    std::vector<CorpusItem> out;
    for (const auto& rec : corpus) {
      CorpusItem item;
      item.features = extract_features(rec, {ChannelRole::audio});
      item.events = rec.events;
      item.duration_s = rec.duration_s();
      item.subject_id = rec.subject_id;
      out.push_back(std::move(item));
    }
    return out;
  }();
  return items;
}

}  // namespace

TEST_CASE("LOSO refuses a single subject") {
  std::vector<CorpusItem> one;
  one.push_back({tiny_corpus()[0].features, tiny_corpus()[0].events, tiny_corpus()[0].duration_s, "S01"});
  const auto catalog = build_catalog({ChannelRole::audio});
  REQUIRE_THROWS_AS(loso_cross_validate(one, catalog, fast_config(1)), ValidationError);
}

TEST_CASE("LOSO trains one fold per subject, excluding the held-out subject") {
  const auto& items = tiny_corpus();
  const auto catalog = build_catalog({ChannelRole::audio});
  const auto cfg = fast_config(5);
  const auto folds = train_loso_folds(items, catalog, cfg);
  REQUIRE(folds.subjects == std::vector<std::string>{"S01", "S02"});

  // Reproduce S01's fold by hand: trained only on S02's recordings with the
  // fold-derived seed.
  std::vector<const FeatureMatrix*> training;
  for (const auto& it : items)
    if (it.subject_id != "S01") training.push_back(&it.features);
  PipelineConfig fold_cfg = cfg;
  fold_cfg.train.seed = derive_seed(cfg.train.seed, "fold/S01");
  const auto expected = train_both_stages(training, catalog, fold_cfg);
  REQUIRE(stage_model_bytes(folds.models.at("S01").activity) == stage_model_bytes(expected.activity));
  REQUIRE(stage_model_bytes(folds.models.at("S01").explosive) == stage_model_bytes(expected.explosive));
}

TEST_CASE("LOSO evaluation is deterministic and consistent with a sweep at one threshold") {
  const auto& items = tiny_corpus();
  const auto catalog = build_catalog({ChannelRole::audio});
  const auto cfg = fast_config(7);

  const auto a = loso_cross_validate(items, catalog, cfg);
  const auto b = loso_cross_validate(items, catalog, cfg);
  REQUIRE(report_to_json(a).dump() == report_to_json(b).dump());
  REQUIRE(a.per_subject.size() == 2);

  std::vector<EvaluationReport> reports;
  const auto points = threshold_sweep(items, catalog, cfg, {0.5}, &reports);
  REQUIRE(points.size() == 1);
  REQUIRE(report_to_json(reports[0]).dump() == report_to_json(a).dump());
}

TEST_CASE("detection counts survive a 0.5x gain change end to end") {
  const auto& items = tiny_corpus();
  const auto catalog = build_catalog({ChannelRole::audio});
  const auto folds = train_loso_folds(items, catalog, fast_config(11));

  auto corpus = generate_synthetic_corpus(99, 2, 1);
  auto& rec = corpus[0];
  const auto& fold = folds.models.at(rec.subject_id);
  const auto base = detect(rec, fold.activity, fold.explosive, 0.5);
  for (auto& ch : rec.channels)
    for (auto& v : ch.samples) v *= 0.5;
  const auto scaled = detect(rec, fold.activity, fold.explosive, 0.5);
  REQUIRE(base.size() == scaled.size());
}
