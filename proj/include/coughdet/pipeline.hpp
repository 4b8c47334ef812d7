// Batch workflows: per-fold feature selection and training, leave-one-
// subject-out cross-validation and threshold sweeps.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "coughdet/evaluation.hpp"
#include "coughdet/features/matrix_io.hpp"
#include "coughdet/mlp_io.hpp"
#include "coughdet/selection.hpp"

namespace coughdet {

// One recording's evaluation payload: extracted features plus the truth
// needed for scoring.
struct CorpusItem {
  FeatureMatrix features;
  std::vector<LabeledEvent> events;
  double duration_s = 0.0;
  std::string subject_id;
};

struct PipelineConfig {
  int selection_size = kDefaultSelectionSize;
  int n_bins = kDefaultBins;
  TrainConfig train;
  double threshold = kDefaultThreshold;
  int jobs = 1;
};

struct FoldModels {
  StageModel activity;
  StageModel explosive;
};

namespace detail {

// Rows of the task's (balanced) training population gathered into a dense
// matrix so the selection and the network see identical data.
struct TaskRows {
  std::vector<float> x;  // row-major, n x n_cols
  std::vector<double> y;
  std::size_t n = 0;
  std::size_t n_cols = 0;
};

inline TaskRows gather_task_rows(const std::vector<const FeatureMatrix*>& matrices, DetectionTask task,
                                 const TrainConfig& cfg) {
  struct Ref {
    std::uint32_t matrix, frame;
  };
  std::vector<Ref> pos, neg;
  for (std::size_t mi = 0; mi < matrices.size(); ++mi) {
    const FeatureMatrix& m = *matrices[mi];
    for (std::size_t k = 0; k < m.n_frames; ++k) {
      const int sign = task_frame_sign(task, m.labels[k], m.explosive[k] != 0);
      if (sign > 0)
        pos.push_back({static_cast<std::uint32_t>(mi), static_cast<std::uint32_t>(k)});
      else if (sign == 0)
        neg.push_back({static_cast<std::uint32_t>(mi), static_cast<std::uint32_t>(k)});
    }
  }
  if (pos.empty())
    throw ValidationError(std::string("pipeline: no positive frames for task ") + to_string(task));
  if (neg.empty())
    throw ValidationError(std::string("pipeline: no negative frames for task ") + to_string(task));
  const std::size_t max_neg =
      static_cast<std::size_t>(std::llround(cfg.balance_ratio * static_cast<double>(pos.size())));
  if (neg.size() > max_neg && max_neg > 0) {
    std::mt19937_64 rng(derive_seed(cfg.seed, std::string("negsub/") + to_string(task)));
    std::shuffle(neg.begin(), neg.end(), rng);
    neg.resize(max_neg);
  }
  TaskRows rows;
  rows.n_cols = matrices.front()->n_cols;
  rows.n = pos.size() + neg.size();
  rows.x.resize(rows.n * rows.n_cols);
  rows.y.resize(rows.n);
  std::size_t r = 0;
  auto emit = [&](const Ref& ref, double target) {
    const FeatureMatrix& m = *matrices[ref.matrix];
    std::memcpy(&rows.x[r * rows.n_cols], &m.values[static_cast<std::size_t>(ref.frame) * m.n_cols],
                sizeof(float) * rows.n_cols);
    rows.y[r++] = target;
  };
  for (const auto& ref : pos) emit(ref, 1.0);
  for (const auto& ref : neg) emit(ref, 0.0);
  return rows;
}

}  // namespace detail

// Selection for one subtask: equal-frequency discretization of every column
// over the task's training rows, then greedy MI selection against the
// task's binary label.
inline SelectedFeatureSet select_features(const detail::TaskRows& rows, const FeatureCatalog& catalog,
                                          DetectionTask task, int k, int n_bins) {
  std::vector<FeatureColumnView> columns(rows.n_cols);
  for (std::size_t c = 0; c < rows.n_cols; ++c)
    columns[c] = {rows.x.data() + c, rows.n_cols, rows.n};
  const auto d = discretize(columns, n_bins);
  std::vector<std::uint8_t> labels(rows.n);
  for (std::size_t i = 0; i < rows.n; ++i) labels[i] = rows.y[i] > 0.5 ? 1 : 0;
  auto sel = greedy_select(d, labels, 2, static_cast<std::size_t>(k));
  sel.task = to_string(task);
  sel.catalog_hash = catalog.hash();
  for (std::size_t i : sel.indices) sel.names.push_back(catalog.entries[i].name);
  return sel;
}

// Selection + training for one subtask on the given training matrices.
inline StageModel train_stage(const std::vector<const FeatureMatrix*>& matrices, const FeatureCatalog& catalog,
                              DetectionTask task, const PipelineConfig& cfg) {
  const auto rows = detail::gather_task_rows(matrices, task, cfg.train);
  auto selection = select_features(rows, catalog, task, cfg.selection_size, cfg.n_bins);

  TrainingSet set;
  set.dim = static_cast<int>(selection.indices.size());
  set.n = rows.n;
  set.x.resize(rows.n * selection.indices.size());
  set.y = rows.y;
  for (std::size_t i = 0; i < rows.n; ++i)
    for (std::size_t j = 0; j < selection.indices.size(); ++j)
      set.x[i * selection.indices.size() + j] = rows.x[i * rows.n_cols + selection.indices[j]];

  StageModel stage;
  stage.mlp = train_mlp(set, cfg.train, to_string(task), selection.catalog_hash);
  stage.selection = std::move(selection);
  return stage;
}

inline FoldModels train_both_stages(const std::vector<const FeatureMatrix*>& matrices,
                                    const FeatureCatalog& catalog, const PipelineConfig& cfg) {
  FoldModels fold;
  fold.activity = train_stage(matrices, catalog, DetectionTask::activity, cfg);
  fold.explosive = train_stage(matrices, catalog, DetectionTask::explosive, cfg);
  return fold;
}

struct LosoFolds {
  std::vector<std::string> subjects;  // sorted
  std::map<std::string, FoldModels> models;
  // Smoothed fused posterior track per corpus item, computed with the
  // held-out subject's fold models.
  std::vector<PosteriorTrack> tracks;
};

// Trains one fold per subject (leaving that subject out) and computes the
// fused posterior tracks of every held-out recording. Folds run in parallel
// up to cfg.jobs; per-fold work is seeded by subject so results do not
// depend on scheduling.
inline LosoFolds train_loso_folds(const std::vector<CorpusItem>& items, const FeatureCatalog& catalog,
                                  const PipelineConfig& cfg) {
  LosoFolds folds;
  for (const auto& it : items)
    if (std::find(folds.subjects.begin(), folds.subjects.end(), it.subject_id) == folds.subjects.end())
      folds.subjects.push_back(it.subject_id);
  std::sort(folds.subjects.begin(), folds.subjects.end());
  if (folds.subjects.size() < 2)
    throw ValidationError("leave-one-subject-out requires at least 2 subjects, got " +
                          std::to_string(folds.subjects.size()));

  std::vector<FoldModels> trained(folds.subjects.size());
  parallel_for(folds.subjects.size(), cfg.jobs, [&](std::size_t si) {
    const std::string& held_out = folds.subjects[si];
    std::vector<const FeatureMatrix*> training;
    for (const auto& it : items)
      if (it.subject_id != held_out) training.push_back(&it.features);
    PipelineConfig fold_cfg = cfg;
    fold_cfg.train.seed = derive_seed(cfg.train.seed, "fold/" + held_out);
    trained[si] = train_both_stages(training, catalog, fold_cfg);
  });
  for (std::size_t si = 0; si < folds.subjects.size(); ++si)
    folds.models[folds.subjects[si]] = std::move(trained[si]);

  folds.tracks.resize(items.size());
  parallel_for(items.size(), cfg.jobs, [&](std::size_t i) {
    const auto& fold = folds.models.at(items[i].subject_id);
    folds.tracks[i] = fused_track(items[i].features, fold.activity, fold.explosive);
  });
  return folds;
}

inline EvaluationReport evaluate_at_threshold(const std::vector<CorpusItem>& items, const LosoFolds& folds,
                                              double threshold) {
  std::vector<std::pair<std::string, RecordingOutcome>> outcomes;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto detections = segment_events(folds.tracks[i], threshold);
    outcomes.emplace_back(items[i].subject_id, score_recording(detections, items[i].events, items[i].duration_s));
  }
  return assemble_report(outcomes, threshold);
}

inline EvaluationReport loso_cross_validate(const std::vector<CorpusItem>& items, const FeatureCatalog& catalog,
                                            const PipelineConfig& cfg) {
  const auto folds = train_loso_folds(items, catalog, cfg);
  return evaluate_at_threshold(items, folds, cfg.threshold);
}

struct SweepPoint {
  double threshold = 0.0;
  std::optional<double> sensitivity_pct;  // pooled over events
  std::optional<double> specificity_pct;
};

inline std::vector<SweepPoint> threshold_sweep(const std::vector<CorpusItem>& items,
                                               const FeatureCatalog& catalog, const PipelineConfig& cfg,
                                               const std::vector<double>& thresholds,
                                               std::vector<EvaluationReport>* reports = nullptr) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] < 1.0))
      throw ValidationError("threshold_sweep: thresholds must lie in (0, 1)");
    if (i > 0 && thresholds[i] <= thresholds[i - 1])
      throw ValidationError("threshold_sweep: thresholds must be sorted ascending");
  }
  const auto folds = train_loso_folds(items, catalog, cfg);
  std::vector<SweepPoint> out;
  for (double t : thresholds) {
    auto report = evaluate_at_threshold(items, folds, t);
    SweepPoint p;
    p.threshold = t;
    p.sensitivity_pct = report.pooled.sensitivity_pct();
    p.specificity_pct = report.pooled.specificity_pct();
    out.push_back(p);
    if (reports != nullptr) reports->push_back(std::move(report));
  }
  return out;
}

inline void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write sweep CSV: " + path);
  out << "threshold,sensitivity,specificity\n";
  char buf[96];
  for (const auto& p : points) {
    auto value = [](const std::optional<double>& v) { return v ? *v : std::nan(""); };
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", p.threshold, value(p.sensitivity_pct),
                  value(p.specificity_pct));
    out << buf;
  }
}

}  // namespace coughdet
