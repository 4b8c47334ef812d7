// Single-hidden-layer networks (32 tanh units, logistic output) for the two
// binary subtasks, trained with mini-batch gradient descent plus momentum
// and early stopping.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "coughdet/features/extract.hpp"
#include "coughdet/selection.hpp"

namespace coughdet {

inline constexpr int kHiddenUnits = 32;

// Stage 1 separates sound events from background and speech; stage 2
// separates explosive cough phases from every other non-background sound.
enum class DetectionTask { activity, explosive };

inline const char* to_string(DetectionTask t) {
  return t == DetectionTask::activity ? "activity" : "explosive";
}

inline DetectionTask task_from_string(const std::string& s) {
  if (s == "activity") return DetectionTask::activity;
  if (s == "explosive") return DetectionTask::explosive;
  throw ValidationError("unknown task: '" + s + "'");
}

struct MlpModel {
  int input_dim = 0;
  std::vector<double> w1;  // kHiddenUnits x input_dim, row-major
  std::vector<double> b1;  // kHiddenUnits
  std::vector<double> w2;  // kHiddenUnits
  double b2 = 0.0;
  std::vector<double> norm_mean;  // input_dim
  std::vector<double> norm_std;   // input_dim, > 0
  std::string task;
  std::string catalog_hash;
};

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int max_epochs = 500;
  int batch_size = 128;
  int patience = 20;
  double min_rel_improvement = 1e-3;
  double balance_ratio = 3.0;  // negatives per positive after subsampling
  double val_fraction = 0.1;
  std::uint64_t seed = 0;
};

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double mlp_forward(const MlpModel& m, const double* x) {
  double z2 = m.b2;
  for (int h = 0; h < kHiddenUnits; ++h) {
    const double* w = &m.w1[static_cast<std::size_t>(h) * m.input_dim];
    double z1 = m.b1[h];
    for (int i = 0; i < m.input_dim; ++i) z1 += w[i] * x[i];
    z2 += m.w2[h] * std::tanh(z1);
  }
  return logistic(z2);
}

// Forward pass with the stored input normalization applied.
inline double mlp_forward(const MlpModel& m, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != m.input_dim)
    throw ValidationError("mlp_forward: input has " + std::to_string(x.size()) + " dims, model expects " +
                          std::to_string(m.input_dim));
  std::vector<double> xn(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xn[i] = (x[i] - m.norm_mean[i]) / m.norm_std[i];
  return mlp_forward(m, xn.data());
}

struct MlpGradients {
  std::vector<double> w1, b1, w2;
  double b2 = 0.0;
};

// Mean binary cross-entropy and exact gradients over a batch of
// already-normalized inputs (row-major n x input_dim).
inline double mlp_loss_and_gradient(const MlpModel& m, const std::vector<double>& x,
                                    const std::vector<double>& targets, MlpGradients& g) {
  const std::size_t n = targets.size();
  if (n == 0) throw ValidationError("mlp_loss_and_gradient: empty batch");
  if (x.size() != n * static_cast<std::size_t>(m.input_dim))
    throw ValidationError("mlp_loss_and_gradient: batch shape mismatch");
  g.w1.assign(m.w1.size(), 0.0);
  g.b1.assign(m.b1.size(), 0.0);
  g.w2.assign(m.w2.size(), 0.0);
  g.b2 = 0.0;

  std::vector<double> hidden(kHiddenUnits);
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double* xs = &x[s * m.input_dim];
    double z2 = m.b2;
    for (int h = 0; h < kHiddenUnits; ++h) {
      const double* w = &m.w1[static_cast<std::size_t>(h) * m.input_dim];
      double z1 = m.b1[h];
      for (int i = 0; i < m.input_dim; ++i) z1 += w[i] * xs[i];
      hidden[h] = std::tanh(z1);
      z2 += m.w2[h] * hidden[h];
    }
    const double y = logistic(z2);
    const double t = targets[s];
    const double yc = std::clamp(y, 1e-12, 1.0 - 1e-12);
    loss -= inv_n * (t * std::log(yc) + (1.0 - t) * std::log(1.0 - yc));

    const double dz2 = (y - t) * inv_n;
    g.b2 += dz2;
    for (int h = 0; h < kHiddenUnits; ++h) {
      g.w2[h] += dz2 * hidden[h];
      const double dz1 = dz2 * m.w2[h] * (1.0 - hidden[h] * hidden[h]);
      g.b1[h] += dz1;
      double* gw = &g.w1[static_cast<std::size_t>(h) * m.input_dim];
      for (int i = 0; i < m.input_dim; ++i) gw[i] += dz1 * xs[i];
    }
  }
  return loss;
}

inline double mlp_loss(const MlpModel& m, const std::vector<double>& x, const std::vector<double>& targets) {
  const std::size_t n = targets.size();
  double loss = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double y = std::clamp(mlp_forward(m, &x[s * m.input_dim]), 1e-12, 1.0 - 1e-12);
    loss -= targets[s] * std::log(y) + (1.0 - targets[s]) * std::log(1.0 - y);
  }
  return loss / static_cast<double>(n);
}

namespace detail {

// Membership of each frame in the task's positive/negative populations.
// Frames outside both (stage-2 background) are skipped.
inline int task_frame_sign(DetectionTask task, EventClass label, bool explosive) {
  switch (task) {
    case DetectionTask::activity:
      return (label == EventClass::background || label == EventClass::speech) ? 0 : 1;
    case DetectionTask::explosive:
      if (explosive) return 1;
      return label == EventClass::background ? -1 : 0;
  }
  return -1;
}

}  // namespace detail

struct TrainingSet {
  std::vector<double> x;  // row-major, n x dim
  std::vector<double> y;
  std::size_t n = 0;
  int dim = 0;
};

// Gathers the selected columns of the task's frames, subsampling negatives
// to the configured balance ratio.
inline TrainingSet build_training_set(const std::vector<const FeatureMatrix*>& matrices,
                                      const SelectedFeatureSet& selection, DetectionTask task,
                                      const TrainConfig& cfg) {
  struct Ref {
    std::uint32_t matrix;
    std::uint32_t frame;
  };
  std::vector<Ref> pos, neg;
  for (std::size_t mi = 0; mi < matrices.size(); ++mi) {
    const FeatureMatrix& m = *matrices[mi];
    for (std::size_t k = 0; k < m.n_frames; ++k) {
      const int sign = detail::task_frame_sign(task, m.labels[k], m.explosive[k] != 0);
      if (sign > 0)
        pos.push_back({static_cast<std::uint32_t>(mi), static_cast<std::uint32_t>(k)});
      else if (sign == 0)
        neg.push_back({static_cast<std::uint32_t>(mi), static_cast<std::uint32_t>(k)});
    }
  }
  if (pos.empty())
    throw ValidationError(std::string("train: no positive frames for task ") + to_string(task));
  if (neg.empty())
    throw ValidationError(std::string("train: no negative frames for task ") + to_string(task));

  const std::size_t max_neg =
      static_cast<std::size_t>(std::llround(cfg.balance_ratio * static_cast<double>(pos.size())));
  if (neg.size() > max_neg && max_neg > 0) {
    std::mt19937_64 rng(derive_seed(cfg.seed, std::string("negsub/") + to_string(task)));
    std::shuffle(neg.begin(), neg.end(), rng);
    neg.resize(max_neg);
  }

  TrainingSet set;
  set.dim = static_cast<int>(selection.indices.size());
  set.n = pos.size() + neg.size();
  set.x.resize(set.n * selection.indices.size());
  set.y.resize(set.n);
  auto emit = [&](const Ref& r, double target, std::size_t row) {
    const FeatureMatrix& m = *matrices[r.matrix];
    double* dst = &set.x[row * selection.indices.size()];
    for (std::size_t j = 0; j < selection.indices.size(); ++j)
      dst[j] = m.at(r.frame, selection.indices[j]);
    set.y[row] = target;
  };
  std::size_t row = 0;
  for (const auto& r : pos) emit(r, 1.0, row++);
  for (const auto& r : neg) emit(r, 0.0, row++);
  return set;
}

struct TrainDiagnostics {
  int best_epoch = -1;
  int epochs_run = 0;
  double best_val_loss = 0.0;
};

// Trains on an explicit double matrix. Rows are shuffled, a validation split
// is held out for early stopping and the best-epoch weights are restored.
inline MlpModel train_mlp(const TrainingSet& set, const TrainConfig& cfg, const std::string& task,
                          const std::string& catalog_hash, TrainDiagnostics* diag = nullptr) {
  const int dim = set.dim;
  bool has_pos = false, has_neg = false;
  for (double t : set.y) (t > 0.5 ? has_pos : has_neg) = true;
  if (!has_pos) throw ValidationError("train: training set lacks positive examples");
  if (!has_neg) throw ValidationError("train: training set lacks negative examples");

  MlpModel m;
  m.input_dim = dim;
  m.task = task;
  m.catalog_hash = catalog_hash;
  m.norm_mean.assign(dim, 0.0);
  m.norm_std.assign(dim, 1.0);
  for (std::size_t s = 0; s < set.n; ++s)
    for (int i = 0; i < dim; ++i) m.norm_mean[i] += set.x[s * dim + i];
  for (int i = 0; i < dim; ++i) m.norm_mean[i] /= static_cast<double>(set.n);
  std::vector<double> var(dim, 0.0);
  for (std::size_t s = 0; s < set.n; ++s)
    for (int i = 0; i < dim; ++i) {
      const double d = set.x[s * dim + i] - m.norm_mean[i];
      var[i] += d * d;
    }
  for (int i = 0; i < dim; ++i) {
    const double sd = std::sqrt(var[i] / static_cast<double>(set.n));
    m.norm_std[i] = sd > 1e-12 ? sd : 1.0;  // degenerate features carry std 1
  }

  std::vector<double> xn(set.x.size());
  for (std::size_t s = 0; s < set.n; ++s)
    for (int i = 0; i < dim; ++i)
      xn[s * dim + i] = (set.x[s * dim + i] - m.norm_mean[i]) / m.norm_std[i];

  std::mt19937_64 rng(derive_seed(cfg.seed, "train/" + task));
  std::vector<std::size_t> order(set.n);
  for (std::size_t i = 0; i < set.n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t n_val = static_cast<std::size_t>(std::floor(cfg.val_fraction * static_cast<double>(set.n)));
  if (set.n >= 20 && n_val == 0) n_val = 1;
  const std::size_t n_train = set.n - n_val;
  if (n_train == 0) throw ValidationError("train: no training rows left after validation split");

  std::vector<double> x_train(n_train * dim), y_train(n_train);
  std::vector<double> x_val(n_val * dim), y_val(n_val);
  for (std::size_t i = 0; i < n_train; ++i) {
    std::memcpy(&x_train[i * dim], &xn[order[i] * dim], sizeof(double) * dim);
    y_train[i] = set.y[order[i]];
  }
  for (std::size_t i = 0; i < n_val; ++i) {
    std::memcpy(&x_val[i * dim], &xn[order[n_train + i] * dim], sizeof(double) * dim);
    y_val[i] = set.y[order[n_train + i]];
  }

  const double limit1 = std::sqrt(6.0 / (dim + kHiddenUnits));
  const double limit2 = std::sqrt(6.0 / (kHiddenUnits + 1));
  std::uniform_real_distribution<double> u1(-limit1, limit1), u2(-limit2, limit2);
  m.w1.resize(static_cast<std::size_t>(kHiddenUnits) * dim);
  m.b1.assign(kHiddenUnits, 0.0);
  m.w2.resize(kHiddenUnits);
  for (auto& w : m.w1) w = u1(rng);
  for (auto& w : m.w2) w = u2(rng);
  m.b2 = 0.0;

  MlpGradients grad;
  MlpGradients vel;
  vel.w1.assign(m.w1.size(), 0.0);
  vel.b1.assign(m.b1.size(), 0.0);
  vel.w2.assign(m.w2.size(), 0.0);
  vel.b2 = 0.0;

  MlpModel best = m;
  double best_val = std::numeric_limits<double>::infinity();
  bool have_best = false;
  int best_epoch = -1, epochs_run = 0, stale = 0;

  std::vector<std::size_t> batch_order(n_train);
  for (std::size_t i = 0; i < n_train; ++i) batch_order[i] = i;
  const std::size_t batch = std::max(1, cfg.batch_size);
  std::vector<double> bx(batch * dim), by(batch);

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(batch_order.begin(), batch_order.end(), rng);
    for (std::size_t off = 0; off < n_train; off += batch) {
      const std::size_t bn = std::min(batch, n_train - off);
      for (std::size_t i = 0; i < bn; ++i) {
        std::memcpy(&bx[i * dim], &x_train[batch_order[off + i] * dim], sizeof(double) * dim);
        by[i] = y_train[batch_order[off + i]];
      }
      bx.resize(bn * dim);
      by.resize(bn);
      mlp_loss_and_gradient(m, bx, by, grad);
      bx.resize(batch * dim);
      by.resize(batch);

      for (std::size_t i = 0; i < m.w1.size(); ++i) {
        vel.w1[i] = cfg.momentum * vel.w1[i] - cfg.learning_rate * grad.w1[i];
        m.w1[i] += vel.w1[i];
      }
      for (int i = 0; i < kHiddenUnits; ++i) {
        vel.b1[i] = cfg.momentum * vel.b1[i] - cfg.learning_rate * grad.b1[i];
        m.b1[i] += vel.b1[i];
        vel.w2[i] = cfg.momentum * vel.w2[i] - cfg.learning_rate * grad.w2[i];
        m.w2[i] += vel.w2[i];
      }
      vel.b2 = cfg.momentum * vel.b2 - cfg.learning_rate * grad.b2;
      m.b2 += vel.b2;
    }

    epochs_run = epoch + 1;
    const double val = n_val > 0 ? mlp_loss(m, x_val, y_val) : mlp_loss(m, x_train, y_train);
    if (!have_best || val < best_val * (1.0 - cfg.min_rel_improvement)) {
      best_val = val;
      best = m;
      have_best = true;
      best_epoch = epoch;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  if (diag != nullptr) *diag = {best_epoch, epochs_run, best_val};
  return best;
}

inline MlpModel train(const std::vector<const FeatureMatrix*>& matrices, const SelectedFeatureSet& selection,
                      DetectionTask task, const TrainConfig& cfg) {
  if (matrices.empty()) throw ValidationError("train: no feature matrices");
  for (const auto* m : matrices)
    if (m->catalog_hash != selection.catalog_hash)
      throw ConfigError("train: feature catalog hash " + m->catalog_hash +
                        " does not match selection catalog hash " + selection.catalog_hash);
  const auto set = build_training_set(matrices, selection, task, cfg);
  return train_mlp(set, cfg, to_string(task), selection.catalog_hash);
}

}  // namespace coughdet
