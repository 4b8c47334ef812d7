// coughdet: command-line front end for the cough-detection pipeline.
// Subcommands mirror the pipeline stages so every intermediate artifact is
// inspectable: synth, extract, select, train, detect, evaluate, sweep.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "coughdet/audio_io.hpp"
#include "coughdet/detector.hpp"
#include "coughdet/pipeline.hpp"
#include "coughdet/synth.hpp"

namespace fs = std::filesystem;
using namespace coughdet;

namespace {

std::vector<ChannelRole> parse_roles(const std::string& csv) {
  std::vector<ChannelRole> roles;
  std::string cur;
  std::istringstream in(csv);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) roles.push_back(channel_role_from_string(cur));
  }
  if (roles.empty()) throw ValidationError("no channel roles given");
  return roles;
}

std::vector<double> parse_thresholds(const std::string& s) {
  std::vector<double> out;
  const auto colon = s.find(':');
  if (colon != std::string::npos) {
    double lo, hi, step;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
      throw ValidationError("bad threshold range '" + s + "', expected lo:hi:step");
    for (double t = lo; t <= hi + 1e-12; t += step) out.push_back(t);
  } else {
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  }
  for (double t : out)
    if (!(t > 0.0 && t < 1.0)) throw ValidationError("thresholds must lie in (0, 1)");
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

// Resolved configuration (defaults included) goes to a sidecar next to the
// outputs; re-running with it as --config reproduces the run.
void write_sidecar(const CLI::App* cmd, const std::string& out_dir) {
  ensure_dir(out_dir);
  const std::string path = (fs::path(out_dir) / (cmd->get_name() + ".config")).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write sidecar config: " + path);
  out << cmd->config_to_str(true, true);
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

struct TrainFlags {
  PipelineConfig pipeline;

  void attach(CLI::App* cmd) {
    cmd->add_option("--k", pipeline.selection_size, "Features to select per subtask")
        ->default_val(kDefaultSelectionSize)
        ->check(CLI::Range(1, 100000));
    cmd->add_option("--bins", pipeline.n_bins, "Discretization bins for mutual information")
        ->default_val(kDefaultBins)
        ->check(CLI::Range(2, 255));
    cmd->add_option("--lr", pipeline.train.learning_rate, "Learning rate")->default_val(0.01);
    cmd->add_option("--momentum", pipeline.train.momentum, "Momentum")->default_val(0.9);
    cmd->add_option("--epochs", pipeline.train.max_epochs, "Maximum training epochs")->default_val(500);
    cmd->add_option("--batch", pipeline.train.batch_size, "Mini-batch size")->default_val(128);
    cmd->add_option("--patience", pipeline.train.patience, "Early-stopping patience (epochs)")->default_val(20);
    cmd->add_option("--balance", pipeline.train.balance_ratio, "Negatives per positive after subsampling")
        ->default_val(3.0);
    cmd->add_option("--val-fraction", pipeline.train.val_fraction, "Held-out fraction for early stopping")
        ->default_val(0.1);
  }
};

std::vector<FeatureMatrix> load_feature_dir(const std::string& dir, const CorpusManifest& manifest) {
  std::vector<FeatureMatrix> out;
  for (const auto& e : manifest.entries) {
    const std::string path = (fs::path(dir) / (stem_of(e.audio_path) + ".cdfm")).string();
    if (!fs::exists(path)) throw IoError("missing feature file " + path + " (run `coughdet extract` first)");
    out.push_back(read_feature_matrix(path));
  }
  return out;
}

std::vector<CorpusItem> build_corpus_items(const CorpusManifest& manifest, std::vector<FeatureMatrix> features) {
  std::vector<CorpusItem> items;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    CorpusItem item;
    item.features = std::move(features[i]);
    item.duration_s = item.features.duration_s;
    item.subject_id = manifest.entries[i].subject_id;
    item.events = load_annotations(manifest.entries[i].labels_path, item.duration_s);
    items.push_back(std::move(item));
  }
  return items;
}

FeatureCatalog catalog_for_items(const std::vector<CorpusItem>& items) {
  const auto cat = build_catalog(items.front().features.channels);
  for (const auto& it : items)
    if (it.features.catalog_hash != cat.hash())
      throw ConfigError("feature files disagree on catalog: " + it.features.catalog_hash + " vs " + cat.hash());
  return cat;
}

// --- subcommand bodies -----------------------------------------------------

int run_synth(std::uint64_t seed, int subjects, int sessions, const std::string& channels,
              const std::string& out_dir) {
  SynthOptions opts;
  opts.channels = parse_roles(channels);
  ensure_dir(out_dir);
  auto corpus = generate_synthetic_corpus(seed, subjects, sessions, opts);
  CorpusManifest manifest;
  int session_counter = 0;
  std::string last_subject;
  for (const auto& rec : corpus) {
    if (rec.subject_id != last_subject) {
      session_counter = 0;
      last_subject = rec.subject_id;
    }
    char stem[64];
    std::snprintf(stem, sizeof(stem), "%s_%02d", rec.subject_id.c_str(), session_counter++);
    ManifestEntry entry;
    entry.audio_path = (fs::path(out_dir) / (std::string(stem) + ".wav")).string();
    entry.labels_path = (fs::path(out_dir) / (std::string(stem) + ".csv")).string();
    entry.subject_id = rec.subject_id;
    entry.condition = rec.condition;
    std::vector<std::vector<double>> channels_data;
    for (const auto& ch : rec.channels) {
      channels_data.push_back(ch.samples);
      entry.channels.push_back(ch.channel_role);
    }
    write_wav(entry.audio_path, channels_data, kSampleRate);
    write_annotations(entry.labels_path, rec.events);
    manifest.entries.push_back(std::move(entry));
  }
  write_manifest((fs::path(out_dir) / "manifest.json").string(), manifest);
  std::cout << "synth: wrote " << corpus.size() << " recordings to " << out_dir << "\n";
  return 0;
}

int run_extract(const std::string& manifest_path, const std::string& channels, const std::string& out_dir,
                bool csv, int jobs) {
  const auto manifest = load_manifest(manifest_path);
  const auto roles = parse_roles(channels);
  ensure_dir(out_dir);
  const auto catalog = build_catalog(roles);
  write_catalog((fs::path(out_dir) / "catalog.json").string(), catalog);

  std::vector<std::string> errors(manifest.entries.size());
  parallel_for(manifest.entries.size(), jobs, [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    try {
      const auto rec = load_recording(entry);
      const auto features = extract_features(rec, roles);
      const std::string stem = stem_of(entry.audio_path);
      write_feature_matrix((fs::path(out_dir) / (stem + ".cdfm")).string(), features);
      if (csv) write_feature_csv((fs::path(out_dir) / (stem + ".csv")).string(), features, catalog);
    } catch (const std::exception& e) {
      errors[i] = entry.audio_path + ": " + e.what();
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw IoError("extract failed for " + e);
  std::cout << "extract: " << manifest.entries.size() << " recordings, " << catalog.size()
            << " feature columns\n";
  return 0;
}

int run_select(const std::string& manifest_path, const std::string& features_dir, const std::string& task_name,
               const PipelineConfig& cfg, const std::string& out_dir) {
  const auto manifest = load_manifest(manifest_path);
  auto items = build_corpus_items(manifest, load_feature_dir(features_dir, manifest));
  const auto catalog = catalog_for_items(items);
  std::vector<const FeatureMatrix*> matrices;
  for (const auto& it : items) matrices.push_back(&it.features);
  ensure_dir(out_dir);
  for (DetectionTask task : {DetectionTask::activity, DetectionTask::explosive}) {
    if (task_name != "both" && task_name != to_string(task)) continue;
    const auto rows = detail::gather_task_rows(matrices, task, cfg.train);
    const auto sel = select_features(rows, catalog, task, cfg.selection_size, cfg.n_bins);
    const std::string path =
        (fs::path(out_dir) / (std::string("selection_") + to_string(task) + ".json")).string();
    write_selection(path, sel);
    std::cout << "select: task " << to_string(task) << " -> " << path << "\n";
  }
  return 0;
}

int run_train(const std::string& manifest_path, const std::string& features_dir, const std::string& task_name,
              const PipelineConfig& cfg, const std::string& out_dir) {
  const auto manifest = load_manifest(manifest_path);
  auto items = build_corpus_items(manifest, load_feature_dir(features_dir, manifest));
  const auto catalog = catalog_for_items(items);
  std::vector<const FeatureMatrix*> matrices;
  for (const auto& it : items) matrices.push_back(&it.features);
  ensure_dir(out_dir);
  for (DetectionTask task : {DetectionTask::activity, DetectionTask::explosive}) {
    if (task_name != "both" && task_name != to_string(task)) continue;
    const auto stage = train_stage(matrices, catalog, task, cfg);
    const std::string path = (fs::path(out_dir) / (std::string("model_") + to_string(task) + ".cdnn")).string();
    write_stage_model(path, stage);
    std::cout << "train: task " << to_string(task) << " -> " << path << "\n";
  }
  return 0;
}

int run_detect(const std::string& wav_path, const std::string& activity_path, const std::string& explosive_path,
               const std::string& channels, double threshold, const std::string& out_path) {
  const auto activity = load_stage_model(activity_path);
  const auto explosive = load_stage_model(explosive_path);
  if (activity.mlp.catalog_hash != explosive.mlp.catalog_hash)
    throw ConfigError("models disagree on feature catalog: " + activity.mlp.catalog_hash + " vs " +
                      explosive.mlp.catalog_hash);
  WavData wav = read_wav(wav_path);
  AnnotatedRecording rec;
  rec.subject_id = stem_of(wav_path);
  const auto roles = parse_roles(channels);
  if (roles.size() != wav.channels.size())
    throw ValidationError(wav_path + ": file has " + std::to_string(wav.channels.size()) +
                          " channels but --channels names " + std::to_string(roles.size()));
  for (std::size_t c = 0; c < wav.channels.size(); ++c) {
    Waveform w;
    w.samples = std::move(wav.channels[c]);
    w.sample_rate = wav.sample_rate;
    w.channel_role = roles[c];
    rec.channels.push_back(resample_to_10khz(w));
  }
  normalize_peak(rec);
  const auto events = detect(rec, activity, explosive, threshold);
  write_detections_csv(out_path, events);
  std::cout << "detect: " << events.size() << " events -> " << out_path << "\n";
  return 0;
}

int run_evaluate(const std::string& manifest_path, const std::string& features_dir, const PipelineConfig& cfg,
                 const std::string& out_dir) {
  const auto manifest = load_manifest(manifest_path);
  auto items = build_corpus_items(manifest, load_feature_dir(features_dir, manifest));
  const auto catalog = catalog_for_items(items);
  ensure_dir(out_dir);
  const auto report = loso_cross_validate(items, catalog, cfg);
  const auto json_path = (fs::path(out_dir) / "report.json").string();
  std::ofstream json_out(json_path, std::ios::binary);
  if (!json_out) throw IoError("cannot write report: " + json_path);
  json_out << report_to_json(report).dump(2) << "\n";
  const auto text = report_to_text(report);
  const auto text_path = (fs::path(out_dir) / "report.txt").string();
  std::ofstream text_out(text_path, std::ios::binary);
  if (!text_out) throw IoError("cannot write report: " + text_path);
  text_out << text;
  std::cout << text;
  return 0;
}

int run_sweep(const std::string& manifest_path, const std::string& features_dir, const PipelineConfig& cfg,
              const std::string& thresholds, const std::string& out_dir) {
  const auto manifest = load_manifest(manifest_path);
  auto items = build_corpus_items(manifest, load_feature_dir(features_dir, manifest));
  const auto catalog = catalog_for_items(items);
  ensure_dir(out_dir);
  const auto points = threshold_sweep(items, catalog, cfg, parse_thresholds(thresholds));
  const auto csv_path = (fs::path(out_dir) / "sweep.csv").string();
  write_sweep_csv(csv_path, points);
  std::cout << "sweep: " << points.size() << " thresholds -> " << csv_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio cough-detection pipeline"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  std::uint64_t synth_seed = 0;
  int synth_subjects = 0, synth_sessions = 3;
  std::string synth_channels = "audio", synth_out = "corpus";
  synth->add_option("--seed", synth_seed, "Corpus seed")->required();
  synth->add_option("--subjects", synth_subjects, "Number of subjects")->required()->check(CLI::PositiveNumber);
  synth->add_option("--sessions", synth_sessions, "Sessions per subject")->default_val(3)->check(CLI::PositiveNumber);
  synth->add_option("--channels", synth_channels, "Comma-separated channel roles")->default_val("audio");
  synth->add_option("--out", synth_out, "Output directory")->required();

  // extract
  auto* extract = app.add_subcommand("extract", "Extract per-frame features for a corpus");
  std::string extract_manifest, extract_channels = "audio", extract_out = "features";
  bool extract_csv = false;
  int extract_jobs = default_jobs();
  extract->add_option("--manifest", extract_manifest, "Corpus manifest")->required();
  extract->add_option("--channels", extract_channels, "Comma-separated channel roles")->default_val("audio");
  extract->add_option("--out", extract_out, "Output directory")->required();
  extract->add_flag("--csv", extract_csv, "Also write per-recording CSV exports");
  extract->add_option("--jobs", extract_jobs, "Worker thread cap")->default_val(default_jobs());

  // shared train-ish flags
  TrainFlags select_flags, train_flags, eval_flags, sweep_flags;

  auto* select = app.add_subcommand("select", "Run feature selection for inspection");
  std::string select_manifest, select_features, select_task = "both", select_out = "selection";
  std::uint64_t select_seed = 0;
  select->add_option("--manifest", select_manifest, "Corpus manifest")->required();
  select->add_option("--features", select_features, "Directory with extracted features")->required();
  select->add_option("--task", select_task, "activity, explosive or both")
      ->default_val("both")
      ->check(CLI::IsMember({"activity", "explosive", "both"}));
  select->add_option("--seed", select_seed, "Seed for negative subsampling")->required();
  select->add_option("--out", select_out, "Output directory")->required();
  select_flags.attach(select);

  auto* train = app.add_subcommand("train", "Train the two-stage models");
  std::string train_manifest, train_features, train_task = "both", train_out = "models";
  std::uint64_t train_seed = 0;
  train->add_option("--manifest", train_manifest, "Corpus manifest")->required();
  train->add_option("--features", train_features, "Directory with extracted features")->required();
  train->add_option("--task", train_task, "activity, explosive or both")
      ->default_val("both")
      ->check(CLI::IsMember({"activity", "explosive", "both"}));
  train->add_option("--seed", train_seed, "Training seed")->required();
  train->add_option("--out", train_out, "Output directory")->required();
  train_flags.attach(train);

  auto* detect_cmd = app.add_subcommand("detect", "Detect cough events in one recording");
  std::string detect_wav, detect_activity, detect_explosive, detect_channels = "audio",
              detect_out = "detections.csv";
  double detect_threshold = kDefaultThreshold;
  detect_cmd->add_option("--wav", detect_wav, "Input WAV file")->required();
  detect_cmd->add_option("--activity-model", detect_activity, "Stage-1 model file")->required();
  detect_cmd->add_option("--explosive-model", detect_explosive, "Stage-2 model file")->required();
  detect_cmd->add_option("--channels", detect_channels, "Roles of the WAV channels")->default_val("audio");
  detect_cmd->add_option("--threshold", detect_threshold, "Decision threshold")
      ->default_val(kDefaultThreshold)
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  detect_cmd->add_option("--out", detect_out, "Output CSV path")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Leave-one-subject-out evaluation");
  std::string eval_manifest, eval_features, eval_out = "report";
  std::uint64_t eval_seed = 0;
  double eval_threshold = kDefaultThreshold;
  int eval_jobs = default_jobs();
  evaluate->add_option("--manifest", eval_manifest, "Corpus manifest")->required();
  evaluate->add_option("--features", eval_features, "Directory with extracted features")->required();
  evaluate->add_option("--seed", eval_seed, "Training seed")->required();
  evaluate->add_option("--threshold", eval_threshold, "Decision threshold")
      ->default_val(kDefaultThreshold)
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  evaluate->add_option("--jobs", eval_jobs, "Worker thread cap")->default_val(default_jobs());
  evaluate->add_option("--out", eval_out, "Output directory")->required();
  eval_flags.attach(evaluate);

  auto* sweep = app.add_subcommand("sweep", "Threshold sweep over a LOSO evaluation");
  std::string sweep_manifest, sweep_features, sweep_thresholds = "0.05:0.95:0.05", sweep_out = "sweep";
  std::uint64_t sweep_seed = 0;
  int sweep_jobs = default_jobs();
  sweep->add_option("--manifest", sweep_manifest, "Corpus manifest")->required();
  sweep->add_option("--features", sweep_features, "Directory with extracted features")->required();
  sweep->add_option("--seed", sweep_seed, "Training seed")->required();
  sweep->add_option("--thresholds", sweep_thresholds, "Comma list or lo:hi:step")->default_val("0.05:0.95:0.05");
  sweep->add_option("--jobs", sweep_jobs, "Worker thread cap")->default_val(default_jobs());
  sweep->add_option("--out", sweep_out, "Output directory")->required();
  sweep_flags.attach(sweep);

  for (auto* cmd : {synth, extract, select, train, detect_cmd, evaluate, sweep})
    cmd->set_config("--config", "", "Read options from a config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      write_sidecar(synth, synth_out);
      return run_synth(synth_seed, synth_subjects, synth_sessions, synth_channels, synth_out);
    }
    if (extract->parsed()) {
      write_sidecar(extract, extract_out);
      return run_extract(extract_manifest, extract_channels, extract_out, extract_csv, extract_jobs);
    }
    if (select->parsed()) {
      select_flags.pipeline.train.seed = select_seed;
      write_sidecar(select, select_out);
      return run_select(select_manifest, select_features, select_task, select_flags.pipeline, select_out);
    }
    if (train->parsed()) {
      train_flags.pipeline.train.seed = train_seed;
      write_sidecar(train, train_out);
      return run_train(train_manifest, train_features, train_task, train_flags.pipeline, train_out);
    }
    if (detect_cmd->parsed()) {
      return run_detect(detect_wav, detect_activity, detect_explosive, detect_channels, detect_threshold,
                        detect_out);
    }
    if (evaluate->parsed()) {
      eval_flags.pipeline.train.seed = eval_seed;
      eval_flags.pipeline.threshold = eval_threshold;
      eval_flags.pipeline.jobs = eval_jobs;
      write_sidecar(evaluate, eval_out);
      return run_evaluate(eval_manifest, eval_features, eval_flags.pipeline, eval_out);
    }
    if (sweep->parsed()) {
      sweep_flags.pipeline.train.seed = sweep_seed;
      sweep_flags.pipeline.jobs = sweep_jobs;
      write_sidecar(sweep, sweep_out);
      return run_sweep(sweep_manifest, sweep_features, sweep_flags.pipeline, sweep_thresholds, sweep_out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
