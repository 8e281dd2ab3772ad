#include "cli.hpp"

#include <zlib.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ictal/error.hpp"
#include "ictal/events.hpp"
#include "ictal/fusion.hpp"
#include "ictal/metrics.hpp"
#include "ictal/pipeline.hpp"
#include "ictal/synthgen.hpp"

namespace ictal::cli {
namespace {

namespace fs = std::filesystem;

// Resolved settings of one invocation. Sorted, so the hash does not depend on
// flag order or on whether a value came from the config file.
using Settings = std::map<std::string, std::string>;

struct Globals {
  std::string config;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  unsigned threads = 0;
};

struct PipelineFlags {
  std::int64_t window_s = kDefaultWindowSeconds;
  std::int64_t stride_s = kDefaultStrideSeconds;
  bool no_fft = false;
  bool log_magnitude = false;

  void add_to(CLI::App& app) {
    app.add_option("--window", window_s, "Window length in seconds")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--stride", stride_s, "Window stride in seconds")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_flag("--no-fft", no_fft, "Feed raw samples to the forest instead of FFT magnitudes");
    app.add_flag("--log-magnitude", log_magnitude, "Use log1p of the FFT magnitudes");
  }
  PipelineOptions options(unsigned threads) const {
    PipelineOptions o;
    o.window_s = window_s;
    o.stride_s = stride_s;
    o.use_fft = !no_fft;
    o.spectral.log_magnitude = log_magnitude;
    o.spectral.threads = threads;
    o.threads = threads;
    return o;
  }
  void record(Settings& s) const {
    s["window_s"] = std::to_string(window_s);
    s["stride_s"] = std::to_string(stride_s);
    s["fft"] = no_fft ? "off" : "on";
    s["log_magnitude"] = log_magnitude ? "on" : "off";
  }
};

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08x", v);
  return buf;
}

std::string canonical(const std::string& command, const Settings& s) {
  std::string text = "command=" + command + "\n";
  for (const auto& [k, v] : s) text += k + "=" + v + "\n";
  return text;
}

std::string config_hash(const std::string& command, const Settings& s) {
  const auto text = canonical(command, s);
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size()));
  return hex32(static_cast<std::uint32_t>(crc));
}

// Writes <command>.manifest next to the outputs and returns the hash.
std::string write_manifest(const fs::path& dir, const std::string& command, const Settings& s) {
  const auto hash = config_hash(command, s);
  write_text_file(dir / (command + ".manifest"), "config_hash=" + hash + "\n" + canonical(command, s), "cli");
  return hash;
}

fs::path prepare_out_dir(const Globals& g) {
  fs::path dir = g.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cli", "cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

std::string fmt(double v) { return format_probability(v); }

Modality parse_trainable(const std::string& name) {
  const auto m = parse_modality(name);
  if (m != Modality::Ecog && m != Modality::Piezo) {
    throw Error(ErrorKind::Validation, "cli", "models are trained for ecog or piezo, not " + name);
  }
  return m;
}

std::vector<SeizureAnnotation> load_truth(const std::string& path) { return read_annotations(path); }

std::vector<std::string> header_lines(const std::string& hash, const Settings& s) {
  std::vector<std::string> lines{"config_hash: " + hash};
  for (const auto& [k, v] : s) lines.push_back(k + ": " + v);
  return lines;
}

// --- synth ------------------------------------------------------------------

struct SynthCmd {
  std::int64_t duration_s = 86400;
  std::uint32_t seizures = 4;
  double video_coverage = 0.5;
  double video_flip = 0.1;
  std::string animal_id = "synth";
  std::string start = "2024-01-01T00:00:00Z";

  void add_to(CLI::App& app) {
    app.add_option("--duration", duration_s, "Recording length in seconds")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--seizures", seizures, "Number of planted seizures")->capture_default_str();
    app.add_option("--video-coverage", video_coverage, "Fraction of the grid covered by video")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--video-flip", video_flip, "Video label flip probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app.add_option("--animal-id", animal_id, "Animal id written to EDF headers and annotations")->capture_default_str();
    app.add_option("--start", start, "Recording start (YYYY-MM-DDTHH:MM:SSZ)")->capture_default_str();
  }

  int run(const Globals& g, std::ostream& out) const {
    SynthConfig c;
    c.duration_s = duration_s;
    c.n_seizures = seizures;
    c.video_coverage_fraction = video_coverage;
    c.video_flip_probability = video_flip;
    c.animal_id = animal_id;
    c.seed = g.seed;
    const auto t = parse_iso8601(start);
    if (!t) throw Error(ErrorKind::Validation, "cli", "bad --start '" + start + "'");
    c.start_time = *t;

    Settings s{{"duration_s", std::to_string(duration_s)},
               {"seizures", std::to_string(seizures)},
               {"video_coverage", fmt(video_coverage)},
               {"video_flip", fmt(video_flip)},
               {"animal_id", animal_id},
               {"start", start},
               {"seed", std::to_string(g.seed)}};
    const auto dir = prepare_out_dir(g);
    const auto data = generate(c);
    write_dataset(data, c, dir);
    const auto hash = write_manifest(dir, "synth", s);
    out << "synth: " << data.annotations.size() << " seizures, " << data.video.size() << " video entries -> "
        << dir.string() << " (config " << hash << ")\n";
    return kOk;
  }
};

// --- train ------------------------------------------------------------------

struct TrainCmd {
  std::string modality;
  std::vector<std::string> recordings;
  std::string annotations;
  std::string model;
  double undersample_ratio = 1.0;
  std::uint32_t trees = 100;
  std::uint32_t intervals = 0;
  std::uint32_t min_interval = 3;
  std::int32_t max_depth = -1;
  std::uint32_t min_samples_leaf = 1;
  bool bootstrap = false;
  PipelineFlags pipeline;

  void add_to(CLI::App& app) {
    app.add_option("--modality", modality, "ecog or piezo")->required()->check(CLI::IsMember({"ecog", "piezo"}));
    app.add_option("--recording", recordings, "EDF recording(s); the EDF patient field selects annotations")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--annotations", annotations, "Seizure annotation CSV")->required()->check(CLI::ExistingFile);
    app.add_option("--model", model, "Output model path (default <out-dir>/model_<modality>.ictf)");
    app.add_option("--undersample-ratio", undersample_ratio, "Negatives kept per positive")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--trees", trees, "Number of trees")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--intervals", intervals, "Intervals per tree (0 = sqrt of series length)")->capture_default_str();
    app.add_option("--min-interval", min_interval, "Minimum interval length")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--max-depth", max_depth, "Maximum tree depth (-1 = unlimited)")->capture_default_str();
    app.add_option("--min-samples-leaf", min_samples_leaf, "Minimum rows per leaf")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_flag("--bootstrap", bootstrap, "Bootstrap training rows per tree");
    pipeline.add_to(app);
  }

  int run(const Globals& g, std::ostream& out) const {
    const auto m = parse_trainable(modality);
    const auto dir = prepare_out_dir(g);
    const fs::path model_path = model.empty() ? dir / ("model_" + modality + ".ictf") : fs::path(model);

    TrainOptions o;
    o.pipeline = pipeline.options(g.threads);
    o.neg_per_pos = undersample_ratio;
    o.undersample_seed = g.seed;
    o.forest.n_trees = trees;
    o.forest.intervals_per_tree = intervals;
    o.forest.min_interval_len = min_interval;
    o.forest.max_depth = max_depth;
    o.forest.min_samples_leaf = min_samples_leaf;
    o.forest.bootstrap = bootstrap;
    o.forest.seed = g.seed;

    Settings s{{"modality", modality},
               {"annotations", annotations},
               {"model", model_path.string()},
               {"undersample_ratio", fmt(undersample_ratio)},
               {"trees", std::to_string(trees)},
               {"intervals", std::to_string(intervals)},
               {"min_interval", std::to_string(min_interval)},
               {"max_depth", std::to_string(max_depth)},
               {"min_samples_leaf", std::to_string(min_samples_leaf)},
               {"bootstrap", bootstrap ? "on" : "off"},
               {"seed", std::to_string(g.seed)}};
    for (std::size_t i = 0; i < recordings.size(); ++i) s["recording." + std::to_string(i)] = recordings[i];
    pipeline.record(s);

    std::vector<SignalRecording> recs;
    for (const auto& r : recordings) recs.push_back(read_edf(r));
    const auto truth = load_truth(annotations);
    const auto forest = train_modality(recs, truth, o, m);
    save_model(forest, model_path);
    const auto hash = write_manifest(dir, "train_" + modality, s);
    out << "train: " << modality << " forest, " << forest.n_trees() << " trees, " << forest.train_positives << " positive / "
        << forest.train_negatives << " negative windows -> " << model_path.string() << " (config " << hash << ")\n";
    return kOk;
  }
};

// --- predict ----------------------------------------------------------------

struct PredictCmd {
  std::string model;
  std::string recording;
  std::string output;
  PipelineFlags pipeline;

  void add_to(CLI::App& app) {
    app.add_option("--model", model, "Trained model file")->required()->check(CLI::ExistingFile);
    app.add_option("--recording", recording, "EDF recording to score")->required()->check(CLI::ExistingFile);
    app.add_option("--output", output, "Output CSV (default <out-dir>/predictions_<modality>.csv)");
    pipeline.add_to(app);
  }

  int run(const Globals& g, std::ostream& out) const {
    const auto dir = prepare_out_dir(g);
    const auto forest = load_model(model);
    const auto rec = read_edf(recording);
    const std::string mod(to_string(forest.modality));
    const fs::path out_path = output.empty() ? dir / ("predictions_" + mod + ".csv") : fs::path(output);
    Settings s{{"model", model}, {"recording", recording}, {"output", out_path.string()}, {"modality", mod}};
    pipeline.record(s);

    const auto stream = score_recording(forest, rec, pipeline.options(g.threads));
    write_prediction_stream(stream, out_path);
    const auto hash = write_manifest(dir, "predict_" + mod, s);
    out << "predict: " << stream.size() << " " << mod << " windows -> " << out_path.string() << " (config " << hash << ")\n";
    return kOk;
  }
};

// --- fuse -------------------------------------------------------------------

struct FuseCmd {
  std::string ecog, piezo, video;
  std::vector<double> weights{0.5, 0.2, 0.3};
  std::string output;
  std::int64_t stride_s = kDefaultStrideSeconds;

  void add_to(CLI::App& app) {
    app.add_option("--ecog", ecog, "ECoG prediction CSV")->check(CLI::ExistingFile);
    app.add_option("--piezo", piezo, "Piezo prediction CSV")->check(CLI::ExistingFile);
    app.add_option("--video", video, "Video prediction CSV")->check(CLI::ExistingFile);
    app.add_option("--weights", weights, "Fusion weights e,p,v")->delimiter(',')->expected(3)->capture_default_str();
    app.add_option("--output", output, "Output CSV (default <out-dir>/predictions_fused.csv)");
    app.add_option("--stride", stride_s, "Grid step in seconds")->check(CLI::PositiveNumber)->capture_default_str();
  }

  int run(const Globals& g, std::ostream& out) const {
    if (ecog.empty() && piezo.empty() && video.empty()) {
      throw CLI::ValidationError("fuse", "at least one of --ecog, --piezo, --video is required");
    }
    const auto dir = prepare_out_dir(g);
    const fs::path out_path = output.empty() ? dir / "predictions_fused.csv" : fs::path(output);
    FusionWeights w{weights[0], weights[1], weights[2]};
    Settings s{{"weights", fmt(w.ecog) + "," + fmt(w.piezo) + "," + fmt(w.video)},
               {"output", out_path.string()},
               {"stride_s", std::to_string(stride_s)}};
    std::vector<PredictionStream> streams;
    const std::pair<const std::string*, Modality> inputs[] = {
        {&ecog, Modality::Ecog}, {&piezo, Modality::Piezo}, {&video, Modality::Video}};
    for (const auto& [path, m] : inputs) {
      if (path->empty()) continue;
      streams.push_back(read_prediction_stream(*path, m, stride_s));
      s[std::string(to_string(m))] = *path;
    }
    const auto fused = fuse_streams(streams, w);
    write_prediction_stream(fused, out_path);
    const auto hash = write_manifest(dir, "fuse", s);
    out << "fuse: " << streams.size() << " streams, " << fused.size() << " entries -> " << out_path.string() << " (config "
        << hash << ")\n";
    return kOk;
  }
};

// --- events -----------------------------------------------------------------

struct EventsCmd {
  std::string predictions;
  std::string modality = "fused";
  std::optional<double> threshold;
  bool sweep_mode = false;
  std::string annotations;
  std::string animal_id;
  std::int64_t window_s = kDefaultWindowSeconds;
  std::int64_t stride_s = kDefaultStrideSeconds;

  void add_to(CLI::App& app) {
    app.add_option("--predictions", predictions, "Prediction stream CSV")->required()->check(CLI::ExistingFile);
    app.add_option("--modality", modality, "Modality of the stream")
        ->check(CLI::IsMember({"ecog", "piezo", "video", "fused"}))
        ->capture_default_str();
    auto* t = app.add_option("--threshold", threshold, "Fixed decision threshold")->check(CLI::Range(0.0, 1.0));
    auto* sw = app.add_flag("--sweep", sweep_mode, "Pick the highest threshold that detects every annotated seizure");
    t->excludes(sw);
    app.add_option("--annotations", annotations, "Seizure annotations (required with --sweep)")->check(CLI::ExistingFile);
    app.add_option("--animal-id", animal_id, "Restrict annotations to one animal");
    app.add_option("--window", window_s, "Window length in seconds")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--stride", stride_s, "Grid step in seconds")->check(CLI::PositiveNumber)->capture_default_str();
  }

  int run(const Globals& g, std::ostream& out) const {
    if (!threshold && !sweep_mode) throw CLI::ValidationError("events", "one of --threshold or --sweep is required");
    if (sweep_mode && annotations.empty()) throw CLI::ValidationError("events", "--sweep needs --annotations");
    const auto dir = prepare_out_dir(g);
    const auto stream = read_prediction_stream(predictions, parse_modality(modality), stride_s);
    Settings s{{"predictions", predictions},
               {"modality", modality},
               {"window_s", std::to_string(window_s)},
               {"stride_s", std::to_string(stride_s)},
               {"mode", sweep_mode ? "sweep" : "threshold"}};
    if (!annotations.empty()) s["annotations"] = annotations;
    if (!animal_id.empty()) s["animal_id"] = animal_id;

    std::optional<SweepResult> selected;
    double thr = threshold.value_or(0.5);
    if (sweep_mode) {
      auto truth = load_truth(annotations);
      if (!animal_id.empty()) truth = annotations_for(truth, animal_id);
      const auto outcome = sweep(stream, truth, window_s, g.threads);
      selected = outcome.selected;
      thr = outcome.selected.threshold;
    }
    s["threshold"] = fmt(thr);
    const auto events = detect_events(stream, thr, window_s);
    const auto hash = write_manifest(dir, "events", s);
    report(events, selected, dir, header_lines(hash, s));
    out << "events: " << events.size() << " events at threshold " << fmt(thr) << " -> " << (dir / "report.txt").string()
        << " (config " << hash << ")\n";
    return kOk;
  }
};

// --- metrics ----------------------------------------------------------------

struct MetricsCmd {
  std::string ecog, piezo, video, fused;
  std::string annotations;
  std::string animal_id;
  double threshold = 0.5;
  std::int64_t window_s = kDefaultWindowSeconds;
  std::int64_t stride_s = kDefaultStrideSeconds;

  void add_to(CLI::App& app) {
    app.add_option("--ecog", ecog, "ECoG prediction CSV")->check(CLI::ExistingFile);
    app.add_option("--piezo", piezo, "Piezo prediction CSV")->check(CLI::ExistingFile);
    app.add_option("--video", video, "Video prediction CSV")->check(CLI::ExistingFile);
    app.add_option("--fused", fused, "Fused prediction CSV")->check(CLI::ExistingFile);
    app.add_option("--annotations", annotations, "Seizure annotations")->required()->check(CLI::ExistingFile);
    app.add_option("--animal-id", animal_id, "Restrict annotations to one animal");
    app.add_option("--threshold", threshold, "Decision threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app.add_option("--window", window_s, "Window length in seconds")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--stride", stride_s, "Grid step in seconds")->check(CLI::PositiveNumber)->capture_default_str();
  }

  int run(const Globals& g, std::ostream& out) const {
    const std::pair<const std::string*, Modality> inputs[] = {
        {&ecog, Modality::Ecog}, {&piezo, Modality::Piezo}, {&video, Modality::Video}, {&fused, Modality::Fused}};
    if (std::all_of(std::begin(inputs), std::end(inputs), [](const auto& p) { return p.first->empty(); })) {
      throw CLI::ValidationError("metrics", "at least one prediction stream is required");
    }
    const auto dir = prepare_out_dir(g);
    auto truth = load_truth(annotations);
    if (!animal_id.empty()) truth = annotations_for(truth, animal_id);
    Settings s{{"annotations", annotations},
               {"threshold", fmt(threshold)},
               {"window_s", std::to_string(window_s)},
               {"stride_s", std::to_string(stride_s)}};
    if (!animal_id.empty()) s["animal_id"] = animal_id;

    std::vector<MetricRow> rows;
    for (const auto& [path, m] : inputs) {
      if (path->empty()) continue;
      const std::string name(to_string(m));
      s[name] = *path;
      const auto stream = read_prediction_stream(*path, m, stride_s);
      const auto labels = label_stream(stream, truth, window_s);
      std::vector<double> probs;
      probs.reserve(stream.size());
      for (const auto& e : stream.entries) probs.push_back(e.probability);
      const auto frame = frame_metrics(probs, labels, threshold);
      const auto events = event_metrics(detect_events(stream, threshold, window_s), truth);
      const auto r = metric_rows(name, frame, events);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    write_metrics_csv(rows, dir / "metrics.csv");
    const auto hash = write_manifest(dir, "metrics", s);
    out << "metrics: " << rows.size() << " rows -> " << (dir / "metrics.csv").string() << " (config " << hash << ")\n";
    return kOk;
  }
};

// --- bench ------------------------------------------------------------------

struct BenchCmd {
  std::string ecog_model, piezo_model, ecog, piezo;
  std::int64_t duration_s = 3600;
  std::uint32_t trees = 100;
  double threshold = 0.5;
  std::int64_t window_s = kDefaultWindowSeconds;
  std::int64_t stride_s = kDefaultStrideSeconds;

  void add_to(CLI::App& app) {
    auto* em = app.add_option("--ecog-model", ecog_model, "ECoG model")->check(CLI::ExistingFile);
    auto* pm = app.add_option("--piezo-model", piezo_model, "Piezo model")->check(CLI::ExistingFile);
    auto* er = app.add_option("--ecog", ecog, "ECoG recording")->check(CLI::ExistingFile);
    auto* pr = app.add_option("--piezo", piezo, "Piezo recording")->check(CLI::ExistingFile);
    em->needs(pm, er, pr);
    pm->needs(em, er, pr);
    er->needs(em, pm, pr);
    pr->needs(em, pm, er);
    app.add_option("--duration", duration_s, "Synthetic signal length when no inputs are given")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--trees", trees, "Trees per synthetic model")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--threshold", threshold, "Event threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app.add_option("--window", window_s, "Window length in seconds")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--stride", stride_s, "Grid step in seconds")->check(CLI::PositiveNumber)->capture_default_str();
  }

  int run(const Globals& g, std::ostream& out) const {
    PipelineOptions po;
    po.window_s = window_s;
    po.stride_s = stride_s;
    po.threads = g.threads;
    ForestModel em, pm;
    SignalRecording er, pr;
    if (!ecog_model.empty()) {
      em = load_model(ecog_model);
      pm = load_model(piezo_model);
      er = read_edf(ecog);
      pr = read_edf(piezo);
    } else {
      // Train on one synthetic animal, time on another.
      SynthConfig c;
      c.duration_s = duration_s;
      c.n_seizures = std::max<std::int64_t>(1, duration_s / 21600);
      c.seed = g.seed;
      const auto train = generate(c);
      c.seed = g.seed + 1;
      const auto test = generate(c);
      TrainOptions o;
      o.pipeline = po;
      o.forest.n_trees = trees;
      o.forest.seed = g.seed;
      em = train_modality(std::span(&train.ecog, 1), train.annotations, o, Modality::Ecog);
      pm = train_modality(std::span(&train.piezo, 1), train.annotations, o, Modality::Piezo);
      er = test.ecog;
      pr = test.piezo;
    }
    const double signal_s = std::min(er.duration_seconds().to_double(), pr.duration_seconds().to_double());

    const auto t0 = std::chrono::steady_clock::now();
    const auto es = score_recording(em, er, po);
    const auto ps = score_recording(pm, pr, po);
    const auto fused = fuse_streams(std::vector<PredictionStream>{es, ps}, FusionWeights{});
    const auto events = detect_events(fused, threshold, window_s);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double per10 = wall / signal_s * 10.0;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "bench: signal_seconds=%.0f wall_seconds=%.3f seconds_per_10s=%.4f real_time_factor=%.5f events=%zu\n",
                  signal_s, wall, per10, wall / signal_s, events.size());
    out << line;
    const auto dir = prepare_out_dir(g);
    write_text_file(dir / "bench.txt", line, "cli");
    return kOk;
  }
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-modal seizure detection pipeline"};
  app.name("ictal");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();

  SynthCmd synth;
  TrainCmd train;
  PredictCmd predict;
  FuseCmd fuse;
  EventsCmd events;
  MetricsCmd metrics;
  BenchCmd bench;
  synth.add_to(*app.add_subcommand("synth", "Generate a synthetic multi-modal dataset"));
  train.add_to(*app.add_subcommand("train", "Train a per-modality forest"));
  predict.add_to(*app.add_subcommand("predict", "Score a recording with a trained forest"));
  fuse.add_to(*app.add_subcommand("fuse", "Combine prediction streams by weighted average"));
  events.add_to(*app.add_subcommand("events", "Threshold a stream into seizure events and write a report"));
  metrics.add_to(*app.add_subcommand("metrics", "Framewise and event metrics against annotations"));
  bench.add_to(*app.add_subcommand("bench", "Measure the real-time factor of ECoG+Piezo processing"));

  std::vector<const char*> argv{"ictal"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    const auto* sub = app.get_subcommands().front();
    const auto& name = sub->get_name();
    if (name == "synth") return synth.run(g, out);
    if (name == "train") return train.run(g, out);
    if (name == "predict") return predict.run(g, out);
    if (name == "fuse") return fuse.run(g, out);
    if (name == "events") return events.run(g, out);
    if (name == "metrics") return metrics.run(g, out);
    if (name == "bench") return bench.run(g, out);
    err << "ictal: unknown command '" << name << "'\n";
    return kUsage;
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::Error& e) {
    err << "ictal: " << e.what() << "\n";
    if (e.get_exit_code() != 0) err << "Run with --help for more information.\n";
    return kUsage;
  } catch (const Error& e) {
    err << "ictal: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "ictal: internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace ictal::cli
