#include "ictal/pipeline.hpp"

#include <algorithm>
#include <optional>

#include "ictal/error.hpp"
#include "ictal/parallel.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "pipeline";

std::size_t feature_length(const LabeledWindowSet& set, const PipelineOptions& options) {
  return options.use_fft ? set.window_len() / 2 + 1 : set.window_len();
}

}  // namespace

FeatureWindowSet window_features(const LabeledWindowSet& set, const PipelineOptions& options) {
  if (!options.use_fft) return raw_feature_set(set);
  auto spectral = options.spectral;
  spectral.threads = options.threads;
  return transform_set(set, spectral);
}

FeatureWindowSet concat(std::span<const FeatureWindowSet> parts) {
  FeatureWindowSet out;
  if (parts.empty()) return out;
  out.n_bins = parts.front().n_bins;
  out.bin_hz = parts.front().bin_hz;
  out.window_s = parts.front().window_s;
  out.stride_s = parts.front().stride_s;
  for (const auto& p : parts) {
    if (p.n_bins != out.n_bins) {
      throw Error(ErrorKind::Shape, kModule,
                  "cannot concatenate sets with " + std::to_string(out.n_bins) + " and " +
                      std::to_string(p.n_bins) + " bins");
    }
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
    out.start_times.insert(out.start_times.end(), p.start_times.begin(), p.start_times.end());
    out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
  }
  return out;
}

ForestModel train_modality(std::span<const SignalRecording> recordings, std::span<const SeizureAnnotation> annotations,
                           const TrainOptions& options, Modality modality) {
  std::vector<FeatureWindowSet> parts;
  for (std::size_t i = 0; i < recordings.size(); ++i) {
    const auto& rec = recordings[i];
    const auto truth = annotations_for(annotations, rec.subject_id());
    const auto windows = make_windows(rec, truth, options.pipeline.window_s, options.pipeline.stride_s);
    if (windows.count_positive() == 0) continue;
    const auto balanced = undersample(windows, options.neg_per_pos, options.undersample_seed + i);
    parts.push_back(window_features(balanced, options.pipeline));
  }
  if (parts.empty()) {
    throw Error(ErrorKind::NoPositiveClass, kModule, "no recording has a seizure-positive window");
  }
  auto params = options.forest;
  params.threads = options.pipeline.threads;
  return train_forest(concat(parts), params, modality);
}

PredictionStream score_recording(const ForestModel& model, const SignalRecording& recording,
                                 const PipelineOptions& options) {
  const auto windows = make_windows(recording, {}, options.window_s, options.stride_s);
  const std::size_t len = feature_length(windows, options);
  if (len != model.feature_length) {
    throw Error(ErrorKind::Shape, kModule,
                "model expects " + std::to_string(model.feature_length) + " features but " +
                    std::string(to_string(model.modality)) +
                    " windows yield " + std::to_string(len));
  }
  PredictionStream out;
  out.modality = model.modality;
  out.step_s = options.stride_s;
  out.entries.resize(windows.size());
  std::optional<SpectrumTransformer> transformer;
  if (options.use_fft) transformer.emplace(windows.window_len(), options.spectral);
  parallel_for(windows.size(), options.threads, [&](std::size_t i) {
    thread_local std::vector<double> row;
    row.resize(len);
    const auto w = windows.window(i);
    if (transformer) {
      transformer->magnitude(w, row);
    } else {
      std::copy(w.begin(), w.end(), row.begin());
    }
    out.entries[i] = {windows.start_times()[i], predict(model, row)};
  });
  validate_stream(out);
  return out;
}

}  // namespace ictal
