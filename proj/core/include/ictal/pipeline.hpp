#pragma once

#include <cstdint>
#include <span>

#include "ictal/signal_io.hpp"
#include "ictal/spectral.hpp"
#include "ictal/tsforest.hpp"
#include "ictal/windower.hpp"

namespace ictal {

struct PipelineOptions {
  std::int64_t window_s = kDefaultWindowSeconds;
  std::int64_t stride_s = kDefaultStrideSeconds;
  // Off: the forest sees raw samples instead of FFT magnitudes.
  bool use_fft = true;
  SpectralOptions spectral;
  unsigned threads = 0;
};

struct TrainOptions {
  PipelineOptions pipeline;
  double neg_per_pos = 1.0;
  std::uint64_t undersample_seed = 0;
  ForestParams forest;
};

FeatureWindowSet window_features(const LabeledWindowSet& set, const PipelineOptions& options);

// Row-wise concatenation; all parts must share n_bins.
FeatureWindowSet concat(std::span<const FeatureWindowSet> parts);

// Windows each recording against the annotations for its subject id,
// undersamples, extracts features and fits one forest.
ForestModel train_modality(std::span<const SignalRecording> recordings, std::span<const SeizureAnnotation> annotations,
                           const TrainOptions& options, Modality modality);

// Windows, transforms and scores a recording one row at a time, without
// materialising the full feature matrix.
PredictionStream score_recording(const ForestModel& model, const SignalRecording& recording,
                                 const PipelineOptions& options);

}  // namespace ictal
