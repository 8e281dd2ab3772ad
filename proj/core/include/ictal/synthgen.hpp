#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ictal/signal_io.hpp"
#include "ictal/windower.hpp"

namespace ictal {

struct FrequencyBand {
  double lo_hz = 0.0;
  double hi_hz = 0.0;
};

// Per-modality signal model: coloured background with slow gain drift and
// baseline wander, band-limited bursts during seizures, and seizure-like
// bursts at random non-seizure times ("distractors").
struct ModalityProfile {
  std::int64_t rate_hz = 500;
  double noise_std = 50.0;              // coloured background RMS (physical units)
  double ar_coefficient = 0.5;          // AR(1) colour of the background
  std::uint32_t ar_stages = 1;          // 1 or 2 cascaded AR(1) stages
  double white_std = 0.0;               // sensor noise floor, not subject to gain
  double gain_log_sigma = 0.3;          // log-normal spread of slow gain drift
  double gain_block_s = 60.0;           // gain drift knot spacing
  double animal_offset_max = 0.0;       // per-recording DC offset, uniform in +-max
  double animal_gain_log_sigma = 0.0;   // per-recording gain spread
  double wander_std = 40.0;             // stationary std of baseline wander
  double wander_tau_s = 20.0;           // wander time constant
  FrequencyBand burst_band{18.0, 24.0};
  double burst_rms = 25.0;              // seizure burst RMS (physical units)
  std::uint32_t burst_tones = 12;
  double distractor_rate_per_hour = 1.0;
  std::int64_t distractor_min_s = 10;
  std::int64_t distractor_max_s = 40;
  double distractor_rms_lo = 0.5;       // distractor RMS as a fraction of burst_rms
  double distractor_rms_hi = 1.0;
  PhysicalRange physical_range{-2000.0, 2000.0};
  std::string channel_label;
  std::string physical_dimension;
};

struct SynthConfig {
  std::int64_t duration_s = 86400;
  std::uint32_t n_seizures = 4;
  std::int64_t seizure_min_s = 30;
  std::int64_t seizure_max_s = 60;
  std::int64_t min_separation_s = 120;
  Timestamp start_time = Timestamp{Seconds{1704067200}};  // 2024-01-01T00:00:00Z
  std::string animal_id = "synth";
  std::int64_t window_s = kDefaultWindowSeconds;
  std::int64_t stride_s = kDefaultStrideSeconds;
  ModalityProfile ecog = default_ecog();
  ModalityProfile piezo = default_piezo();
  double video_coverage_fraction = 0.5;
  double video_flip_probability = 0.1;
  std::int64_t video_clip_s = 3600;
  std::uint64_t seed = 1;

  static ModalityProfile default_ecog();
  static ModalityProfile default_piezo();
};

struct PlantedBurst {
  Timestamp start_time{};
  std::int64_t duration_s = 0;
  double rms = 0.0;
};

struct SynthDataset {
  SignalRecording ecog;
  SignalRecording piezo;
  std::vector<SeizureAnnotation> annotations;
  PredictionStream video;
  std::vector<PlantedBurst> ecog_distractors;
  std::vector<PlantedBurst> piezo_distractors;
};

// Deterministic in config (including seed). Throws Packing when the seizures
// cannot be placed with the required separation.
SynthDataset generate(const SynthConfig& config);

// Writes ecog.edf, piezo.edf, annotations.csv and predictions_video.csv.
void write_dataset(const SynthDataset& data, const SynthConfig& config, const std::filesystem::path& dir);

}  // namespace ictal
