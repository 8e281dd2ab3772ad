#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ictal/signal_io.hpp"

namespace ictal {

struct FusionWeights {
  double ecog = 0.5;
  double piezo = 0.2;
  double video = 0.3;

  double of(Modality m) const;
  // Throws Validation for negative/non-finite weights or a zero sum.
  void validate() const;
};

// Input modalities in slot order.
constexpr std::array<Modality, 3> kFusionModalities = {Modality::Ecog, Modality::Piezo, Modality::Video};

struct AlignedFrame {
  Timestamp time{};
  std::array<std::optional<double>, 3> probability;  // indexed like kFusionModalities

  std::optional<double>& at(Modality m);
  const std::optional<double>& at(Modality m) const;
  std::size_t present() const;
};

// One frame per timestamp in the union of all streams, ascending. Streams
// must share the grid step and phase and carry distinct modalities.
std::vector<AlignedFrame> align(std::span<const PredictionStream> streams);

// Weighted mean over the modalities present in each frame, with weights
// renormalised over those modalities.
PredictionStream fuse(std::span<const AlignedFrame> frames, const FusionWeights& weights,
                      std::int64_t step_s = kDefaultGridStep);

PredictionStream fuse_streams(std::span<const PredictionStream> streams, const FusionWeights& weights);

}  // namespace ictal
