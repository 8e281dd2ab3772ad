#include "ictal/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ictal/error.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "fusion";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

std::size_t slot(Modality m) {
  switch (m) {
    case Modality::Ecog: return 0;
    case Modality::Piezo: return 1;
    case Modality::Video: return 2;
    case Modality::Fused: break;
  }
  fail(ErrorKind::Validation, "a fused stream cannot be fused again");
}

}  // namespace

double FusionWeights::of(Modality m) const {
  switch (slot(m)) {
    case 0: return ecog;
    case 1: return piezo;
    default: return video;
  }
}

void FusionWeights::validate() const {
  for (double w : {ecog, piezo, video}) {
    if (!std::isfinite(w) || w < 0) fail(ErrorKind::Validation, "weights must be finite and non-negative");
  }
  if (ecog + piezo + video <= 0) fail(ErrorKind::Validation, "weights must not all be zero");
}

std::optional<double>& AlignedFrame::at(Modality m) { return probability[slot(m)]; }
const std::optional<double>& AlignedFrame::at(Modality m) const { return probability[slot(m)]; }

std::size_t AlignedFrame::present() const {
  return static_cast<std::size_t>(std::count_if(probability.begin(), probability.end(),
                                                [](const auto& p) { return p.has_value(); }));
}

std::vector<AlignedFrame> align(std::span<const PredictionStream> streams) {
  std::array<bool, 3> seen{};
  const PredictionStream* reference = nullptr;
  for (const auto& s : streams) {
    const auto k = slot(s.modality);
    if (seen[k]) fail(ErrorKind::Duplicate, "two streams for modality " + std::string(to_string(s.modality)));
    seen[k] = true;
    for (std::size_t i = 1; i < s.entries.size(); ++i) {
      if (s.entries[i].time == s.entries[i - 1].time) {
        fail(ErrorKind::Duplicate, std::string(to_string(s.modality)) + " stream repeats timestamp " +
                                       format_iso8601(s.entries[i].time));
      }
    }
    validate_stream(s);
    if (s.entries.empty()) continue;
    if (!reference) {
      reference = &s;
      continue;
    }
    const auto offset = (s.entries.front().time - reference->entries.front().time).count();
    if (s.step_s != reference->step_s || offset % s.step_s != 0) {
      fail(ErrorKind::Alignment, std::string(to_string(s.modality)) + " stream is not on the grid of the " +
                                     std::string(to_string(reference->modality)) + " stream");
    }
  }

  std::map<Timestamp, AlignedFrame> frames;
  for (const auto& s : streams) {
    for (const auto& e : s.entries) {
      auto& f = frames[e.time];
      f.time = e.time;
      f.at(s.modality) = e.probability;
    }
  }
  std::vector<AlignedFrame> out;
  out.reserve(frames.size());
  for (auto& [t, f] : frames) out.push_back(f);
  return out;
}

PredictionStream fuse(std::span<const AlignedFrame> frames, const FusionWeights& weights, std::int64_t step_s) {
  weights.validate();
  const double total = weights.ecog + weights.piezo + weights.video;
  const std::array<double, 3> w = {weights.ecog / total, weights.piezo / total, weights.video / total};

  PredictionStream out;
  out.modality = Modality::Fused;
  out.step_s = step_s;
  out.entries.reserve(frames.size());
  for (const auto& f : frames) {
    double num = 0.0, den = 0.0;
    double lo = 1.0, hi = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      if (!f.probability[k]) continue;
      const double p = *f.probability[k];
      lo = std::min(lo, p);
      hi = std::max(hi, p);
      num += w[k] * p;
      den += w[k];
    }
    if (f.present() == 0) fail(ErrorKind::Validation, "frame at " + format_iso8601(f.time) + " has no modality");
    if (den <= 0) {
      fail(ErrorKind::ZeroWeight, "frame at " + format_iso8601(f.time) + " has zero weight over its present modalities");
    }
    // The weighted mean is convex; clamping removes last-bit rounding drift.
    out.entries.push_back({f.time, std::clamp(num / den, lo, hi)});
  }
  validate_stream(out);
  return out;
}

PredictionStream fuse_streams(std::span<const PredictionStream> streams, const FusionWeights& weights) {
  std::int64_t step = kDefaultGridStep;
  for (const auto& s : streams) {
    if (!s.empty()) {
      step = s.step_s;
      break;
    }
  }
  const auto frames = align(streams);
  return fuse(frames, weights, step);
}

}  // namespace ictal
