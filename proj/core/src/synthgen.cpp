#include "ictal/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ictal/error.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "synthgen";
constexpr std::int64_t kEdgeMarginS = 60;
constexpr double kWanderRateHz = 10.0;

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

// Independent generator per purpose so tweaking one modality never shifts
// another modality's random stream.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), purpose, 0x5eed5u};
  return std::mt19937_64(seq);
}

enum Purpose : std::uint32_t {
  kSeizures = 1,
  kEcogBackground,
  kEcogBurst,
  kEcogDistractors,
  kPiezoBackground,
  kPiezoBurst,
  kPiezoDistractors,
  kVideo,
};

std::vector<PlantedBurst> place_seizures(const SynthConfig& c) {
  if (c.seizure_min_s < 1 || c.seizure_max_s < c.seizure_min_s) {
    fail(ErrorKind::Validation, "seizure duration range must satisfy 1 <= min <= max");
  }
  auto rng = stream_rng(c.seed, kSeizures);
  std::uniform_int_distribution<std::int64_t> dur(c.seizure_min_s, c.seizure_max_s);
  std::vector<std::int64_t> durations(c.n_seizures);
  std::int64_t total = 0;
  for (auto& d : durations) total += (d = dur(rng));
  const std::int64_t slack = c.duration_s - total -
                             static_cast<std::int64_t>(c.n_seizures > 0 ? c.n_seizures - 1 : 0) * c.min_separation_s -
                             2 * kEdgeMarginS;
  if (slack < 0) {
    fail(ErrorKind::Packing, std::to_string(c.n_seizures) + " seizures with " + std::to_string(c.min_separation_s) +
                                 " s separation do not fit in " + std::to_string(c.duration_s) + " s");
  }
  // Sorted uniform cut points distribute the slack between the gaps.
  std::uniform_int_distribution<std::int64_t> cut(0, slack);
  std::vector<std::int64_t> cuts(c.n_seizures);
  for (auto& x : cuts) x = cut(rng);
  std::sort(cuts.begin(), cuts.end());
  std::vector<PlantedBurst> out;
  std::int64_t cursor = kEdgeMarginS;
  std::int64_t used_slack = 0;
  for (std::size_t i = 0; i < c.n_seizures; ++i) {
    cursor += cuts[i] - used_slack;
    used_slack = cuts[i];
    out.push_back({c.start_time + Seconds{cursor}, durations[i], 0.0});
    cursor += durations[i] + c.min_separation_s;
  }
  return out;
}

std::vector<PlantedBurst> place_distractors(const SynthConfig& c, const ModalityProfile& p,
                                            const std::vector<PlantedBurst>& seizures, std::mt19937_64 rng) {
  const double expected = p.distractor_rate_per_hour * static_cast<double>(c.duration_s) / 3600.0;
  std::vector<PlantedBurst> out;
  if (expected <= 0 || p.distractor_max_s < p.distractor_min_s || p.distractor_min_s < 1) return out;
  const auto count = std::poisson_distribution<std::int64_t>(expected)(rng);
  std::uniform_int_distribution<std::int64_t> dur(p.distractor_min_s, p.distractor_max_s);
  std::uniform_real_distribution<double> level(p.distractor_rms_lo, p.distractor_rms_hi);
  const std::int64_t latest = c.duration_s - p.distractor_max_s;
  if (latest <= 0) return out;
  std::uniform_int_distribution<std::int64_t> start(0, latest);
  for (std::int64_t k = 0; k < count; ++k) {
    const auto d = dur(rng);
    const auto s = start(rng);
    const double rms = level(rng) * p.burst_rms;
    const Timestamp t = c.start_time + Seconds{s};
    // Keep a full window of clearance so distractor windows stay negative.
    const bool clear = std::none_of(seizures.begin(), seizures.end(), [&](const PlantedBurst& z) {
      return t < z.start_time + Seconds{z.duration_s + c.window_s} && z.start_time < t + Seconds{d + c.window_s};
    });
    if (clear) out.push_back({t, d, rms});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.start_time < b.start_time; });
  return out;
}

// Sum of random tones inside the band with a raised-cosine envelope.
void add_burst(std::vector<float>& x, const SynthConfig& c, const ModalityProfile& p, const PlantedBurst& b,
               std::mt19937_64& rng) {
  const double rate = static_cast<double>(p.rate_hz);
  const auto first = static_cast<std::size_t>((b.start_time - c.start_time).count() * p.rate_hz);
  const auto count = static_cast<std::size_t>(b.duration_s * p.rate_hz);
  const std::uint32_t tones = std::max<std::uint32_t>(1, p.burst_tones);
  std::uniform_real_distribution<double> freq(p.burst_band.lo_hz, p.burst_band.hi_hz);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> f(tones), ph(tones);
  for (std::uint32_t k = 0; k < tones; ++k) {
    f[k] = freq(rng);
    ph[k] = phase(rng);
  }
  const double amp = b.rms / std::sqrt(tones / 2.0);
  const double ramp = std::min(2.0, b.duration_s / 4.0) * rate;
  for (std::size_t i = 0; i < count && first + i < x.size(); ++i) {
    const double t = static_cast<double>(i) / rate;
    double env = 1.0;
    const double from_edge = std::min<double>(static_cast<double>(i), static_cast<double>(count - 1 - i));
    if (from_edge < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * from_edge / ramp);
    double v = 0.0;
    for (std::uint32_t k = 0; k < tones; ++k) v += std::sin(2.0 * std::numbers::pi * f[k] * t + ph[k]);
    x[first + i] += static_cast<float>(env * amp * v);
  }
}

std::vector<float> background(const SynthConfig& c, const ModalityProfile& p, std::mt19937_64 rng) {
  const auto n = static_cast<std::size_t>(c.duration_s * p.rate_hz);
  const double rate = static_cast<double>(p.rate_hz);
  std::vector<float> x(n);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Slow gain drift: log-normal knots, linearly interpolated.
  const auto block = static_cast<std::size_t>(std::max(1.0, p.gain_block_s * rate));
  const std::size_t knots = n / block + 2;
  // Per-recording electrode offset and gain, then slow drift around them.
  const double offset = std::uniform_real_distribution<double>(-p.animal_offset_max, p.animal_offset_max)(rng);
  const double animal_gain = std::exp(p.animal_gain_log_sigma * normal(rng));
  std::vector<double> gain(knots);
  for (auto& g : gain) g = animal_gain * std::exp(p.gain_log_sigma * normal(rng));

  // Wander is slow, so it is simulated on a coarse grid and interpolated.
  const std::size_t coarse = std::max<std::size_t>(1, static_cast<std::size_t>(rate / kWanderRateHz));
  const double dt = static_cast<double>(coarse) / rate;
  const double rho = p.wander_tau_s > 0 ? std::exp(-dt / p.wander_tau_s) : 0.0;
  const double wander_step = p.wander_std * std::sqrt(1.0 - rho * rho);
  std::vector<double> wander(n / coarse + 2);
  wander[0] = p.wander_std * normal(rng);
  for (std::size_t k = 1; k < wander.size(); ++k) wander[k] = rho * wander[k - 1] + wander_step * normal(rng);

  // One or two cascaded AR(1) stages, scaled to unit variance.
  const double phi = std::clamp(p.ar_coefficient, 0.0, 0.999);
  const double innovation = std::sqrt(1.0 - phi * phi);
  const bool cascade = p.ar_stages >= 2;
  const double norm = cascade ? std::sqrt((1.0 - phi * phi) / (1.0 + phi * phi)) : 1.0;
  double ar = normal(rng);
  double ar2 = ar / norm;
  for (std::size_t i = 0; i < n; ++i) {
    ar = phi * ar + innovation * normal(rng);
    ar2 = phi * ar2 + innovation * ar;
    const std::size_t k = i / block;
    const double g = gain[k] + (gain[k + 1] - gain[k]) * static_cast<double>(i % block) / static_cast<double>(block);
    const std::size_t j = i / coarse;
    const double w = wander[j] + (wander[j + 1] - wander[j]) * static_cast<double>(i % coarse) / static_cast<double>(coarse);
    x[i] = static_cast<float>(offset + p.noise_std * g * (cascade ? ar2 * norm : ar) + w + p.white_std * normal(rng));
  }
  return x;
}

SignalRecording synth_modality(const SynthConfig& c, const ModalityProfile& p, const std::vector<PlantedBurst>& seizures,
                               const std::vector<PlantedBurst>& distractors, Purpose bg, Purpose burst) {
  if (p.rate_hz < 1) fail(ErrorKind::Validation, "sample rate must be positive");
  auto x = background(c, p, stream_rng(c.seed, bg));
  auto rng = stream_rng(c.seed, burst);
  for (const auto& s : seizures) add_burst(x, c, p, PlantedBurst{s.start_time, s.duration_s, p.burst_rms}, rng);
  for (const auto& d : distractors) add_burst(x, c, p, d, rng);
  return SignalRecording(std::move(x), Rational(p.rate_hz), c.start_time, p.channel_label, p.physical_dimension,
                         c.animal_id);
}

PredictionStream synth_video(const SynthConfig& c, const std::vector<SeizureAnnotation>& truth) {
  PredictionStream s;
  s.modality = Modality::Video;
  s.step_s = c.stride_s;
  const Timestamp first = align_up_to_grid(c.start_time, c.stride_s);
  const auto offset = (first - c.start_time).count();
  if (c.duration_s - offset < c.window_s) return s;
  const auto n = static_cast<std::size_t>((c.duration_s - offset - c.window_s) / c.stride_s + 1);

  auto rng = stream_rng(c.seed, kVideo);
  const auto per_clip = static_cast<std::size_t>(std::max<std::int64_t>(1, c.video_clip_s / c.stride_s));
  const std::size_t clips = (n + per_clip - 1) / per_clip;
  const auto covered = static_cast<std::size_t>(
      std::llround(std::clamp(c.video_coverage_fraction, 0.0, 1.0) * static_cast<double>(clips)));
  std::vector<std::size_t> order(clips);
  for (std::size_t i = 0; i < clips; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::uint8_t> use(clips, 0);
  for (std::size_t i = 0; i < covered; ++i) use[order[i]] = 1;

  std::bernoulli_distribution flip(std::clamp(c.video_flip_probability, 0.0, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    const bool flipped = flip(rng);  // drawn for every point to keep coverage independent
    if (!use[i / per_clip]) continue;
    const Timestamp t = first + Seconds{static_cast<std::int64_t>(i) * c.stride_s};
    const bool label = window_label(t, c.window_s, truth) != 0;
    s.entries.push_back({t, (label != flipped) ? 0.9 : 0.1});
  }
  return s;
}

}  // namespace

// ECoG: steep 1/f-like background under a white sensor floor, so a burst is
// small per sample but concentrated in a few FFT bins. Electrode offset and
// gain differ per recording.
ModalityProfile SynthConfig::default_ecog() {
  ModalityProfile p;
  p.rate_hz = 500;
  p.noise_std = 50.0;
  p.ar_coefficient = 0.99;
  p.ar_stages = 2;
  p.white_std = 40.0;
  p.gain_log_sigma = 0.3;
  p.gain_block_s = 1800.0;
  p.animal_offset_max = 1000.0;
  p.animal_gain_log_sigma = 0.5;
  p.wander_std = 80.0;
  p.wander_tau_s = 3600.0;
  p.burst_band = {18.0, 24.0};
  p.burst_rms = 15.0;
  p.distractor_rate_per_hour = 1.0;
  p.distractor_min_s = 10;
  p.distractor_max_s = 40;
  p.distractor_rms_lo = 0.5;
  p.distractor_rms_hi = 1.0;
  p.physical_range = {-8000.0, 8000.0};
  p.channel_label = "ECoG";
  p.physical_dimension = "uV";
  return p;
}

// Piezo: movement band, weaker separation and frequent seizure-like bouts.
ModalityProfile SynthConfig::default_piezo() {
  ModalityProfile p;
  p.rate_hz = 120;
  p.noise_std = 20.0;
  p.ar_coefficient = 0.6;
  p.ar_stages = 1;
  p.white_std = 0.0;
  p.gain_log_sigma = 0.5;
  p.gain_block_s = 20.0;
  p.wander_std = 40.0;
  p.wander_tau_s = 10.0;
  p.burst_band = {3.0, 7.0};
  p.burst_rms = 14.0;
  p.distractor_rate_per_hour = 4.0;
  p.distractor_min_s = 10;
  p.distractor_max_s = 60;
  p.distractor_rms_lo = 0.6;
  p.distractor_rms_hi = 1.2;
  p.physical_range = {-1000.0, 1000.0};
  p.channel_label = "Piezo";
  p.physical_dimension = "mV";
  return p;
}

SynthDataset generate(const SynthConfig& c) {
  if (c.duration_s < 1 || c.stride_s < 1 || c.window_s < 1) fail(ErrorKind::Validation, "durations must be positive");
  const auto seizures = place_seizures(c);
  SynthDataset d;
  for (const auto& s : seizures) d.annotations.push_back({c.animal_id, s.start_time, s.duration_s});
  d.ecog_distractors = place_distractors(c, c.ecog, seizures, stream_rng(c.seed, kEcogDistractors));
  d.piezo_distractors = place_distractors(c, c.piezo, seizures, stream_rng(c.seed, kPiezoDistractors));
  d.ecog = synth_modality(c, c.ecog, seizures, d.ecog_distractors, kEcogBackground, kEcogBurst);
  d.piezo = synth_modality(c, c.piezo, seizures, d.piezo_distractors, kPiezoBackground, kPiezoBurst);
  d.video = synth_video(c, d.annotations);
  return d;
}

void write_dataset(const SynthDataset& data, const SynthConfig& config, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create '" + dir.string() + "': " + ec.message());
  write_edf(data.ecog, config.ecog.physical_range, dir / "ecog.edf");
  write_edf(data.piezo, config.piezo.physical_range, dir / "piezo.edf");
  write_annotations(data.annotations, dir / "annotations.csv");
  write_prediction_stream(data.video, dir / "predictions_video.csv");
}

}  // namespace ictal
