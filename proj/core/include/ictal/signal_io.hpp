#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ictal/rational.hpp"
#include "ictal/timeutil.hpp"

namespace ictal {

// Uniformly sampled single-channel signal. Immutable once built; copies share
// the sample buffer, so recordings are cheap to pass around and safe to read
// from several threads.
class SignalRecording {
 public:
  SignalRecording() = default;
  SignalRecording(std::vector<float> samples, Rational sample_rate_hz, Timestamp start_time,
                  std::string channel_label = {}, std::string physical_dimension = {},
                  std::string subject_id = {});

  std::span<const float> samples() const {
    return buffer_ ? std::span<const float>(*buffer_) : std::span<const float>{};
  }
  const std::shared_ptr<const std::vector<float>>& buffer() const { return buffer_; }
  std::size_t size() const { return buffer_ ? buffer_->size() : 0; }

  Rational sample_rate_hz() const { return sample_rate_; }
  Timestamp start_time() const { return start_time_; }
  const std::string& channel_label() const { return channel_label_; }
  const std::string& physical_dimension() const { return physical_dimension_; }
  // EDF "local patient identification"; the animal id for annotation lookup.
  const std::string& subject_id() const { return subject_id_; }

  // len(samples) / sample_rate_hz, exact.
  Rational duration_seconds() const { return Rational(static_cast<std::int64_t>(size())) / sample_rate_; }

 private:
  std::shared_ptr<const std::vector<float>> buffer_;
  Rational sample_rate_{1};
  Timestamp start_time_{};
  std::string channel_label_;
  std::string physical_dimension_;
  std::string subject_id_;
};

struct PhysicalRange {
  double min = -1.0;
  double max = 1.0;
};

constexpr std::int32_t kEdfDigitalMin = -32768;
constexpr std::int32_t kEdfDigitalMax = 32767;
constexpr std::size_t kEdfFixedHeaderBytes = 256;
constexpr std::size_t kEdfSignalHeaderBytes = 256;

SignalRecording read_edf(const std::filesystem::path& path);
SignalRecording parse_edf(std::span<const std::uint8_t> bytes);

// Single signal, 1 s data records, full 16-bit digital range. Samples outside
// the physical range are clamped to its edges.
void write_edf(const SignalRecording& recording, PhysicalRange range, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_edf(const SignalRecording& recording, PhysicalRange range);

// EDF linear scaling, exposed for tests and tools.
double edf_digital_to_physical(std::int32_t digital, std::int32_t dig_min, std::int32_t dig_max,
                               double phys_min, double phys_max);
std::int32_t edf_physical_to_digital(double physical, std::int32_t dig_min, std::int32_t dig_max,
                                     double phys_min, double phys_max);

struct SeizureAnnotation {
  std::string animal_id;
  Timestamp start_time{};
  std::int64_t duration_s = 0;

  Timestamp end_time() const { return start_time + Seconds{duration_s}; }
  friend bool operator==(const SeizureAnnotation&, const SeizureAnnotation&) = default;
};

// CSV with header `animal_id,start_time,duration_s`. Result is sorted by
// (animal_id, start_time); overlapping rows for one animal are rejected.
std::vector<SeizureAnnotation> read_annotations(const std::filesystem::path& path);
std::vector<SeizureAnnotation> parse_annotations(std::string_view csv);
void write_annotations(std::span<const SeizureAnnotation> annotations, const std::filesystem::path& path);
std::string format_annotations(std::span<const SeizureAnnotation> annotations);

std::vector<SeizureAnnotation> annotations_for(std::span<const SeizureAnnotation> annotations,
                                               std::string_view animal_id);

enum class Modality { Ecog, Piezo, Video, Fused };

std::string_view to_string(Modality m);
Modality parse_modality(std::string_view text);

struct PredictionEntry {
  Timestamp time{};
  double probability = 0.0;
  friend bool operator==(const PredictionEntry&, const PredictionEntry&) = default;
};

constexpr std::int64_t kDefaultGridStep = 10;

// Probabilities keyed by timestamps on a common step-second grid. Gaps are
// allowed; timestamps are strictly increasing.
struct PredictionStream {
  Modality modality = Modality::Ecog;
  std::int64_t step_s = kDefaultGridStep;
  std::vector<PredictionEntry> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  friend bool operator==(const PredictionStream&, const PredictionStream&) = default;
};

// Throws Validation / Ordering / GridAlignment errors.
void validate_stream(const PredictionStream& stream);

PredictionStream read_prediction_stream(const std::filesystem::path& path, Modality modality,
                                        std::int64_t step_s = kDefaultGridStep);
PredictionStream parse_prediction_stream(std::string_view csv, Modality modality,
                                         std::int64_t step_s = kDefaultGridStep);
void write_prediction_stream(const PredictionStream& stream, const std::filesystem::path& path);
std::string format_prediction_stream(const PredictionStream& stream);

// Shortest round-trip fixed notation with at least six decimals.
std::string format_probability(double p);

std::string read_text_file(const std::filesystem::path& path, std::string_view module);
void write_text_file(const std::filesystem::path& path, std::string_view contents, std::string_view module);

}  // namespace ictal
