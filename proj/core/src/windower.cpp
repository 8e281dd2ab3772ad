#include "ictal/windower.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "binary_io.hpp"
#include "ictal/error.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "windower";
constexpr std::uint32_t kWindowSetVersion = 1;
constexpr char kWindowSetMagic[4] = {'I', 'C', 'T', 'W'};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

}  // namespace

LabeledWindowSet::LabeledWindowSet(std::shared_ptr<const std::vector<float>> buffer, std::vector<std::size_t> offsets,
                                   std::vector<Timestamp> start_times, std::vector<std::uint8_t> labels,
                                   std::size_t window_len, std::int64_t window_s, std::int64_t stride_s,
                                   Rational sample_rate_hz)
    : buffer_(std::move(buffer)),
      offsets_(std::move(offsets)),
      start_times_(std::move(start_times)),
      labels_(std::move(labels)),
      window_len_(window_len),
      window_s_(window_s),
      stride_s_(stride_s),
      sample_rate_(sample_rate_hz) {
  if (offsets_.size() != start_times_.size() || offsets_.size() != labels_.size()) {
    fail(ErrorKind::Shape, "offsets, start times and labels differ in length");
  }
  if (!offsets_.empty() && (!buffer_ || offsets_.back() + window_len_ > buffer_->size())) {
    fail(ErrorKind::Bounds, "window extends past the sample buffer");
  }
}

std::size_t LabeledWindowSet::count_positive() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

LabeledWindowSet LabeledWindowSet::subset(std::span<const std::size_t> rows) const {
  std::vector<std::size_t> offsets;
  std::vector<Timestamp> times;
  std::vector<std::uint8_t> labels;
  offsets.reserve(rows.size());
  times.reserve(rows.size());
  labels.reserve(rows.size());
  for (auto r : rows) {
    if (r >= size()) fail(ErrorKind::Bounds, "row " + std::to_string(r) + " out of range");
    offsets.push_back(offsets_[r]);
    times.push_back(start_times_[r]);
    labels.push_back(labels_[r]);
  }
  return LabeledWindowSet(buffer_, std::move(offsets), std::move(times), std::move(labels), window_len_, window_s_,
                          stride_s_, sample_rate_);
}

std::uint8_t window_label(Timestamp window_start, std::int64_t window_s,
                          std::span<const SeizureAnnotation> annotations) {
  const Timestamp window_end = window_start + Seconds{window_s};
  for (const auto& a : annotations) {
    if (a.start_time < window_end && window_start < a.end_time()) return 1;
  }
  return 0;
}

LabeledWindowSet make_windows(const SignalRecording& rec, std::span<const SeizureAnnotation> annotations,
                              std::int64_t window_s, std::int64_t stride_s) {
  if (window_s < 1 || stride_s < 1) fail(ErrorKind::Validation, "window and stride must be positive");
  const Rational rate = rec.sample_rate_hz();
  const Rational window_samples = Rational(window_s) * rate;
  const Rational stride_samples = Rational(stride_s) * rate;
  if (!window_samples.is_integer() || !stride_samples.is_integer()) {
    fail(ErrorKind::RateIncompatible, "window " + std::to_string(window_s) + " s / stride " +
                                          std::to_string(stride_s) + " s at " + to_string(rate) +
                                          " Hz is not a whole number of samples");
  }
  const Timestamp first = align_up_to_grid(rec.start_time(), stride_s);
  const Rational offset_samples = Rational((first - rec.start_time()).count()) * rate;
  if (!offset_samples.is_integer()) {
    fail(ErrorKind::RateIncompatible, "grid offset is not a whole number of samples at " + to_string(rate) + " Hz");
  }
  const auto len = static_cast<std::size_t>(window_samples.num);
  const auto step = static_cast<std::size_t>(stride_samples.num);
  const auto offset = static_cast<std::size_t>(offset_samples.num);
  if (rec.size() < offset + len) {
    fail(ErrorKind::TooShort, "recording of " + to_string(rec.duration_seconds()) +
                                  " s cannot hold one grid-aligned " + std::to_string(window_s) + " s window");
  }
  const std::size_t n = (rec.size() - offset - len) / step + 1;

  std::vector<std::size_t> offsets(n);
  std::vector<Timestamp> times(n);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i] = offset + i * step;
    times[i] = first + Seconds{static_cast<std::int64_t>(i) * stride_s};
    labels[i] = window_label(times[i], window_s, annotations);
  }
  return LabeledWindowSet(rec.buffer(), std::move(offsets), std::move(times), std::move(labels), len, window_s,
                          stride_s, rate);
}

LabeledWindowSet undersample(const LabeledWindowSet& set, double target_neg_per_pos, std::uint64_t seed) {
  if (!(target_neg_per_pos > 0.0) || !std::isfinite(target_neg_per_pos)) {
    fail(ErrorKind::Validation, "target negatives per positive must be a positive number");
  }
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < set.size(); ++i) (set.labels()[i] ? pos : neg).push_back(i);
  if (pos.empty()) fail(ErrorKind::NoPositiveClass, "undersampling needs at least one positive window");

  const auto wanted = static_cast<std::size_t>(std::llround(target_neg_per_pos * static_cast<double>(pos.size())));
  const std::size_t take = std::min(wanted, neg.size());
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `take` slots become a uniform sample.
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, neg.size() - 1);
    std::swap(neg[i], neg[pick(rng)]);
  }
  std::vector<std::size_t> rows(pos);
  rows.insert(rows.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(take));
  std::sort(rows.begin(), rows.end());
  return set.subset(rows);
}

void save_window_set(const LabeledWindowSet& set, const std::filesystem::path& path) {
  detail::ByteWriter w;
  for (char c : kWindowSetMagic) w.put<char>(c);
  w.put<std::uint32_t>(kWindowSetVersion);
  w.put<std::uint64_t>(set.size());
  w.put<std::uint64_t>(set.window_len());
  w.put<std::int64_t>(set.window_s());
  w.put<std::int64_t>(set.stride_s());
  w.put<std::int64_t>(set.sample_rate_hz().num);
  w.put<std::int64_t>(set.sample_rate_hz().den);
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (float x : set.window(i)) w.put<float>(x);
  }
  for (auto t : set.start_times()) w.put<std::int64_t>(t.time_since_epoch().count());
  for (auto l : set.labels()) w.put<std::uint8_t>(l);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(w.bytes().data()), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

LabeledWindowSet load_window_set(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  detail::ByteReader r(bytes);
  for (char c : kWindowSetMagic) {
    if (r.get<char>() != c) fail(ErrorKind::Format, "'" + path.string() + "' is not a window-set file");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kWindowSetVersion) {
    fail(ErrorKind::Format, "window-set version " + std::to_string(version) + " is not supported");
  }
  const auto n = r.get<std::uint64_t>();
  const auto len = r.get<std::uint64_t>();
  const auto window_s = r.get<std::int64_t>();
  const auto stride_s = r.get<std::int64_t>();
  const auto rate_num = r.get<std::int64_t>();
  const auto rate_den = r.get<std::int64_t>();
  if (!r.ok() || rate_num <= 0 || rate_den <= 0 || (len != 0 && n > r.remaining() / (len * 4))) {
    fail(ErrorKind::Truncation, "window-set header or dimensions are inconsistent with the file size");
  }
  auto buffer = std::make_shared<std::vector<float>>(n * len);
  for (auto& x : *buffer) x = r.get<float>();
  std::vector<std::size_t> offsets(n);
  std::vector<Timestamp> times(n);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i] = i * len;
    times[i] = Timestamp{Seconds{r.get<std::int64_t>()}};
  }
  for (auto& l : labels) l = r.get<std::uint8_t>();
  if (!r.ok()) fail(ErrorKind::Truncation, "window-set file '" + path.string() + "' is truncated");
  return LabeledWindowSet(std::move(buffer), std::move(offsets), std::move(times), std::move(labels), len, window_s,
                          stride_s, Rational(rate_num, rate_den));
}

}  // namespace ictal
