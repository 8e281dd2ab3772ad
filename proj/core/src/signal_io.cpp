#include "ictal/signal_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ictal/error.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "signal-io";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Header field descriptor: offset into the header and width in bytes.
struct Field {
  std::size_t offset;
  std::size_t width;
};

constexpr Field kVersion{0, 8};
constexpr Field kPatient{8, 80};
constexpr Field kStartDate{168, 8};
constexpr Field kStartTime{176, 8};
constexpr Field kHeaderBytes{184, 8};
constexpr Field kReserved{192, 44};
constexpr Field kNumRecords{236, 8};
constexpr Field kRecordDuration{244, 8};
constexpr Field kNumSignals{252, 4};

// Per-signal fields for a single-signal header (ns = 1).
constexpr Field kLabel{256, 16};
constexpr Field kTransducer{272, 80};
constexpr Field kPhysDim{352, 8};
constexpr Field kPhysMin{360, 8};
constexpr Field kPhysMax{368, 8};
constexpr Field kDigMin{376, 8};
constexpr Field kDigMax{384, 8};
constexpr Field kPrefilter{392, 80};
constexpr Field kSamplesPerRecord{472, 8};
constexpr Field kSignalReserved{480, 32};

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string_view raw(Field f) const {
    return {reinterpret_cast<const char*>(bytes_.data()) + f.offset, f.width};
  }

  std::string_view text(Field f) const { return trim(raw(f)); }

  std::int64_t integer(Field f, const char* name) const {
    const auto s = text(f);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) bad(f, name);
    return v;
  }

  double real(Field f, const char* name) const {
    const auto s = text(f);
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) bad(f, name);
    return v;
  }

  [[noreturn]] void bad(Field f, const char* name) const {
    fail(ErrorKind::Format, std::string("malformed ") + name + " field '" + std::string(raw(f)) +
                                "' at byte offset " + std::to_string(f.offset));
  }

 private:
  std::span<const std::uint8_t> bytes_;
};

// Right-pads or rejects values that do not fit their fixed-width field.
void put_field(std::string& header, Field f, std::string_view value) {
  std::string v(value.substr(0, f.width));
  v.resize(f.width, ' ');
  header.replace(f.offset, f.width, v);
}

// Shortest decimal representation that fits into 8 characters.
std::string fit_number(double v) {
  for (int precision = 8; precision >= 1; --precision) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    std::string s(buf);
    if (s.size() <= 8 && s.find('e') == std::string::npos) return s;
  }
  fail(ErrorKind::Validation, "physical range value " + std::to_string(v) + " does not fit an 8-byte EDF field");
}

bool printable_ascii(std::uint8_t c) { return c >= 0x20 && c <= 0x7e; }

}  // namespace

SignalRecording::SignalRecording(std::vector<float> samples, Rational sample_rate_hz, Timestamp start_time,
                                 std::string channel_label, std::string physical_dimension,
                                 std::string subject_id)
    : buffer_(std::make_shared<const std::vector<float>>(std::move(samples))),
      sample_rate_(sample_rate_hz),
      start_time_(start_time),
      channel_label_(std::move(channel_label)),
      physical_dimension_(std::move(physical_dimension)),
      subject_id_(std::move(subject_id)) {
  if (!sample_rate_.positive()) fail(ErrorKind::Validation, "sample rate must be positive");
}

double edf_digital_to_physical(std::int32_t digital, std::int32_t dig_min, std::int32_t dig_max, double phys_min,
                               double phys_max) {
  return (static_cast<double>(digital) - dig_min) * (phys_max - phys_min) / (static_cast<double>(dig_max) - dig_min) +
         phys_min;
}

std::int32_t edf_physical_to_digital(double physical, std::int32_t dig_min, std::int32_t dig_max, double phys_min,
                                     double phys_max) {
  const double x = std::clamp(physical, phys_min, phys_max);
  const double d = (x - phys_min) * (static_cast<double>(dig_max) - dig_min) / (phys_max - phys_min) + dig_min;
  const auto r = static_cast<std::int32_t>(std::lround(d));
  return std::clamp(r, dig_min, dig_max);
}

SignalRecording parse_edf(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kEdfFixedHeaderBytes) {
    fail(ErrorKind::Format, "file has " + std::to_string(bytes.size()) +
                                " bytes, shorter than the 256-byte fixed header (byte offset 0)");
  }
  HeaderReader h(bytes);
  for (std::size_t i = 0; i < kEdfFixedHeaderBytes; ++i) {
    if (!printable_ascii(bytes[i])) {
      fail(ErrorKind::Format, "non-ASCII header byte at byte offset " + std::to_string(i));
    }
  }
  if (h.raw(kVersion) != std::string_view("0       ")) h.bad(kVersion, "version");

  const auto ns = h.integer(kNumSignals, "number-of-signals");
  if (ns < 1) h.bad(kNumSignals, "number-of-signals");
  if (ns > 1) {
    fail(ErrorKind::UnsupportedLayout, "file declares " + std::to_string(ns) + " signals; only single-signal files are supported");
  }
  if (h.text(kReserved).substr(0, 5) == "EDF+D") {
    fail(ErrorKind::UnsupportedLayout, "EDF+ discontinuous files are not supported");
  }
  const auto header_bytes = h.integer(kHeaderBytes, "header-bytes");
  const std::size_t expected_header = kEdfFixedHeaderBytes + kEdfSignalHeaderBytes * static_cast<std::size_t>(ns);
  if (header_bytes < 0 || static_cast<std::size_t>(header_bytes) != expected_header) h.bad(kHeaderBytes, "header-bytes");
  if (bytes.size() < expected_header) {
    fail(ErrorKind::Format, "file ends inside the signal header at byte offset " + std::to_string(bytes.size()));
  }
  for (std::size_t i = kEdfFixedHeaderBytes; i < expected_header; ++i) {
    if (!printable_ascii(bytes[i])) {
      fail(ErrorKind::Format, "non-ASCII header byte at byte offset " + std::to_string(i));
    }
  }

  const auto start = parse_edf_datetime(h.raw(kStartDate), h.raw(kStartTime));
  if (!start) {
    fail(ErrorKind::Format, "malformed start date/time '" + std::string(h.raw(kStartDate)) + " " +
                                std::string(h.raw(kStartTime)) + "' at byte offset " + std::to_string(kStartDate.offset));
  }
  const auto record_duration = parse_decimal_rational(h.text(kRecordDuration));
  if (!record_duration || !record_duration->positive()) h.bad(kRecordDuration, "record-duration");
  const auto declared_records = h.integer(kNumRecords, "number-of-records");
  if (declared_records < -1) h.bad(kNumRecords, "number-of-records");

  const double phys_min = h.real(kPhysMin, "physical-minimum");
  const double phys_max = h.real(kPhysMax, "physical-maximum");
  const auto dig_min = h.integer(kDigMin, "digital-minimum");
  const auto dig_max = h.integer(kDigMax, "digital-maximum");
  if (dig_min < kEdfDigitalMin || dig_min > kEdfDigitalMax) h.bad(kDigMin, "digital-minimum");
  if (dig_max < kEdfDigitalMin || dig_max > kEdfDigitalMax) h.bad(kDigMax, "digital-maximum");
  if (dig_min == dig_max) {
    fail(ErrorKind::DegenerateScaling, "digital minimum equals digital maximum (" + std::to_string(dig_min) + ")");
  }
  if (dig_min > dig_max) h.bad(kDigMax, "digital-maximum");
  if (phys_min == phys_max) {
    fail(ErrorKind::DegenerateScaling, "physical minimum equals physical maximum");
  }
  const auto spr = h.integer(kSamplesPerRecord, "samples-per-record");
  if (spr < 1) h.bad(kSamplesPerRecord, "samples-per-record");

  const std::size_t record_bytes = static_cast<std::size_t>(spr) * 2;
  const std::size_t data_bytes = bytes.size() - expected_header;
  const std::size_t actual_records = data_bytes / record_bytes;
  std::size_t n_records = 0;
  if (declared_records == -1) {
    if (data_bytes % record_bytes != 0) {
      fail(ErrorKind::Truncation, "data ends inside a record: " + std::to_string(actual_records) +
                                      " complete records and " + std::to_string(data_bytes % record_bytes) +
                                      " trailing bytes");
    }
    n_records = actual_records;
  } else {
    n_records = static_cast<std::size_t>(declared_records);
    if (data_bytes < n_records * record_bytes) {
      fail(ErrorKind::Truncation, "expected " + std::to_string(n_records) + " data records, found " +
                                      std::to_string(actual_records) +
                                      (data_bytes % record_bytes ? " (last record partial)" : ""));
    }
  }

  std::vector<float> samples(n_records * static_cast<std::size_t>(spr));
  const std::uint8_t* p = bytes.data() + expected_header;
  const auto dmin = static_cast<std::int32_t>(dig_min);
  const auto dmax = static_cast<std::int32_t>(dig_max);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto raw = static_cast<std::int16_t>(static_cast<std::uint16_t>(p[2 * i]) |
                                               (static_cast<std::uint16_t>(p[2 * i + 1]) << 8));
    samples[i] = static_cast<float>(edf_digital_to_physical(raw, dmin, dmax, phys_min, phys_max));
  }
  const Rational rate = Rational(spr) / *record_duration;
  return SignalRecording(std::move(samples), rate, *start, std::string(h.text(kLabel)),
                         std::string(h.text(kPhysDim)), std::string(h.text(kPatient)));
}

SignalRecording read_edf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_edf(bytes);
}

std::vector<std::uint8_t> encode_edf(const SignalRecording& rec, PhysicalRange range) {
  if (!(range.min < range.max)) fail(ErrorKind::Validation, "physical range minimum must be below maximum");
  const Rational rate = rec.sample_rate_hz();
  if (!rate.is_integer()) {
    fail(ErrorKind::RateIncompatible, "sample rate " + to_string(rate) + " Hz does not fill 1 s data records");
  }
  const auto spr = static_cast<std::size_t>(rate.num);
  if (rec.size() % spr != 0) {
    fail(ErrorKind::Validation, "sample count " + std::to_string(rec.size()) + " is not a whole number of 1 s records");
  }
  const std::size_t n_records = rec.size() / spr;

  const std::string pmin_text = fit_number(range.min);
  const std::string pmax_text = fit_number(range.max);
  // Quantize against the values a reader will see, not the caller's doubles.
  const double pmin = std::stod(pmin_text);
  const double pmax = std::stod(pmax_text);
  if (!(pmin < pmax)) fail(ErrorKind::Validation, "physical range collapses after formatting");

  std::string header(kEdfFixedHeaderBytes + kEdfSignalHeaderBytes, ' ');
  put_field(header, kVersion, "0");
  put_field(header, kPatient, rec.subject_id().empty() ? "X" : rec.subject_id());
  put_field(header, Field{88, 80}, "Startdate " + format_edf_date(rec.start_time()));
  put_field(header, kStartDate, format_edf_date(rec.start_time()));
  put_field(header, kStartTime, format_edf_time(rec.start_time()));
  put_field(header, kHeaderBytes, std::to_string(header.size()));
  put_field(header, kNumRecords, std::to_string(n_records));
  put_field(header, kRecordDuration, "1");
  put_field(header, kNumSignals, "1");
  put_field(header, kLabel, rec.channel_label());
  put_field(header, kTransducer, "");
  put_field(header, kPhysDim, rec.physical_dimension());
  put_field(header, kPhysMin, pmin_text);
  put_field(header, kPhysMax, pmax_text);
  put_field(header, kDigMin, std::to_string(kEdfDigitalMin));
  put_field(header, kDigMax, std::to_string(kEdfDigitalMax));
  put_field(header, kPrefilter, "");
  put_field(header, kSamplesPerRecord, std::to_string(spr));
  put_field(header, kSignalReserved, "");
  for (char& c : header) {
    if (!printable_ascii(static_cast<std::uint8_t>(c))) c = '_';
  }

  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + rec.size() * 2);
  for (float x : rec.samples()) {
    const double v = std::isnan(x) ? 0.5 * (pmin + pmax) : static_cast<double>(x);
    const auto d = static_cast<std::uint16_t>(
        static_cast<std::int16_t>(edf_physical_to_digital(v, kEdfDigitalMin, kEdfDigitalMax, pmin, pmax)));
    out.push_back(static_cast<std::uint8_t>(d & 0xff));
    out.push_back(static_cast<std::uint8_t>(d >> 8));
  }
  return out;
}

void write_edf(const SignalRecording& rec, PhysicalRange range, const std::filesystem::path& path) {
  const auto bytes = encode_edf(rec, range);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path, std::string_view module) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, module, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents, std::string_view module) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, module, "cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::Io, module, "write to '" + path.string() + "' failed");
}

namespace {

// Splits CSV text into lines, dropping a single trailing newline and '\r'.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

[[noreturn]] void row_error(ErrorKind kind, std::size_t line, const std::string& msg) {
  fail(kind, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::vector<SeizureAnnotation> parse_annotations(std::string_view csv) {
  const auto lines = split_lines(csv);
  if (lines.empty() || lines[0] != "animal_id,start_time,duration_s") {
    fail(ErrorKind::Format, "line 1: expected header 'animal_id,start_time,duration_s'");
  }
  struct Row {
    SeizureAnnotation ann;
    std::size_t line;
  };
  std::vector<Row> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) break;
      row_error(ErrorKind::Format, line_no, "empty row");
    }
    const auto f = split_fields(lines[i]);
    if (f.size() != 3) row_error(ErrorKind::Format, line_no, "expected 3 fields, found " + std::to_string(f.size()));
    if (f[0].empty()) row_error(ErrorKind::Validation, line_no, "empty animal_id");
    for (char c : f[0]) {
      if (c == '"' || static_cast<unsigned char>(c) < 0x20) row_error(ErrorKind::Validation, line_no, "invalid animal_id");
    }
    const auto start = parse_iso8601(f[1]);
    if (!start) row_error(ErrorKind::Format, line_no, "unparseable start_time '" + std::string(f[1]) + "'");
    std::int64_t dur = 0;
    auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), dur);
    if (f[2].empty() || ec != std::errc{} || p != f[2].data() + f[2].size()) {
      row_error(ErrorKind::Format, line_no, "non-integer duration_s '" + std::string(f[2]) + "'");
    }
    if (dur < 1) row_error(ErrorKind::Validation, line_no, "duration_s must be positive, got " + std::to_string(dur));
    rows.push_back({SeizureAnnotation{std::string(f[0]), *start, dur}, line_no});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.ann.animal_id != b.ann.animal_id) return a.ann.animal_id < b.ann.animal_id;
    return a.ann.start_time < b.ann.start_time;
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& prev = rows[i - 1];
    const auto& cur = rows[i];
    if (prev.ann.animal_id == cur.ann.animal_id && cur.ann.start_time < prev.ann.end_time()) {
      fail(ErrorKind::Validation, "overlapping annotations for '" + cur.ann.animal_id + "' on lines " +
                                      std::to_string(prev.line) + " and " + std::to_string(cur.line));
    }
  }
  std::vector<SeizureAnnotation> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(r.ann));
  return out;
}

std::vector<SeizureAnnotation> read_annotations(const std::filesystem::path& path) {
  return parse_annotations(read_text_file(path, kModule));
}

std::string format_annotations(std::span<const SeizureAnnotation> annotations) {
  std::string out = "animal_id,start_time,duration_s\n";
  for (const auto& a : annotations) {
    out += a.animal_id + "," + format_iso8601(a.start_time) + "," + std::to_string(a.duration_s) + "\n";
  }
  return out;
}

void write_annotations(std::span<const SeizureAnnotation> annotations, const std::filesystem::path& path) {
  write_text_file(path, format_annotations(annotations), kModule);
}

std::vector<SeizureAnnotation> annotations_for(std::span<const SeizureAnnotation> annotations,
                                               std::string_view animal_id) {
  std::vector<SeizureAnnotation> out;
  for (const auto& a : annotations) {
    if (a.animal_id == animal_id) out.push_back(a);
  }
  return out;
}

std::string_view to_string(Modality m) {
  switch (m) {
    case Modality::Ecog: return "ecog";
    case Modality::Piezo: return "piezo";
    case Modality::Video: return "video";
    case Modality::Fused: return "fused";
  }
  return "unknown";
}

Modality parse_modality(std::string_view text) {
  if (text == "ecog") return Modality::Ecog;
  if (text == "piezo") return Modality::Piezo;
  if (text == "video") return Modality::Video;
  if (text == "fused") return Modality::Fused;
  fail(ErrorKind::Validation, "unknown modality '" + std::string(text) + "'");
}

void validate_stream(const PredictionStream& s) {
  if (s.step_s < 1) fail(ErrorKind::Validation, "grid step must be positive");
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    const auto& e = s.entries[i];
    if (!(e.probability >= 0.0 && e.probability <= 1.0)) {
      fail(ErrorKind::Validation, "entry " + std::to_string(i) + ": probability " + std::to_string(e.probability) +
                                      " outside [0,1]");
    }
    if (i > 0) {
      const auto& prev = s.entries[i - 1];
      if (e.time <= prev.time) {
        fail(ErrorKind::Ordering, "entry " + std::to_string(i) + ": timestamp " + format_iso8601(e.time) +
                                      " does not follow " + format_iso8601(prev.time));
      }
      if ((e.time - s.entries[0].time).count() % s.step_s != 0) {
        fail(ErrorKind::GridAlignment, "entry " + std::to_string(i) + ": timestamp " + format_iso8601(e.time) +
                                           " is off the " + std::to_string(s.step_s) + " s grid");
      }
    }
  }
}

PredictionStream parse_prediction_stream(std::string_view csv, Modality modality, std::int64_t step_s) {
  const auto lines = split_lines(csv);
  if (lines.empty() || lines[0] != "timestamp,probability") {
    fail(ErrorKind::Format, "line 1: expected header 'timestamp,probability'");
  }
  PredictionStream s;
  s.modality = modality;
  s.step_s = step_s;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) break;
      row_error(ErrorKind::Format, line_no, "empty row");
    }
    const auto f = split_fields(lines[i]);
    if (f.size() != 2) row_error(ErrorKind::Format, line_no, "expected 2 fields, found " + std::to_string(f.size()));
    const auto t = parse_iso8601(f[0]);
    if (!t) row_error(ErrorKind::Format, line_no, "unparseable timestamp '" + std::string(f[0]) + "'");
    double p = 0;
    auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), p);
    if (f[1].empty() || ec != std::errc{} || ptr != f[1].data() + f[1].size()) {
      row_error(ErrorKind::Format, line_no, "non-numeric probability '" + std::string(f[1]) + "'");
    }
    if (!(p >= 0.0 && p <= 1.0)) row_error(ErrorKind::Validation, line_no, "probability " + std::string(f[1]) + " outside [0,1]");
    if (!s.entries.empty()) {
      if (*t <= s.entries.back().time) {
        row_error(ErrorKind::Ordering, line_no, "timestamp " + std::string(f[0]) + " is not after the previous row");
      }
      if ((*t - s.entries.front().time).count() % step_s != 0) {
        row_error(ErrorKind::GridAlignment, line_no,
                  "timestamp " + std::string(f[0]) + " is off the " + std::to_string(step_s) + " s grid");
      }
    }
    s.entries.push_back({*t, p});
  }
  return s;
}

PredictionStream read_prediction_stream(const std::filesystem::path& path, Modality modality, std::int64_t step_s) {
  return parse_prediction_stream(read_text_file(path, kModule), modality, step_s);
}

std::string format_probability(double p) {
  char buf[400];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), p, std::chars_format::fixed);
  if (ec != std::errc{}) fail(ErrorKind::Validation, "cannot format probability");
  std::string s(buf, end);
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    s += '.';
    dot = s.size() - 1;
  }
  const auto decimals = s.size() - dot - 1;
  if (decimals < 6) s.append(6 - decimals, '0');
  return s;
}

std::string format_prediction_stream(const PredictionStream& stream) {
  validate_stream(stream);
  std::string out = "timestamp,probability\n";
  out.reserve(out.size() + stream.entries.size() * 32);
  for (const auto& e : stream.entries) {
    out += format_iso8601(e.time);
    out += ',';
    out += format_probability(e.probability);
    out += '\n';
  }
  return out;
}

void write_prediction_stream(const PredictionStream& stream, const std::filesystem::path& path) {
  write_text_file(path, format_prediction_stream(stream), kModule);
}

}  // namespace ictal
