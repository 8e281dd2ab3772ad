#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ictal {

// Absolute UTC time at 1 s resolution.
using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

// Strict "YYYY-MM-DDTHH:MM:SSZ". Returns nullopt on any deviation.
std::optional<Timestamp> parse_iso8601(std::string_view text);
std::string format_iso8601(Timestamp t);

// EDF header fields: "dd.mm.yy" and "hh.mm.ss". Two-digit years 85-99 map to
// 19xx, 00-84 to 20xx.
std::optional<Timestamp> parse_edf_datetime(std::string_view date, std::string_view time);
std::string format_edf_date(Timestamp t);
std::string format_edf_time(Timestamp t);

// First point of the step-second grid anchored at midnight UTC that is >= t.
Timestamp align_up_to_grid(Timestamp t, std::int64_t step_s);
// Offset of t from the grid anchored at midnight UTC, in [0, step_s).
std::int64_t grid_phase(Timestamp t, std::int64_t step_s);

}  // namespace ictal
