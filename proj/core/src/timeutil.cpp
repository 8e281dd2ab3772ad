#include "ictal/timeutil.hpp"

#include <charconv>
#include <cstdio>

namespace ictal {
namespace {

using namespace std::chrono;

bool parse_digits(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto res = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return res.ec == std::errc{};
}

std::optional<Timestamp> make_timestamp(int y, int mo, int d, int h, int mi, int se) {
  if (mo < 1 || mo > 12 || d < 1 || h > 23 || mi > 59 || se > 59) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view s) {
  if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':' || s[19] != 'Z') {
    return std::nullopt;
  }
  int y, mo, d, h, mi, se;
  if (!parse_digits(s, 0, 4, y) || !parse_digits(s, 5, 2, mo) || !parse_digits(s, 8, 2, d) ||
      !parse_digits(s, 11, 2, h) || !parse_digits(s, 14, 2, mi) || !parse_digits(s, 17, 2, se)) {
    return std::nullopt;
  }
  return make_timestamp(y, mo, d, h, mi, se);
}

std::string format_iso8601(Timestamp t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

std::optional<Timestamp> parse_edf_datetime(std::string_view date, std::string_view time) {
  if (date.size() != 8 || time.size() != 8 || date[2] != '.' || date[5] != '.' || time[2] != '.' ||
      time[5] != '.') {
    return std::nullopt;
  }
  int d, mo, yy, h, mi, se;
  if (!parse_digits(date, 0, 2, d) || !parse_digits(date, 3, 2, mo) || !parse_digits(date, 6, 2, yy) ||
      !parse_digits(time, 0, 2, h) || !parse_digits(time, 3, 2, mi) || !parse_digits(time, 6, 2, se)) {
    return std::nullopt;
  }
  const int y = yy >= 85 ? 1900 + yy : 2000 + yy;
  return make_timestamp(y, mo, d, h, mi, se);
}

std::string format_edf_date(Timestamp t) {
  const year_month_day ymd{floor<days>(t)};
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%02u.%02u.%02d", static_cast<unsigned>(ymd.day()),
                static_cast<unsigned>(ymd.month()), static_cast<int>(ymd.year()) % 100);
  return buf;
}

std::string format_edf_time(Timestamp t) {
  const hh_mm_ss hms{t - floor<days>(t)};
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%02ld.%02ld.%02lld", static_cast<long>(hms.hours().count()),
                static_cast<long>(hms.minutes().count()), static_cast<long long>(hms.seconds().count()));
  return buf;
}

std::int64_t grid_phase(Timestamp t, std::int64_t step_s) {
  const auto since_midnight = (t - floor<days>(t)).count();
  return since_midnight % step_s;
}

Timestamp align_up_to_grid(Timestamp t, std::int64_t step_s) {
  const auto phase = grid_phase(t, step_s);
  return phase == 0 ? t : t + seconds{step_s - phase};
}

}  // namespace ictal
