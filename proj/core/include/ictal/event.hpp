#pragma once

#include <cstdint>

#include "ictal/timeutil.hpp"

namespace ictal {

// Detected seizure: [start_time, start_time + duration_s), with the mean
// probability of its member windows as confidence.
struct SeizureEvent {
  Timestamp start_time{};
  std::int64_t duration_s = 0;
  double confidence = 0.0;

  Timestamp end_time() const { return start_time + Seconds{duration_s}; }
  friend bool operator==(const SeizureEvent&, const SeizureEvent&) = default;
};

}  // namespace ictal
