#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "tb/types.h"

namespace tb {

// "YYYY-MM-DD" or "YYYYMMDD"; throws invalid_data
std::chrono::sys_days parse_date(std::string_view);
std::string format_date(std::chrono::sys_days);

// "H:MM:SS" / "HH:MM:SS" / "HH:MM", hours may exceed 23; throws invalid_data
seconds_t parse_hms(std::string_view);
std::string format_hms(seconds_t);

// ISO-8601 local date-time of an absolute time on a horizon starting at
// `start`
std::string format_iso(std::chrono::sys_days start, abs_time_t);

}  // namespace tb
