#include "tb/time_format.h"

#include <charconv>

#include "fmt/core.h"

namespace tb {

namespace {

int to_int(std::string_view const s, std::string_view const what) {
  auto v = 0;
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw invalid_data{fmt::format("invalid {} \"{}\"", what, s)};
  }
  return v;
}

}  // namespace

std::chrono::sys_days parse_date(std::string_view s) {
  using namespace std::chrono;
  auto y = 0;
  auto m = 0;
  auto d = 0;
  if (s.size() == 8U) {
    y = to_int(s.substr(0, 4), "date");
    m = to_int(s.substr(4, 2), "date");
    d = to_int(s.substr(6, 2), "date");
  } else if (s.size() == 10U && s[4] == '-' && s[7] == '-') {
    y = to_int(s.substr(0, 4), "date");
    m = to_int(s.substr(5, 2), "date");
    d = to_int(s.substr(8, 2), "date");
  } else {
    throw invalid_data{fmt::format("invalid date \"{}\"", s)};
  }
  auto const ymd = year{y} / month{static_cast<unsigned>(m)} /
                   day{static_cast<unsigned>(d)};
  if (!ymd.ok()) {
    throw invalid_data{fmt::format("invalid date \"{}\"", s)};
  }
  return sys_days{ymd};
}

std::string format_date(std::chrono::sys_days const d) {
  auto const ymd = std::chrono::year_month_day{d};
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()));
}

seconds_t parse_hms(std::string_view s) {
  while (!s.empty() && s.front() == ' ') {
    s.remove_prefix(1);
  }
  while (!s.empty() && s.back() == ' ') {
    s.remove_suffix(1);
  }
  auto const c1 = s.find(':');
  if (c1 == std::string_view::npos) {
    throw invalid_data{fmt::format("invalid time \"{}\"", s)};
  }
  auto const c2 = s.find(':', c1 + 1U);
  auto const h = to_int(s.substr(0, c1), "time");
  auto const m = to_int(s.substr(c1 + 1U, c2 == std::string_view::npos
                                              ? std::string_view::npos
                                              : c2 - c1 - 1U),
                        "time");
  auto const sec =
      c2 == std::string_view::npos ? 0 : to_int(s.substr(c2 + 1U), "time");
  if (h < 0 || m < 0 || m > 59 || sec < 0 || sec > 59) {
    throw invalid_data{fmt::format("invalid time \"{}\"", s)};
  }
  return static_cast<seconds_t>(h) * 3600 + m * 60 + sec;
}

std::string format_hms(seconds_t const t) {
  return fmt::format("{:02}:{:02}:{:02}", t / 3600, (t / 60) % 60, t % 60);
}

std::string format_iso(std::chrono::sys_days const start, abs_time_t const t) {
  auto const day = t >= 0 ? t / kSecondsPerDay : -((-t + kSecondsPerDay - 1) / kSecondsPerDay);
  auto const rest = t - day * kSecondsPerDay;
  return fmt::format("{}T{}",
                     format_date(start + std::chrono::days{day}),
                     format_hms(rest));
}

}  // namespace tb
