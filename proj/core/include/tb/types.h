#pragma once

#include <cstdint>
#include <compare>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace tb {

// Seconds. Relative times count from the midnight starting a trip's service
// day and may exceed one day; absolute times count from midnight of day 0 of
// the timetable horizon.
using seconds_t = std::int64_t;
using rel_time_t = seconds_t;
using abs_time_t = seconds_t;

constexpr seconds_t kSecondsPerDay = 86'400;
constexpr seconds_t kInfinity = std::numeric_limits<seconds_t>::max();

using day_idx_t = std::int32_t;

// position of a stop inside a trip's / route's stop sequence
using pos_t = std::uint32_t;

template <typename T, typename Tag>
struct strong {
  using value_type = T;

  constexpr strong() = default;
  constexpr explicit strong(T const v) : v_{v} {}

  template <typename U>
    requires std::is_integral_v<U>
  constexpr explicit strong(U const v) : v_{static_cast<T>(v)} {}

  constexpr friend auto operator<=>(strong const&, strong const&) = default;

  constexpr strong& operator++() {
    ++v_;
    return *this;
  }

  static constexpr strong invalid() {
    return strong{std::numeric_limits<T>::max()};
  }
  constexpr bool valid() const { return *this != invalid(); }

  T v_{std::numeric_limits<T>::max()};
};

struct stop_tag {};
struct route_tag {};

using stop_idx_t = strong<std::uint32_t, stop_tag>;
using route_idx_t = strong<std::uint32_t, route_tag>;

constexpr abs_time_t abs_time(day_idx_t const day, rel_time_t const t) {
  return static_cast<abs_time_t>(day) * kSecondsPerDay + t;
}

struct range_error : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct lookup_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_data : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tb

template <typename T, typename Tag>
struct std::hash<tb::strong<T, Tag>> {
  std::size_t operator()(tb::strong<T, Tag> const s) const noexcept {
    return std::hash<T>{}(s.v_);
  }
};
