#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tb/day_bitset.h"
#include "tb/types.h"

namespace tb {

struct stop {
  friend bool operator==(stop const&, stop const&) = default;

  std::string id_;
  std::string name_;
  seconds_t min_change_time_{0};
};

struct footpath {
  friend bool operator==(footpath const&, footpath const&) = default;

  stop_idx_t from_;
  stop_idx_t to_;
  seconds_t duration_{0};
};

// One vehicle run. arr_[0] and dep_[size()-1] are stored as given but never
// read: arr(0) is 0 and dep(size()-1) is infinite.
struct trip {
  friend bool operator==(trip const&, trip const&) = default;

  pos_t size() const { return static_cast<pos_t>(stops_.size()); }

  rel_time_t arr(pos_t const i) const { return i == 0U ? 0 : arr_[i]; }
  rel_time_t dep(pos_t const i) const {
    return i + 1U == size() ? kInfinity : dep_[i];
  }

  std::string id_;
  std::vector<stop_idx_t> stops_;
  std::vector<rel_time_t> arr_;
  std::vector<rel_time_t> dep_;
  day_bitset active_days_;
};

// Trips sharing a stop sequence, totally ordered without overtaking.
struct route {
  friend bool operator==(route const&, route const&) = default;

  pos_t size() const { return static_cast<pos_t>(stops_.size()); }
  std::uint32_t n_trips() const {
    return static_cast<std::uint32_t>(trips_.size());
  }

  std::vector<stop_idx_t> stops_;
  std::vector<trip> trips_;
};

struct change_override_key {
  friend auto operator<=>(change_override_key const&,
                          change_override_key const&) = default;

  stop_idx_t stop_;
  route_idx_t from_route_;
  route_idx_t to_route_;
};

struct timetable {
  friend bool operator==(timetable const&, timetable const&) = default;

  std::size_t n_stops() const { return stops_.size(); }
  std::size_t n_routes() const { return routes_.size(); }
  std::size_t n_trips() const;
  std::size_t n_trip_days() const;

  route const& get(route_idx_t const r) const { return routes_[r.v_]; }
  route& get(route_idx_t const r) { return routes_[r.v_]; }
  stop const& get(stop_idx_t const s) const { return stops_[s.v_]; }

  seconds_t change_time(stop_idx_t s, route_idx_t from, route_idx_t to) const;

  // throws lookup_error
  stop_idx_t find_stop(std::string_view id) const;

  // (route, trip index) of the trip with the given id; throws lookup_error
  std::pair<route_idx_t, std::uint32_t> find_trip(std::string_view id) const;

  // throws invalid_data on the first violated invariant
  void validate() const;

  std::uint32_t horizon_days_{1U};
  std::chrono::sys_days start_date_{};
  std::vector<stop> stops_;
  std::vector<footpath> footpaths_;
  std::vector<route> routes_;
  std::map<change_override_key, seconds_t> change_overrides_;
};

// a precedes b (shifted by shift_b seconds) at every stop: no overtaking
bool precedes(trip const& a, trip const& b, seconds_t shift_b = 0);

// adjacent pairs ordered and the last trip not later than the first trip of
// the following day, so (day, trip index) order is the instance order
bool is_ordered(route const&);

// throws invalid_data
void validate_trip(trip const&, std::uint32_t horizon_days, std::size_t n_stops);

// ---------------------------------------------------------------------------
// Packed trip-instance identifiers: (day offset << 24) | trip index.
// Day offset 1 is the query day, 0 the day before.

constexpr unsigned kTripIndexBits = 24U;
constexpr std::uint64_t kMaxTripIndex = (std::uint64_t{1} << kTripIndexBits) - 1U;
constexpr std::uint64_t kMaxDayOffset = std::uint64_t{1} << 16U;

constexpr std::uint64_t pack_trip_ref(std::uint64_t const day_offset,
                                      std::uint64_t const trip_index) {
  if (trip_index > kMaxTripIndex || day_offset > kMaxDayOffset) {
    throw range_error{"pack_trip_ref: day offset or trip index out of range"};
  }
  return (day_offset << kTripIndexBits) | trip_index;
}

constexpr std::uint32_t day_offset_of(std::uint64_t const packed) {
  return static_cast<std::uint32_t>(packed >> kTripIndexBits);
}

constexpr std::uint32_t trip_index_of(std::uint64_t const packed) {
  return static_cast<std::uint32_t>(packed & kMaxTripIndex);
}

struct trip_ref {
  friend auto operator<=>(trip_ref const&, trip_ref const&) = default;

  std::uint32_t day_offset() const { return day_offset_of(packed_); }
  std::uint32_t trip_index() const { return trip_index_of(packed_); }

  route_idx_t route_;
  std::uint64_t packed_{0U};
};

// ---------------------------------------------------------------------------
// Derived lookup structures; rebuilt whenever the timetable changes.

struct route_stop {
  route_idx_t route_;
  pos_t pos_;
};

struct walk {
  stop_idx_t stop_;
  seconds_t duration_;
};

struct timetable_index {
  explicit timetable_index(timetable const&);

  // kInfinity if there is no footpath
  seconds_t footpath_duration(stop_idx_t from, stop_idx_t to) const;

  std::vector<std::vector<route_stop>> routes_at_;
  std::vector<std::vector<walk>> fp_out_;
  std::vector<std::vector<walk>> fp_in_;
  std::vector<bool> has_override_;
};

}  // namespace tb
