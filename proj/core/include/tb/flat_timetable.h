#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "tb/model.h"
#include "tb/transfer_set.h"

namespace tb {

using flat_trip_idx_t = std::uint32_t;

struct flat_trip {
  route_idx_t route_;
  std::uint32_t trip_{0U};
  day_idx_t day_{0};
  std::uint32_t flat_route_{0U};
};

// Instances of one route inside the window, ordered by (day, trip order).
struct flat_route {
  route_idx_t route_;
  flat_trip_idx_t first_{0U};
  std::uint32_t n_trips_{0U};
};

struct flat_edge {
  friend bool operator==(flat_edge const&, flat_edge const&) = default;

  flat_trip_idx_t to_{0U};
  pos_t board_{0U};
};

// Trip instances of the days [window_start, window_start + window_length)
// with absolute times and transfers between flat trip ids.
class flat_timetable {
public:
  std::uint32_t n_trips() const { return static_cast<std::uint32_t>(trips_.size()); }
  std::uint32_t n_routes() const { return static_cast<std::uint32_t>(routes_.size()); }
  std::size_t n_transfers() const { return edges_.size(); }

  day_idx_t window_start() const { return window_start_; }
  std::uint32_t window_length() const { return window_length_; }

  timetable const& tt() const { return *tt_; }
  timetable_index const& index() const { return *index_; }

  flat_trip const& trip(flat_trip_idx_t const t) const { return trips_[t]; }
  flat_route const& route(std::uint32_t const r) const { return routes_[r]; }
  pos_t n_stops(flat_trip_idx_t const t) const {
    return time_first_[t + 1U] - time_first_[t];
  }
  abs_time_t arr(flat_trip_idx_t const t, pos_t const i) const {
    return arr_[time_first_[t] + i];
  }
  abs_time_t dep(flat_trip_idx_t const t, pos_t const i) const {
    return dep_[time_first_[t] + i];
  }
  std::span<flat_edge const> transfers(flat_trip_idx_t const t,
                                       pos_t const exit) const {
    auto const base = time_first_[t] + t + exit;
    return {edges_.data() + exit_offsets_[base],
            edges_.data() + exit_offsets_[base + 1U]};
  }
  // earliest departure of a transfer target at this exit that lies after
  // the window; kInfinity if none was left out
  abs_time_t first_omitted(flat_trip_idx_t const t, pos_t const exit) const {
    return omitted_[time_first_[t] + exit];
  }
  // flat routes formed from an original route
  std::span<std::uint32_t const> flat_routes_of(route_idx_t const r) const {
    return {flat_routes_of_[r.v_].data(), flat_routes_of_[r.v_].size()};
  }

private:
  friend flat_timetable flatten_window(timetable const&, transfer_set const&,
                                       day_idx_t, std::uint32_t,
                                       std::shared_ptr<timetable_index const>);

  timetable const* tt_{nullptr};
  std::shared_ptr<timetable_index const> index_;
  day_idx_t window_start_{0};
  std::uint32_t window_length_{0U};

  std::vector<flat_route> routes_;
  std::vector<std::vector<std::uint32_t>> flat_routes_of_;
  std::vector<flat_trip> trips_;
  std::vector<std::uint32_t> time_first_;  // n_trips + 1
  std::vector<abs_time_t> arr_;
  std::vector<abs_time_t> dep_;
  std::vector<std::uint32_t> exit_offsets_;  // per trip: n_stops + 1
  std::vector<flat_edge> edges_;
  std::vector<abs_time_t> omitted_;  // per (trip, exit)
};

// throws range_error if the window leaves the horizon
flat_timetable flatten_window(timetable const&, transfer_set const&,
                              day_idx_t window_start,
                              std::uint32_t window_length,
                              std::shared_ptr<timetable_index const> = nullptr);

}  // namespace tb
