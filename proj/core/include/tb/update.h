#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tb/model.h"
#include "tb/preprocess.h"
#include "tb/transfer_set.h"

namespace tb {

struct remove_edit {
  std::string trip_;
  day_bitset days_;
};

struct add_edit {
  trip trip_;
};

// Shifts every time of the trip on one day by delta_ (one value for all
// stops, or one per stop). The delayed run becomes a new single-day trip
// named "<id>#d<day>".
struct delay_edit {
  std::string trip_;
  day_idx_t day_{0};
  std::vector<seconds_t> delta_;
};

using timetable_edit = std::variant<remove_edit, add_edit, delay_edit>;

struct update_stats {
  std::size_t edits_{0U};
  // trips whose outgoing transfers were recomputed and re-reduced
  std::size_t trips_recomputed_{0U};
  std::chrono::nanoseconds time_{};
};

// Trips (route, index) whose transfers may change when trips visiting
// `stops` change: every trip of a route visiting one of the stops or a stop
// with a footpath into them.
std::vector<std::pair<route_idx_t, std::uint32_t>> affected_trips(
    timetable const&, timetable_index const&, std::vector<stop_idx_t> const& stops);

// Applies all edits to the timetable, then recomputes the transfers of the
// union of the affected trips once. The reduced transfer set afterwards
// equals reduce_transfers(compute_transfers(tt)) of the edited timetable.
// Throws (invalid_data, lookup_error) without modifying anything if an edit
// is invalid against the timetable as edited so far.
update_stats apply_batch(timetable&, transfer_set& reduced,
                         std::span<timetable_edit const>,
                         preprocess_options const& = {});

update_stats remove_trip(timetable&, transfer_set&, std::string const& trip_id,
                         day_bitset const& days, preprocess_options const& = {});
update_stats add_trip(timetable&, transfer_set&, trip,
                      preprocess_options const& = {});
update_stats delay_trip(timetable&, transfer_set&, std::string const& trip_id,
                        day_idx_t day, std::vector<seconds_t> delta,
                        preprocess_options const& = {});

}  // namespace tb
