#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "tb/model.h"
#include "tb/transfer_set.h"

namespace tb {

struct preprocess_options {
  // transfers may board trips of the same day up to max_day_shift_ days later
  std::uint8_t max_day_shift_{2U};
  // 0: $TB_WORKERS or hardware threads
  unsigned workers_{0U};
};

// Groups trips with equal stop sequences into routes without overtaking.
// Within a stop sequence trips are sorted by (first departure, last arrival,
// input position) and appended to the first route they do not overtake.
std::vector<route> partition_routes(std::vector<trip> trips);

// All feasible transfers: per source day the earliest reachable trip instance
// of every route at the exit stop and at every stop reachable on foot.
transfer_set compute_transfers(timetable const&,
                               preprocess_options const& = {});

// Removes transfers that never improve an arrival or change opportunity; a
// kept transfer keeps only the source days on which it is needed.
transfer_set reduce_transfers(timetable const&, transfer_set const& full,
                              preprocess_options const& = {});

// Single-trip building blocks, shared with incremental updates.
transfer_set::row_t compute_trip_transfers(timetable const&,
                                           timetable_index const&,
                                           route_idx_t, std::uint32_t trip,
                                           preprocess_options const& = {});

transfer_set::row_t reduce_trip_transfers(timetable const&,
                                          timetable_index const&, route_idx_t,
                                          std::uint32_t trip,
                                          transfer_set::row_t const& full);

struct preprocess_result {
  transfer_set full_;
  transfer_set reduced_;
  std::chrono::nanoseconds compute_time_{};
  std::chrono::nanoseconds reduce_time_{};
};

preprocess_result preprocess(timetable const&, preprocess_options const& = {});

// Re-checks the stored transfer against the timetable alone: the exit and
// boarding indices are usable, the change time or footpath fits, and the
// validity days are days on which both trip instances run.
bool is_feasible(timetable const&, timetable_index const&, route_idx_t from_route,
                 std::uint32_t from_trip, transfer const&);

}  // namespace tb
