#pragma once

#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "tb/model.h"

namespace tb {

struct oracle_refused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct oracle_options {
  // trip instances of days [q - 1, q + horizon - 1] are considered
  std::uint32_t horizon_{2U};
  std::uint8_t max_transfers_{15U};
  // a change may board a trip whose service day is 0..max_day_shift_ days
  // after the service day of the trip left
  std::uint32_t max_day_shift_{2U};
  // refuse instances with more stop events than this
  std::size_t max_events_{100'000U};
};

using profile_front = std::vector<std::tuple<abs_time_t, abs_time_t, std::uint32_t>>;
using arrival_front = std::vector<std::tuple<abs_time_t, std::uint32_t>>;

// Exhaustive round-by-round search over all running trip instances, built
// from the timetable alone. Returns the sorted (dep, arr, transfers) Pareto
// set of journeys departing in [q * 86400, (q + 1) * 86400).
profile_front oracle_profile(timetable const&, stop_idx_t source,
                             stop_idx_t destination, day_idx_t query_day,
                             oracle_options const& = {});

// Sorted (arr, transfers) Pareto set of journeys departing at or after
// `departure`.
arrival_front oracle_earliest_arrival(timetable const&, stop_idx_t source,
                                      stop_idx_t destination,
                                      abs_time_t departure, day_idx_t query_day,
                                      oracle_options const& = {});

}  // namespace tb
