#pragma once

#include <cstdint>
#include <string>

#include "tb/model.h"

namespace tb {

enum class activity : std::uint8_t { kDaily, kWeekday, kRandom };

struct activity_pattern {
  static activity_pattern parse(std::string_view);  // daily|weekday|random:<p>

  activity kind_{activity::kDaily};
  double p_{0.5};  // kRandom: probability of a trip running on a day
};

struct synthetic_params {
  std::uint64_t seed_{1U};
  std::uint32_t n_stops_{10U};
  std::uint32_t n_routes_{3U};
  std::uint32_t trips_per_route_{4U};
  std::uint32_t horizon_days_{7U};
  double footpath_density_{0.0};
  activity_pattern activity_{};
};

// Deterministic for a fixed seed. Stops form a grid and each line follows
// grid edges, so lines share stretches of stops; odd lines run back along
// the previous line. Each line runs trips_per_route trips per day; some lines
// are circular and some cross midnight. Day 0 is a Monday for the weekday
// pattern.
timetable gen_synthetic(synthetic_params const&);

}  // namespace tb
