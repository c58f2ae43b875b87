#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tb/transfer_set.h"
#include "tb/update.h"

namespace tb::tools {

// One JSON object per line:
//   {"op":"delay","trip":"t","day":3,"delta":[120]}
//   {"op":"remove","trip":"t","days":"0010000"}
//   {"op":"add","id":"t2","stops":["A","B"],"arr":[0,600],"dep":[0,600],
//    "days":"1111100"}
// Blank lines are skipped. Throws invalid_data naming the line.
std::vector<timetable_edit> read_edit_stream(std::istream&, timetable const&);

// n delays of distinct (trip, day) instances of the given timetable: a trip
// chosen uniformly, one of its running days chosen uniformly, and a delay
// chosen uniformly from 60, 120, ..., 1800 seconds applied to every stop.
std::vector<timetable_edit> random_delays(timetable const&, std::size_t n,
                                          std::uint64_t seed);

struct update_record {
  std::size_t batch_{0U};
  std::size_t edits_{0U};
  std::size_t trips_recomputed_{0U};
  double micros_{0.0};
};

// Applies the edits in consecutive batches of batch_size.
std::vector<update_record> simulate_updates(timetable&, transfer_set&,
                                            std::vector<timetable_edit> const&,
                                            std::size_t batch_size);

void write_update_csv(std::ostream&, std::vector<update_record> const&);

// Empty if the incremental set equals fresh preprocessing byte for byte,
// otherwise a short description of the differences.
std::string verify_against_rebuild(timetable const&, transfer_set const&);

}  // namespace tb::tools
