#pragma once

#include <iosfwd>
#include <string>

#include "tb/model.h"

namespace tb {

// Line-delimited JSON. The first line is the header
//   {"version":1,"horizon_days":D,"start_date":"YYYY-MM-DD"}
// followed by records, each with a "type" field:
//   stop      {"id","name","min_change_time"}
//   footpath  {"from","to","duration"}
//   route     {"index","stops"}
//   trip      {"id","route","stops","arr","dep","days"}
//   change    {"stop","from_route","to_route","seconds"}
// "days" is a '0'/'1' string of length D, day 0 first. Trips without a
// "route" field (all or none) are partitioned into routes on load.
void write_canonical(std::ostream&, timetable const&);
timetable read_canonical(std::istream&);

void save_canonical(timetable const&, std::string const& path);
timetable load_canonical(std::string const& path);

}  // namespace tb
