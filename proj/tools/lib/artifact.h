#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tb/gtfs.h"
#include "tb/model.h"
#include "tb/transfer_set.h"

namespace tb::tools {

// Preprocessed artifact directory: the timetable in canonical form plus the
// reduced and full transfer sets.
struct artifact {
  timetable tt_;
  transfer_set reduced_;
  std::optional<transfer_set> full_;
};

inline constexpr auto kTimetableFile = "timetable.jsonl";
inline constexpr auto kReducedFile = "transfers.bin";
inline constexpr auto kFullFile = "transfers_full.bin";

// A directory containing stops.txt is read as GTFS, anything else as a
// canonical timetable file.
timetable load_input(std::filesystem::path const&, gtfs_options const&,
                     std::vector<std::string>* warnings);

void save_artifact(std::filesystem::path const& dir, timetable const&,
                   transfer_set const& reduced, transfer_set const* full);
artifact load_artifact(std::filesystem::path const& dir, bool with_full = false);

// Day index of "YYYY-MM-DD" on the timetable's horizon or a plain day
// number; throws range_error outside the horizon.
day_idx_t parse_query_day(timetable const&, std::string const&);

}  // namespace tb::tools
