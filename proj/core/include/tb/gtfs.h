#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "tb/model.h"

namespace tb {

struct gtfs_options {
  std::chrono::sys_days start_{};
  std::uint32_t horizon_days_{1U};
  seconds_t default_change_time_{0};
  // footpaths from transfers.txt without min_transfer_time
  seconds_t default_walk_time_{60};
  // false: keep every (GTFS trip, service day) as a separate single-day trip
  bool merge_days_{true};
};

// Reads stops.txt, trips.txt, stop_times.txt, calendar.txt and/or
// calendar_dates.txt and optionally transfers.txt. Trips with identical stop
// sequences and times are merged into one trip with the union of their days.
// Rejected trips (non-monotone times, fewer than two stops) are reported in
// `warnings`. Throws invalid_data naming the file (and line) on errors.
timetable load_gtfs_subset(std::filesystem::path const& dir,
                           gtfs_options const&,
                           std::vector<std::string>* warnings = nullptr);

// Minimal RFC 4180 reader: header row, quoted fields, CRLF, UTF-8 BOM.
class csv_reader {
public:
  explicit csv_reader(std::filesystem::path const&);

  bool next();
  // empty if the column does not exist
  std::string_view get(std::string_view column) const;
  bool has_column(std::string_view column) const;
  std::size_t line() const { return line_; }
  std::string const& file() const { return file_; }

private:
  bool read_record(std::vector<std::string>&);

  std::string file_;
  std::string content_;
  std::size_t pos_{0U};
  std::size_t line_{0U};
  std::size_t next_line_{1U};
  std::vector<std::string> header_;
  std::vector<std::string> row_;
};

}  // namespace tb
