#include "artifact.h"

#include <charconv>

#include "fmt/core.h"

#include "tb/canonical.h"
#include "tb/time_format.h"

namespace fs = std::filesystem;

namespace tb::tools {

timetable load_input(fs::path const& p, gtfs_options const& opt,
                     std::vector<std::string>* warnings) {
  if (!fs::exists(p)) {
    throw invalid_data{fmt::format("{}: no such file or directory", p.string())};
  }
  if (fs::is_directory(p)) {
    return load_gtfs_subset(p, opt, warnings);
  }
  return load_canonical(p.string());
}

void save_artifact(fs::path const& dir, timetable const& tt,
                   transfer_set const& reduced, transfer_set const* full) {
  fs::create_directories(dir);
  save_canonical(tt, (dir / kTimetableFile).string());
  save_transfer_set(reduced, (dir / kReducedFile).string());
  if (full != nullptr) {
    save_transfer_set(*full, (dir / kFullFile).string());
  }
}

artifact load_artifact(fs::path const& dir, bool const with_full) {
  auto const tt_path = dir / kTimetableFile;
  if (!fs::exists(tt_path)) {
    throw invalid_data{fmt::format("{}: not a preprocessed artifact", dir.string())};
  }
  auto a = artifact{.tt_ = load_canonical(tt_path.string()),
                    .reduced_ = load_transfer_set((dir / kReducedFile).string()),
                    .full_ = std::nullopt};
  if (with_full) {
    a.full_ = load_transfer_set((dir / kFullFile).string());
  }
  if (a.reduced_.horizon_days_ != a.tt_.horizon_days_ ||
      a.reduced_.rows_.size() != a.tt_.routes_.size()) {
    throw invalid_data{
        fmt::format("{}: transfer set does not match the timetable", dir.string())};
  }
  return a;
}

day_idx_t parse_query_day(timetable const& tt, std::string const& s) {
  auto day = std::int64_t{0};
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), day);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    day = (parse_date(s) - tt.start_date_).count();
  }
  if (day < 0 || day >= static_cast<std::int64_t>(tt.horizon_days_)) {
    throw range_error{fmt::format("date {} outside the timetable horizon {}..{}", s,
                                  format_date(tt.start_date_),
                                  format_date(tt.start_date_ +
                                              std::chrono::days{tt.horizon_days_ - 1U}))};
  }
  return static_cast<day_idx_t>(day);
}

}  // namespace tb::tools
