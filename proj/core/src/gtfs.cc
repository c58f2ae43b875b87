#include "tb/gtfs.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "fmt/core.h"

#include "tb/preprocess.h"
#include "tb/time_format.h"

namespace fs = std::filesystem;

namespace tb {

csv_reader::csv_reader(fs::path const& p) : file_{p.filename().string()} {
  auto in = std::ifstream{p, std::ios::binary};
  if (!in) {
    throw invalid_data{fmt::format("cannot open {}", file_)};
  }
  auto ss = std::stringstream{};
  ss << in.rdbuf();
  content_ = std::move(ss).str();
  if (content_.starts_with("\xEF\xBB\xBF")) {
    pos_ = 3U;
  }
  if (!read_record(header_)) {
    throw invalid_data{fmt::format("{}: missing header", file_)};
  }
  for (auto& h : header_) {
    while (!h.empty() && (h.back() == ' ' || h.back() == '\r')) {
      h.pop_back();
    }
  }
}

bool csv_reader::read_record(std::vector<std::string>& out) {
  out.clear();
  if (pos_ >= content_.size()) {
    return false;
  }
  line_ = next_line_;
  auto field = std::string{};
  auto quoted = false;
  while (pos_ < content_.size()) {
    auto const c = content_[pos_++];
    if (quoted) {
      if (c == '"') {
        if (pos_ < content_.size() && content_[pos_] == '"') {
          field.push_back('"');
          ++pos_;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') {
          ++next_line_;
        }
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      ++next_line_;
      break;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return true;
}

bool csv_reader::next() {
  while (read_record(row_)) {
    if (row_.size() == 1U && row_[0].empty()) {
      continue;  // blank line
    }
    return true;
  }
  return false;
}

bool csv_reader::has_column(std::string_view const column) const {
  return std::find(begin(header_), end(header_), column) != end(header_);
}

std::string_view csv_reader::get(std::string_view const column) const {
  auto const it = std::find(begin(header_), end(header_), column);
  if (it == end(header_)) {
    return {};
  }
  auto const i = static_cast<std::size_t>(it - begin(header_));
  return i < row_.size() ? std::string_view{row_[i]} : std::string_view{};
}

namespace {

struct stop_time {
  std::uint32_t sequence_;
  stop_idx_t stop_;
  seconds_t arr_;
  seconds_t dep_;
};

void require(fs::path const& dir, std::string_view const name) {
  if (!fs::exists(dir / name)) {
    throw invalid_data{fmt::format("missing required file {}", name)};
  }
}

[[noreturn]] void record_error(csv_reader const& r, std::string_view what) {
  throw invalid_data{fmt::format("{}:{}: {}", r.file(), r.line(), what)};
}

}  // namespace

timetable load_gtfs_subset(fs::path const& dir, gtfs_options const& opt,
                           std::vector<std::string>* warnings) {
  auto const warn = [&](std::string msg) {
    if (warnings != nullptr) {
      warnings->push_back(std::move(msg));
    }
  };

  require(dir, "stops.txt");
  require(dir, "trips.txt");
  require(dir, "stop_times.txt");
  if (!fs::exists(dir / "calendar.txt") && !fs::exists(dir / "calendar_dates.txt")) {
    throw invalid_data{"missing required file calendar.txt or calendar_dates.txt"};
  }
  if (opt.horizon_days_ == 0U) {
    throw invalid_data{"horizon must cover at least one day"};
  }

  auto tt = timetable{};
  tt.horizon_days_ = opt.horizon_days_;
  tt.start_date_ = opt.start_;
  auto const horizon_end = opt.start_ + std::chrono::days{opt.horizon_days_};
  auto const day_of = [&](std::chrono::sys_days const d) -> std::optional<std::size_t> {
    if (d < opt.start_ || d >= horizon_end) {
      return std::nullopt;
    }
    return static_cast<std::size_t>((d - opt.start_).count());
  };

  // stops
  auto stop_by_id = std::unordered_map<std::string, stop_idx_t>{};
  {
    auto r = csv_reader{dir / "stops.txt"};
    while (r.next()) {
      auto const id = std::string{r.get("stop_id")};
      if (id.empty()) {
        record_error(r, "missing stop_id");
      }
      if (!stop_by_id.emplace(id, stop_idx_t{tt.stops_.size()}).second) {
        record_error(r, fmt::format("duplicate stop_id \"{}\"", id));
      }
      tt.stops_.push_back(stop{.id_ = id,
                               .name_ = std::string{r.get("stop_name")},
                               .min_change_time_ = opt.default_change_time_});
    }
  }

  // service days
  auto services = std::map<std::string, day_bitset>{};
  auto const service = [&](std::string const& id) -> day_bitset& {
    return services.try_emplace(id, day_bitset{opt.horizon_days_}).first->second;
  };
  if (fs::exists(dir / "calendar.txt")) {
    constexpr auto kWeekdays = std::array<std::string_view, 7>{
        "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"};
    auto r = csv_reader{dir / "calendar.txt"};
    while (r.next()) {
      auto& days = service(std::string{r.get("service_id")});
      auto runs = std::array<bool, 7>{};
      for (auto i = 0U; i != 7U; ++i) {
        runs[i] = r.get(kWeekdays[i]) == "1";
      }
      try {
        auto const from = std::max(parse_date(r.get("start_date")), opt.start_);
        auto const to = std::min(parse_date(r.get("end_date")) + std::chrono::days{1},
                                 horizon_end);
        for (auto d = from; d < to; d += std::chrono::days{1}) {
          auto const wd = std::chrono::weekday{d}.iso_encoding() - 1U;
          if (runs[wd]) {
            days.set(*day_of(d));
          }
        }
      } catch (invalid_data const& e) {
        record_error(r, e.what());
      }
    }
  }
  if (fs::exists(dir / "calendar_dates.txt")) {
    auto r = csv_reader{dir / "calendar_dates.txt"};
    while (r.next()) {
      auto& days = service(std::string{r.get("service_id")});
      auto date = std::chrono::sys_days{};
      try {
        date = parse_date(r.get("date"));
      } catch (invalid_data const& e) {
        record_error(r, e.what());
      }
      auto const d = day_of(date);
      if (!d.has_value()) {
        continue;
      }
      auto const type = r.get("exception_type");
      if (type == "1") {
        days.set(*d);
      } else if (type == "2") {
        days.reset(*d);
      } else {
        record_error(r, fmt::format("invalid exception_type \"{}\"", type));
      }
    }
  }

  // trips
  auto trip_order = std::vector<std::string>{};
  auto trip_service = std::unordered_map<std::string, std::string>{};
  {
    auto r = csv_reader{dir / "trips.txt"};
    while (r.next()) {
      auto const id = std::string{r.get("trip_id")};
      if (!trip_service.emplace(id, std::string{r.get("service_id")}).second) {
        record_error(r, fmt::format("duplicate trip_id \"{}\"", id));
      }
      trip_order.push_back(id);
    }
  }

  auto stop_times = std::unordered_map<std::string, std::vector<stop_time>>{};
  {
    auto r = csv_reader{dir / "stop_times.txt"};
    while (r.next()) {
      auto const trip_id = std::string{r.get("trip_id")};
      if (!trip_service.contains(trip_id)) {
        record_error(r, fmt::format("unknown trip_id \"{}\"", trip_id));
      }
      auto const stop_it = stop_by_id.find(std::string{r.get("stop_id")});
      if (stop_it == end(stop_by_id)) {
        record_error(r, fmt::format("unknown stop_id \"{}\"", r.get("stop_id")));
      }
      try {
        auto const seq = std::stoul(std::string{r.get("stop_sequence")});
        auto arr_s = r.get("arrival_time");
        auto dep_s = r.get("departure_time");
        if (arr_s.empty()) {
          arr_s = dep_s;
        }
        if (dep_s.empty()) {
          dep_s = arr_s;
        }
        stop_times[trip_id].push_back(stop_time{
            .sequence_ = static_cast<std::uint32_t>(seq),
            .stop_ = stop_it->second,
            .arr_ = parse_hms(arr_s),
            .dep_ = parse_hms(dep_s)});
      } catch (std::exception const& e) {
        record_error(r, e.what());
      }
    }
  }

  // one trip record per distinct (stops, times); days are merged
  auto trips = std::vector<trip>{};
  auto by_pattern = std::map<std::tuple<std::vector<stop_idx_t>, std::vector<seconds_t>,
                                        std::vector<seconds_t>>,
                             std::size_t>{};
  for (auto const& trip_id : trip_order) {
    auto const st_it = stop_times.find(trip_id);
    if (st_it == end(stop_times)) {
      continue;
    }
    auto& st = st_it->second;
    std::sort(begin(st), end(st), [](stop_time const& a, stop_time const& b) {
      return a.sequence_ < b.sequence_;
    });

    auto t = trip{.id_ = trip_id, .stops_ = {}, .arr_ = {}, .dep_ = {}, .active_days_ = {}};
    for (auto const& x : st) {
      t.stops_.push_back(x.stop_);
      t.arr_.push_back(x.arr_);
      t.dep_.push_back(x.dep_);
    }
    auto const svc = services.find(trip_service.at(trip_id));
    t.active_days_ =
        svc == end(services) ? day_bitset{opt.horizon_days_} : svc->second;
    if (t.active_days_.none()) {
      continue;
    }
    try {
      validate_trip(t, opt.horizon_days_, tt.stops_.size());
    } catch (invalid_data const& e) {
      warn(fmt::format("stop_times.txt: rejected {}", e.what()));
      continue;
    }

    if (!opt.merge_days_) {
      t.active_days_.for_each_day([&](day_idx_t const d) {
        auto single = t;
        single.id_ = fmt::format("{}@{}", trip_id, d);
        single.active_days_ = day_bitset{opt.horizon_days_};
        single.active_days_.set(static_cast<std::size_t>(d));
        trips.push_back(std::move(single));
      });
      continue;
    }

    auto const [it, inserted] =
        by_pattern.emplace(std::tuple{t.stops_, t.arr_, t.dep_}, trips.size());
    if (inserted) {
      trips.push_back(std::move(t));
    } else {
      trips[it->second].active_days_ |= t.active_days_;
    }
  }

  // transfers
  if (fs::exists(dir / "transfers.txt")) {
    auto fp_by_pair = std::map<std::pair<std::uint32_t, std::uint32_t>, seconds_t>{};
    auto r = csv_reader{dir / "transfers.txt"};
    while (r.next()) {
      auto const from = stop_by_id.find(std::string{r.get("from_stop_id")});
      auto const to = stop_by_id.find(std::string{r.get("to_stop_id")});
      if (from == end(stop_by_id) || to == end(stop_by_id)) {
        record_error(r, "unknown stop in transfer");
      }
      auto const type = r.get("transfer_type");
      auto const time_s = r.get("min_transfer_time");
      auto secs = std::optional<seconds_t>{};
      if (!time_s.empty()) {
        try {
          secs = std::stoll(std::string{time_s});
        } catch (std::exception const&) {
          record_error(r, fmt::format("invalid min_transfer_time \"{}\"", time_s));
        }
      }
      if (from->second == to->second) {
        if (type == "2" && secs.has_value()) {
          tt.stops_[from->second.v_].min_change_time_ = *secs;
        }
      } else if (type.empty() || type == "0" || type == "2") {
        auto const d = secs.value_or(0) > 0 ? *secs : opt.default_walk_time_;
        auto const [it, inserted] =
            fp_by_pair.emplace(std::pair{from->second.v_, to->second.v_}, d);
        if (!inserted) {
          it->second = std::min(it->second, d);
        }
      }
    }
    for (auto const& [pair, d] : fp_by_pair) {
      tt.footpaths_.push_back(footpath{.from_ = stop_idx_t{pair.first},
                                       .to_ = stop_idx_t{pair.second},
                                       .duration_ = d});
    }
  }

  tt.routes_ = partition_routes(std::move(trips));
  tt.validate();
  return tt;
}

}  // namespace tb
