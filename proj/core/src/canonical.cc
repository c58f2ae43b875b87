#include "tb/canonical.h"

#include <fstream>
#include <unordered_map>

#include "fmt/core.h"
#include "nlohmann/json.hpp"

#include "tb/preprocess.h"
#include "tb/time_format.h"

namespace tb {

using json = nlohmann::json;

namespace {

constexpr auto kVersion = 1;

}  // namespace

void write_canonical(std::ostream& out, timetable const& tt) {
  out << json{{"version", kVersion},
              {"horizon_days", tt.horizon_days_},
              {"start_date", format_date(tt.start_date_)}}
             .dump()
      << '\n';
  for (auto const& s : tt.stops_) {
    out << json{{"type", "stop"},
                {"id", s.id_},
                {"name", s.name_},
                {"min_change_time", s.min_change_time_}}
               .dump()
        << '\n';
  }
  for (auto const& fp : tt.footpaths_) {
    out << json{{"type", "footpath"},
                {"from", tt.get(fp.from_).id_},
                {"to", tt.get(fp.to_).id_},
                {"duration", fp.duration_}}
               .dump()
        << '\n';
  }
  auto const stop_ids = [&](std::vector<stop_idx_t> const& stops) {
    auto ids = json::array();
    for (auto const s : stops) {
      ids.push_back(tt.get(s).id_);
    }
    return ids;
  };
  for (auto r = 0U; r != tt.routes_.size(); ++r) {
    auto const& route = tt.routes_[r];
    out << json{{"type", "route"}, {"index", r}, {"stops", stop_ids(route.stops_)}}
               .dump()
        << '\n';
    for (auto const& t : route.trips_) {
      out << json{{"type", "trip"},
                  {"id", t.id_},
                  {"route", r},
                  {"stops", stop_ids(t.stops_)},
                  {"arr", t.arr_},
                  {"dep", t.dep_},
                  {"days", t.active_days_.to_string()}}
                 .dump()
          << '\n';
    }
  }
  for (auto const& [key, secs] : tt.change_overrides_) {
    out << json{{"type", "change"},
                {"stop", tt.get(key.stop_).id_},
                {"from_route", key.from_route_.v_},
                {"to_route", key.to_route_.v_},
                {"seconds", secs}}
               .dump()
        << '\n';
  }
}

timetable read_canonical(std::istream& in) {
  auto tt = timetable{};
  auto line = std::string{};
  auto line_no = 0U;

  auto const fail = [&](std::string_view what) -> invalid_data {
    return invalid_data{fmt::format("canonical feed line {}: {}", line_no, what)};
  };

  auto stop_by_id = std::unordered_map<std::string, stop_idx_t>{};
  auto const lookup = [&](json const& id) {
    auto const it = stop_by_id.find(id.get<std::string>());
    if (it == end(stop_by_id)) {
      throw fail(fmt::format("unknown stop {}", id.dump()));
    }
    return it->second;
  };
  auto const stop_list = [&](json const& ids) {
    auto out = std::vector<stop_idx_t>{};
    for (auto const& id : ids) {
      out.push_back(lookup(id));
    }
    return out;
  };

  auto header_seen = false;
  auto with_routes = std::optional<bool>{};
  auto unrouted = std::vector<trip>{};
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    auto rec = json{};
    try {
      rec = json::parse(line);
    } catch (json::exception const& e) {
      throw fail(e.what());
    }

    try {
      if (!header_seen) {
        if (rec.value("version", 0) != kVersion) {
          throw fail("missing or unsupported header version");
        }
        tt.horizon_days_ = rec.at("horizon_days").get<std::uint32_t>();
        if (tt.horizon_days_ == 0U) {
          throw fail("horizon_days must be positive");
        }
        if (rec.contains("start_date")) {
          tt.start_date_ = parse_date(rec["start_date"].get<std::string>());
        }
        header_seen = true;
        continue;
      }

      auto const type = rec.at("type").get<std::string>();
      if (type == "stop") {
        auto const id = rec.at("id").get<std::string>();
        if (!stop_by_id.emplace(id, stop_idx_t{tt.stops_.size()}).second) {
          throw fail(fmt::format("duplicate stop \"{}\"", id));
        }
        tt.stops_.push_back(stop{.id_ = id,
                                 .name_ = rec.value("name", std::string{}),
                                 .min_change_time_ =
                                     rec.value("min_change_time", seconds_t{0})});
      } else if (type == "footpath") {
        tt.footpaths_.push_back(footpath{.from_ = lookup(rec.at("from")),
                                         .to_ = lookup(rec.at("to")),
                                         .duration_ = rec.at("duration").get<seconds_t>()});
      } else if (type == "route") {
        if (rec.at("index").get<std::size_t>() != tt.routes_.size()) {
          throw fail("route records must be numbered consecutively");
        }
        tt.routes_.push_back(route{.stops_ = stop_list(rec.at("stops")), .trips_ = {}});
      } else if (type == "trip") {
        auto t = trip{.id_ = rec.at("id").get<std::string>(),
                      .stops_ = stop_list(rec.at("stops")),
                      .arr_ = rec.at("arr").get<std::vector<rel_time_t>>(),
                      .dep_ = rec.at("dep").get<std::vector<rel_time_t>>(),
                      .active_days_ = day_bitset::from_string(
                          rec.at("days").get<std::string>())};
        if (t.active_days_.size() != tt.horizon_days_) {
          throw fail(fmt::format("day bitset of trip \"{}\" has length {}, expected {}",
                                 t.id_, t.active_days_.size(), tt.horizon_days_));
        }
        validate_trip(t, tt.horizon_days_, tt.stops_.size());
        auto const has_route = rec.contains("route");
        if (with_routes.has_value() && *with_routes != has_route) {
          throw fail("either all or no trips must name a route");
        }
        with_routes = has_route;
        if (has_route) {
          auto const r = rec["route"].get<std::size_t>();
          if (r >= tt.routes_.size()) {
            throw fail(fmt::format("trip \"{}\" names unknown route {}", t.id_, r));
          }
          tt.routes_[r].trips_.push_back(std::move(t));
        } else {
          unrouted.push_back(std::move(t));
        }
      } else if (type == "change") {
        tt.change_overrides_[change_override_key{
            .stop_ = lookup(rec.at("stop")),
            .from_route_ = route_idx_t{rec.at("from_route").get<std::uint32_t>()},
            .to_route_ = route_idx_t{rec.at("to_route").get<std::uint32_t>()}}] =
            rec.at("seconds").get<seconds_t>();
      } else {
        throw fail(fmt::format("unknown record type \"{}\"", type));
      }
    } catch (json::exception const& e) {
      throw fail(e.what());
    } catch (invalid_data const& e) {
      if (std::string_view{e.what()}.starts_with("canonical feed line")) {
        throw;
      }
      throw fail(e.what());
    }
  }

  if (!header_seen) {
    throw invalid_data{"canonical feed: missing header"};
  }
  if (!unrouted.empty()) {
    if (!tt.routes_.empty()) {
      throw invalid_data{"canonical feed: route records given but trips are unrouted"};
    }
    tt.routes_ = partition_routes(std::move(unrouted));
  }
  tt.validate();
  return tt;
}

void save_canonical(timetable const& tt, std::string const& path) {
  auto out = std::ofstream{path, std::ios::binary};
  if (!out) {
    throw std::runtime_error{fmt::format("cannot write {}", path)};
  }
  write_canonical(out, tt);
}

timetable load_canonical(std::string const& path) {
  auto in = std::ifstream{path, std::ios::binary};
  if (!in) {
    throw invalid_data{fmt::format("cannot open {}", path)};
  }
  return read_canonical(in);
}

}  // namespace tb
