#include "tb/model.h"

#include <algorithm>
#include <set>

#include "fmt/core.h"

namespace tb {

std::size_t timetable::n_trips() const {
  auto n = std::size_t{0U};
  for (auto const& r : routes_) {
    n += r.trips_.size();
  }
  return n;
}

std::size_t timetable::n_trip_days() const {
  auto n = std::size_t{0U};
  for (auto const& r : routes_) {
    for (auto const& t : r.trips_) {
      n += t.active_days_.count();
    }
  }
  return n;
}

seconds_t timetable::change_time(stop_idx_t const s, route_idx_t const from,
                                 route_idx_t const to) const {
  if (!change_overrides_.empty()) {
    auto const it = change_overrides_.find({s, from, to});
    if (it != end(change_overrides_)) {
      return it->second;
    }
  }
  return stops_[s.v_].min_change_time_;
}

stop_idx_t timetable::find_stop(std::string_view const id) const {
  auto const it = std::find_if(begin(stops_), end(stops_),
                               [&](stop const& s) { return s.id_ == id; });
  if (it == end(stops_)) {
    throw lookup_error{fmt::format("unknown stop \"{}\"", id)};
  }
  return stop_idx_t{static_cast<std::uint32_t>(it - begin(stops_))};
}

std::pair<route_idx_t, std::uint32_t> timetable::find_trip(
    std::string_view const id) const {
  for (auto r = 0U; r != routes_.size(); ++r) {
    auto const& trips = routes_[r].trips_;
    for (auto i = 0U; i != trips.size(); ++i) {
      if (trips[i].id_ == id) {
        return {route_idx_t{r}, i};
      }
    }
  }
  throw lookup_error{fmt::format("unknown trip \"{}\"", id)};
}

bool precedes(trip const& a, trip const& b, seconds_t const shift_b) {
  auto const n = a.size();
  for (auto i = 0U; i != n; ++i) {
    if (i != 0U && a.arr(i) > b.arr(i) + shift_b) {
      return false;
    }
    if (i + 1U != n && a.dep(i) > b.dep(i) + shift_b) {
      return false;
    }
  }
  return true;
}

bool is_ordered(route const& r) {
  for (auto i = 1U; i < r.trips_.size(); ++i) {
    if (!precedes(r.trips_[i - 1U], r.trips_[i])) {
      return false;
    }
  }
  return r.trips_.empty() ||
         precedes(r.trips_.back(), r.trips_.front(), kSecondsPerDay);
}

void validate_trip(trip const& t, std::uint32_t const horizon_days,
                   std::size_t const n_stops) {
  auto const fail = [&](std::string_view what) {
    throw invalid_data{fmt::format("trip \"{}\": {}", t.id_, what)};
  };
  auto const n = t.stops_.size();
  if (n < 2U) {
    fail("needs at least two stops");
  }
  if (t.arr_.size() != n || t.dep_.size() != n) {
    fail("arrival/departure vectors do not match stop count");
  }
  if (t.active_days_.size() != horizon_days) {
    fail("active day bitset length differs from the horizon");
  }
  if (t.active_days_.none()) {
    fail("no active day");
  }
  for (auto const s : t.stops_) {
    if (s.v_ >= n_stops) {
      fail("references an unknown stop");
    }
  }
  for (auto i = 0U; i != n; ++i) {
    if (t.arr_[i] < 0 || t.dep_[i] < 0) {
      fail("negative time");
    }
    if (i != 0U && i + 1U != n && t.arr_[i] > t.dep_[i]) {
      fail(fmt::format("departs before arriving at stop index {}", i));
    }
    if (i + 1U != n && t.dep_[i] > t.arr_[i + 1U]) {
      fail(fmt::format("arrives at stop index {} before departing the previous",
                       i + 1U));
    }
  }
}

void timetable::validate() const {
  if (horizon_days_ == 0U) {
    throw invalid_data{"horizon must cover at least one day"};
  }
  auto seen = std::set<std::pair<std::uint32_t, std::uint32_t>>{};
  for (auto const& s : stops_) {
    if (s.min_change_time_ < 0) {
      throw invalid_data{
          fmt::format("stop \"{}\": negative minimum change time", s.id_)};
    }
  }
  for (auto const& fp : footpaths_) {
    if (fp.from_.v_ >= stops_.size() || fp.to_.v_ >= stops_.size()) {
      throw invalid_data{"footpath references an unknown stop"};
    }
    if (fp.from_ == fp.to_) {
      throw invalid_data{fmt::format("footpath loops at stop \"{}\"",
                                     stops_[fp.from_.v_].id_)};
    }
    if (fp.duration_ <= 0) {
      throw invalid_data{"footpath duration must be positive"};
    }
    if (!seen.emplace(fp.from_.v_, fp.to_.v_).second) {
      throw invalid_data{fmt::format("duplicate footpath {} -> {}",
                                     stops_[fp.from_.v_].id_,
                                     stops_[fp.to_.v_].id_)};
    }
  }
  for (auto r = 0U; r != routes_.size(); ++r) {
    auto const& route = routes_[r];
    for (auto const s : route.stops_) {
      if (s.v_ >= stops_.size()) {
        throw invalid_data{fmt::format("route {} references an unknown stop", r)};
      }
    }
    for (auto const& t : route.trips_) {
      validate_trip(t, horizon_days_, stops_.size());
      if (t.stops_ != route.stops_) {
        throw invalid_data{fmt::format(
            "trip \"{}\" does not follow the stop sequence of route {}", t.id_,
            r)};
      }
    }
    if (!is_ordered(route)) {
      throw invalid_data{fmt::format("route {} violates the trip order", r)};
    }
  }
  for (auto const& [key, secs] : change_overrides_) {
    if (key.stop_.v_ >= stops_.size() || key.from_route_.v_ >= routes_.size() ||
        key.to_route_.v_ >= routes_.size() || secs < 0) {
      throw invalid_data{"invalid change time override"};
    }
  }
}

timetable_index::timetable_index(timetable const& tt)
    : routes_at_(tt.n_stops()),
      fp_out_(tt.n_stops()),
      fp_in_(tt.n_stops()),
      has_override_(tt.n_stops(), false) {
  for (auto r = 0U; r != tt.routes_.size(); ++r) {
    auto const& stops = tt.routes_[r].stops_;
    for (auto i = 0U; i != stops.size(); ++i) {
      routes_at_[stops[i].v_].push_back({route_idx_t{r}, i});
    }
  }
  for (auto const& fp : tt.footpaths_) {
    fp_out_[fp.from_.v_].push_back({fp.to_, fp.duration_});
    fp_in_[fp.to_.v_].push_back({fp.from_, fp.duration_});
  }
  auto const by_stop = [](walk const& a, walk const& b) {
    return a.stop_ < b.stop_;
  };
  for (auto& v : fp_out_) {
    std::sort(begin(v), end(v), by_stop);
  }
  for (auto& v : fp_in_) {
    std::sort(begin(v), end(v), by_stop);
  }
  for (auto const& [key, secs] : tt.change_overrides_) {
    has_override_[key.stop_.v_] = true;
  }
}

seconds_t timetable_index::footpath_duration(stop_idx_t const from,
                                             stop_idx_t const to) const {
  for (auto const& w : fp_out_[from.v_]) {
    if (w.stop_ == to) {
      return w.duration_;
    }
  }
  return kInfinity;
}

}  // namespace tb
