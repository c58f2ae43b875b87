#include "tb/query.h"

#include <algorithm>
#include <ostream>

#include "fmt/core.h"
#include "nlohmann/json.hpp"

#include "tb/time_format.h"

#include "search.h"

namespace tb {

std::vector<std::tuple<abs_time_t, abs_time_t, std::uint32_t>> query_result::front()
    const {
  auto f = std::vector<std::tuple<abs_time_t, abs_time_t, std::uint32_t>>{};
  for (auto const& j : journeys_) {
    f.push_back(j.criteria());
  }
  std::sort(begin(f), end(f));
  return f;
}

bool dominates(journey const& a, journey const& b) {
  return a.dep_ >= b.dep_ && a.arr_ <= b.arr_ && a.transfers_ <= b.transfers_ &&
         (a.dep_ > b.dep_ || a.arr_ < b.arr_ || a.transfers_ < b.transfers_);
}

std::vector<journey> pareto_filter(std::vector<journey> journeys) {
  auto kept = std::vector<journey>{};
  for (auto const& j : journeys) {
    auto const dominated = std::any_of(begin(journeys), end(journeys),
                                       [&](journey const& o) { return dominates(o, j); });
    auto const duplicate = std::any_of(begin(kept), end(kept), [&](journey const& o) {
      return o.criteria() == j.criteria();
    });
    if (!dominated && !duplicate) {
      kept.push_back(j);
    }
  }
  std::stable_sort(begin(kept), end(kept), [](journey const& a, journey const& b) {
    return a.criteria() < b.criteria();
  });
  return kept;
}

void reached_set::reset(std::size_t const n_routes) {
  sets_.resize(n_routes);
  for (auto& s : sets_) {
    s.clear();
  }
}

std::optional<pos_t> reached_set::insert(std::uint32_t const route,
                                         std::uint64_t const key, pos_t const pos,
                                         std::uint8_t const n, pos_t const last_pos) {
  auto& set = sets_[route];
  auto cap = last_pos;
  for (auto const& e : set) {
    if (e.key_ <= key && e.n_ <= n) {
      if (e.pos_ <= pos) {
        return std::nullopt;
      }
      cap = std::min(cap, e.pos_);
    }
  }
  std::erase_if(set, [&](entry const& e) {
    return key <= e.key_ && pos <= e.pos_ && n <= e.n_;
  });
  set.push_back(entry{key, pos, n});
  assert(is_antichain());
  return cap;
}

bool reached_set::is_antichain() const {
  for (auto const& set : sets_) {
    for (auto const& a : set) {
      for (auto const& b : set) {
        if (&a != &b && a.key_ <= b.key_ && a.pos_ <= b.pos_ && a.n_ <= b.n_) {
          return false;
        }
      }
    }
  }
  return true;
}

query_result earliest_arrival_query(day_view const& v, stop_idx_t const source,
                                    stop_idx_t const destination,
                                    abs_time_t const departure,
                                    query_options const& opt) {
  auto const q = v.query_day();
  if (departure < abs_time(q, 0) || departure >= abs_time(q + 1, 0)) {
    throw range_error{fmt::format("departure {} not on query day {}", departure, q)};
  }
  auto const g = detail::view_graph{v};
  auto reached = reached_set{};
  return detail::search<detail::view_graph>{g, reached, opt}.earliest_arrival(
      source, destination, departure);
}

query_result profile_query(day_view const& v, stop_idx_t const source,
                           stop_idx_t const destination, query_options const& opt) {
  auto const g = detail::view_graph{v};
  auto reached = reached_set{};
  auto const q = v.query_day();
  return detail::search<detail::view_graph>{g, reached, opt}.profile(
      source, destination, abs_time(q, 0), abs_time(q + 1, 0));
}

query_result earliest_arrival_query(flat_timetable const& ft,
                                    stop_idx_t const source,
                                    stop_idx_t const destination,
                                    abs_time_t const departure,
                                    query_options const& opt) {
  auto const w = ft.window_start();
  if (departure < abs_time(w, 0) ||
      departure >= abs_time(w + static_cast<day_idx_t>(ft.window_length()), 0)) {
    throw range_error{fmt::format("departure {} outside the flattened window", departure)};
  }
  auto const g = detail::flat_graph{ft};
  auto reached = detail::unrolled_reached{ft, opt.max_transfers_};
  return detail::search<detail::flat_graph>{g, reached, opt}.earliest_arrival(
      source, destination, departure);
}

query_result profile_query(flat_timetable const& ft, stop_idx_t const source,
                           stop_idx_t const destination, day_idx_t const q,
                           query_options const& opt) {
  auto const g = detail::flat_graph{ft};
  auto reached = detail::unrolled_reached{ft, opt.max_transfers_};
  return detail::search<detail::flat_graph>{g, reached, opt}.profile(
      source, destination, abs_time(q, 0), abs_time(q + 1, 0));
}

flat_timetable flatten_for_query(timetable const& tt, transfer_set const& ts,
                                 day_idx_t const q, std::uint32_t const horizon,
                                 std::shared_ptr<timetable_index const> index) {
  if (q < 0 || static_cast<std::uint32_t>(q) >= tt.horizon_days_) {
    throw range_error{fmt::format("query day {} outside horizon [0, {})", q,
                                  tt.horizon_days_)};
  }
  auto const first = std::max(0, q - 1);
  auto const last = std::min<std::int64_t>(static_cast<std::int64_t>(q) + horizon,
                                           tt.horizon_days_);
  return flatten_window(tt, ts, first, static_cast<std::uint32_t>(last - first),
                        std::move(index));
}

std::string validate_journey(timetable const& tt, timetable_index const& idx,
                             journey const& j, stop_idx_t const source,
                             stop_idx_t const destination) {
  auto at = source;
  auto time = j.dep_;
  auto prev_route = route_idx_t::invalid();
  auto walked = false;
  auto n_trips = 0U;
  for (auto const& l : j.legs_) {
    if (auto const* w = std::get_if<walk_leg>(&l); w != nullptr) {
      if (w->from_ != at) {
        return "walk does not start where the previous leg ended";
      }
      if (walked) {
        return "two consecutive walks";
      }
      auto const d = idx.footpath_duration(w->from_, w->to_);
      if (d == kInfinity || d != w->duration_) {
        return "walk is not a footpath of the timetable";
      }
      time += d;
      at = w->to_;
      walked = true;
      continue;
    }

    auto const& t = std::get<trip_leg>(l);
    if (t.route_.v_ >= tt.n_routes() || t.trip_ >= tt.get(t.route_).n_trips()) {
      return "unknown trip";
    }
    auto const& r = tt.get(t.route_);
    auto const& tr = r.trips_[t.trip_];
    if (t.day_ < 0 || static_cast<std::uint32_t>(t.day_) >= tt.horizon_days_ ||
        !tr.active_days_.test(static_cast<std::size_t>(t.day_))) {
      return "trip does not run on the leg's day";
    }
    if (t.board_ >= t.exit_ || t.exit_ >= r.size()) {
      return "board index not before exit index";
    }
    if (r.stops_[t.board_] != at) {
      return "trip boarded away from the current stop";
    }
    auto const dep = abs_time(t.day_, tr.dep(t.board_));
    auto const arr = abs_time(t.day_, tr.arr(t.exit_));
    if (dep != t.dep_ || arr != t.arr_) {
      return "leg times differ from the timetable";
    }
    if (prev_route.valid() && !walked) {
      time += tt.change_time(at, prev_route, t.route_);
    }
    if (n_trips == 0U && dep != time) {
      return "journey departure is not the first boarding";
    }
    if (dep < time) {
      return "connection missed";
    }
    time = arr;
    at = r.stops_[t.exit_];
    prev_route = t.route_;
    walked = false;
    ++n_trips;
  }
  if (at != destination) {
    return "journey does not end at the destination";
  }
  if (n_trips == 0U) {
    return j.legs_.empty() && source == destination && j.dep_ == j.arr_
               ? ""
               : "journey without trips";
  }
  if (time != j.arr_) {
    return "arrival differs from the last leg";
  }
  if (j.transfers_ + 1U != n_trips) {
    return "transfer count differs from trip legs - 1";
  }
  return "";
}

std::string journey_to_json(timetable const& tt, journey const& j) {
  auto const iso = [&](abs_time_t const t) { return format_iso(tt.start_date_, t); };
  auto legs = nlohmann::json::array();
  for (auto const& l : j.legs_) {
    if (auto const* w = std::get_if<walk_leg>(&l); w != nullptr) {
      legs.push_back({{"type", "walk"},
                      {"from", tt.get(w->from_).id_},
                      {"to", tt.get(w->to_).id_},
                      {"duration", w->duration_}});
    } else {
      auto const& t = std::get<trip_leg>(l);
      auto const& r = tt.get(t.route_);
      legs.push_back({{"type", "trip"},
                      {"trip", r.trips_[t.trip_].id_},
                      {"route", t.route_.v_},
                      {"day", t.day_},
                      {"from", tt.get(r.stops_[t.board_]).id_},
                      {"to", tt.get(r.stops_[t.exit_]).id_},
                      {"board", t.board_},
                      {"exit", t.exit_},
                      {"dep", iso(t.dep_)},
                      {"arr", iso(t.arr_)}});
    }
  }
  auto const out = nlohmann::json{{"dep", iso(j.dep_)},
                                  {"arr", iso(j.arr_)},
                                  {"transfers", j.transfers_},
                                  {"legs", std::move(legs)}};
  return out.dump();
}

void write_journeys_jsonl(std::ostream& out, timetable const& tt,
                          std::vector<journey> const& journeys) {
  for (auto const& j : journeys) {
    out << journey_to_json(tt, j) << '\n';
  }
}

void write_journeys_text(std::ostream& out, timetable const& tt,
                         std::vector<journey> const& journeys) {
  auto const iso = [&](abs_time_t const t) { return format_iso(tt.start_date_, t); };
  for (auto const& j : journeys) {
    out << fmt::format("{} -> {}  transfers={}\n", iso(j.dep_), iso(j.arr_),
                       j.transfers_);
    for (auto const& l : j.legs_) {
      if (auto const* w = std::get_if<walk_leg>(&l); w != nullptr) {
        out << fmt::format("  walk {} -> {} ({}s)\n", tt.get(w->from_).id_,
                           tt.get(w->to_).id_, w->duration_);
      } else {
        auto const& t = std::get<trip_leg>(l);
        auto const& r = tt.get(t.route_);
        out << fmt::format("  {} {} {} -> {} {}\n", r.trips_[t.trip_].id_,
                           tt.get(r.stops_[t.board_]).id_, iso(t.dep_),
                           tt.get(r.stops_[t.exit_]).id_, iso(t.arr_));
      }
    }
  }
}

}  // namespace tb
