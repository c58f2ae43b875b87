#include "tb/preprocess.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "tb/parallel.h"

namespace tb {

std::vector<route> partition_routes(std::vector<trip> trips) {
  auto group_of = std::map<std::vector<stop_idx_t>, std::size_t>{};
  auto groups = std::vector<std::vector<std::size_t>>{};
  for (auto i = std::size_t{0U}; i != trips.size(); ++i) {
    auto const [it, inserted] =
        group_of.emplace(trips[i].stops_, groups.size());
    if (inserted) {
      groups.emplace_back();
    }
    groups[it->second].push_back(i);
  }

  auto routes = std::vector<route>{};
  for (auto& group : groups) {
    std::stable_sort(begin(group), end(group),
                     [&](std::size_t const a, std::size_t const b) {
                       auto const& x = trips[a];
                       auto const& y = trips[b];
                       auto const last = x.size() - 1U;
                       return std::tuple{x.dep(0U), x.arr(last), a} <
                              std::tuple{y.dep(0U), y.arr(last), b};
                     });
    auto const first_route = routes.size();
    for (auto const i : group) {
      auto& t = trips[i];
      auto const fits = [&](route const& r) {
        return precedes(r.trips_.back(), t) &&
               precedes(t, r.trips_.front(), kSecondsPerDay);
      };
      auto const it = std::find_if(begin(routes) + first_route, end(routes), fits);
      if (it == end(routes)) {
        routes.push_back(route{.stops_ = t.stops_, .trips_ = {}});
        routes.back().trips_.push_back(std::move(t));
      } else {
        it->trips_.push_back(std::move(t));
      }
    }
  }
  return routes;
}

transfer_set::row_t compute_trip_transfers(timetable const& tt,
                                           timetable_index const& idx,
                                           route_idx_t const from_route,
                                           std::uint32_t const from_trip,
                                           preprocess_options const& opt) {
  auto const& t = tt.get(from_route).trips_[from_trip];
  auto out = transfer_set::row_t{};

  for (auto e = pos_t{1U}; e != t.size(); ++e) {
    auto const arrival = t.arr(e);
    auto const exit_stop = t.stops_[e];

    // walk < 0: change at the exit stop itself
    auto const collect = [&](stop_idx_t const target, seconds_t const walk) {
      for (auto const& rs : idx.routes_at_[target.v_]) {
        auto const& to = tt.get(rs.route_);
        if (rs.pos_ + 1U >= to.size() || to.trips_.empty()) {
          continue;
        }
        auto const slack =
            walk < 0 ? tt.change_time(exit_stop, from_route, rs.route_) : walk;
        auto const ready = arrival + slack;
        auto remaining = t.active_days_;
        for (auto shift = 0U; shift <= opt.max_day_shift_ && remaining.any();
             ++shift) {
          auto const min_dep =
              ready - static_cast<seconds_t>(shift) * kSecondsPerDay;
          auto const first = std::partition_point(
              begin(to.trips_), end(to.trips_),
              [&](trip const& u) { return u.dep(rs.pos_) < min_dep; });
          for (auto it = first; it != end(to.trips_) && remaining.any(); ++it) {
            auto days = remaining & it->active_days_.shifted_down(shift);
            if (days.none()) {
              continue;
            }
            remaining -= days;
            out.push_back(transfer{
                .from_stop_ = e,
                .to_route_ = rs.route_,
                .to_trip_ = static_cast<std::uint32_t>(it - begin(to.trips_)),
                .to_stop_ = rs.pos_,
                .day_shift_ = static_cast<std::uint8_t>(shift),
                .valid_days_ = std::move(days)});
          }
        }
      }
    };

    collect(exit_stop, -1);
    for (auto const& w : idx.fp_out_[exit_stop.v_]) {
      collect(w.stop_, w.duration_);
    }
  }

  std::sort(begin(out), end(out), [](transfer const& a, transfer const& b) {
    return a.key() < b.key();
  });
  auto merged = transfer_set::row_t{};
  for (auto& x : out) {
    if (!merged.empty() && merged.back().key() == x.key()) {
      merged.back().valid_days_ |= x.valid_days_;
    } else {
      merged.push_back(std::move(x));
    }
  }
  return merged;
}

namespace {

// Earliest known times, relative to midnight of the source trip's day.
struct labels {
  void reset(std::size_t const n_stops) {
    if (arr_.size() != n_stops) {
      arr_.assign(n_stops, kInfinity);
      ready_.assign(n_stops, kInfinity);
      touched_.clear();
    }
    for (auto const s : touched_) {
      arr_[s] = kInfinity;
      ready_[s] = kInfinity;
    }
    touched_.clear();
    by_route_.clear();
  }

  static bool improve(std::vector<abs_time_t>& v, std::uint32_t const s,
                      abs_time_t const t) {
    if (t < v[s]) {
      v[s] = t;
      return true;
    }
    return false;
  }

  // Arrival by a trip of route r. At stops with route-pair change time
  // overrides the change opportunity depends on the arriving route, so it is
  // tracked per route there.
  bool arrive(timetable const& tt, timetable_index const& idx,
              stop_idx_t const s, route_idx_t const r, abs_time_t const t) {
    touched_.push_back(s.v_);
    auto improved = improve(arr_, s.v_, t);
    if (idx.has_override_[s.v_]) {
      auto const [it, inserted] = by_route_.emplace(std::pair{s.v_, r.v_}, t);
      if (inserted || t < it->second) {
        it->second = t;
        improved = true;
      }
    } else {
      improved |= improve(ready_, s.v_, t + tt.get(s).min_change_time_);
    }
    for (auto const& w : idx.fp_out_[s.v_]) {
      touched_.push_back(w.stop_.v_);
      improved |= improve(arr_, w.stop_.v_, t + w.duration_);
      improved |= improve(ready_, w.stop_.v_, t + w.duration_);
    }
    return improved;
  }

  std::vector<abs_time_t> arr_;
  // non-override stops: earliest boarding time via change time or walking;
  // override stops: via walking only
  std::vector<abs_time_t> ready_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, abs_time_t> by_route_;
  std::vector<std::uint32_t> touched_;
};

// Scalar reduction for one source day. `active` lists the row entries valid
// on that day in row order; returns the subset that is kept.
std::vector<std::uint32_t> reduce_one_day(timetable const& tt,
                                          timetable_index const& idx,
                                          route_idx_t const from_route,
                                          trip const& t,
                                          transfer_set::row_t const& row,
                                          std::vector<std::uint32_t> const& active,
                                          labels& l) {
  l.reset(tt.n_stops());
  auto kept = std::vector<std::uint32_t>{};
  auto next = active.size();  // entries [next, size) are processed
  for (auto e = t.size() - 1U; e != 0U; --e) {
    l.arrive(tt, idx, t.stops_[e], from_route, t.arr(e));

    auto first = next;
    while (first != 0U && row[active[first - 1U]].from_stop_ == e) {
      --first;
    }
    for (auto k = first; k != next; ++k) {
      auto const& tr = row[active[k]];
      auto const& u = tt.get(tr.to_route_).trips_[tr.to_trip_];
      auto const shift = static_cast<seconds_t>(tr.day_shift_) * kSecondsPerDay;
      auto improved = false;
      for (auto j = tr.to_stop_ + 1U; j < u.size(); ++j) {
        improved |= l.arrive(tt, idx, u.stops_[j], tr.to_route_, u.arr(j) + shift);
      }
      if (improved) {
        kept.push_back(active[k]);
      }
    }
    next = first;
  }
  return kept;
}

}  // namespace

transfer_set::row_t reduce_trip_transfers(timetable const& tt,
                                          timetable_index const& idx,
                                          route_idx_t const from_route,
                                          std::uint32_t const from_trip,
                                          transfer_set::row_t const& full) {
  thread_local auto l = labels{};
  auto const& t = tt.get(from_route).trips_[from_trip];

  auto kept_days = std::vector<day_bitset>(full.size(), day_bitset{tt.horizon_days_});
  // Days with the same set of valid transfers reduce identically: all times
  // are relative to the source day.
  auto memo = std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>>{};
  auto active = std::vector<std::uint32_t>{};
  t.active_days_.for_each_day([&](day_idx_t const d) {
    active.clear();
    for (auto k = 0U; k != full.size(); ++k) {
      if (full[k].valid_days_.test(static_cast<std::size_t>(d))) {
        active.push_back(k);
      }
    }
    if (active.empty()) {
      return;
    }
    auto it = memo.find(active);
    if (it == end(memo)) {
      it = memo.emplace(active, reduce_one_day(tt, idx, from_route, t, full,
                                               active, l))
               .first;
    }
    for (auto const k : it->second) {
      kept_days[k].set(static_cast<std::size_t>(d));
    }
  });

  auto out = transfer_set::row_t{};
  for (auto k = 0U; k != full.size(); ++k) {
    if (kept_days[k].any()) {
      out.push_back(full[k]);
      out.back().valid_days_ = std::move(kept_days[k]);
    }
  }
  return out;
}

namespace {

struct trip_slot {
  route_idx_t route_;
  std::uint32_t trip_;
};

std::vector<trip_slot> all_trips(timetable const& tt) {
  auto out = std::vector<trip_slot>{};
  out.reserve(tt.n_trips());
  for (auto r = 0U; r != tt.routes_.size(); ++r) {
    for (auto i = 0U; i != tt.routes_[r].trips_.size(); ++i) {
      out.push_back({route_idx_t{r}, i});
    }
  }
  return out;
}

transfer_set empty_like(timetable const& tt, bool const reduced) {
  auto ts = transfer_set{};
  ts.reduced_ = reduced;
  ts.horizon_days_ = tt.horizon_days_;
  ts.rows_.resize(tt.routes_.size());
  for (auto r = 0U; r != tt.routes_.size(); ++r) {
    ts.rows_[r].resize(tt.routes_[r].trips_.size());
  }
  return ts;
}

}  // namespace

transfer_set compute_transfers(timetable const& tt,
                               preprocess_options const& opt) {
  auto const idx = timetable_index{tt};
  auto const slots = all_trips(tt);
  auto ts = empty_like(tt, false);
  parallel_for(slots.size(), opt.workers_, [&](std::size_t const i) {
    auto const [r, t] = slots[i];
    ts.rows_[r.v_][t] = compute_trip_transfers(tt, idx, r, t, opt);
  });
  return ts;
}

transfer_set reduce_transfers(timetable const& tt, transfer_set const& full,
                              preprocess_options const& opt) {
  auto const idx = timetable_index{tt};
  auto const slots = all_trips(tt);
  auto ts = empty_like(tt, true);
  parallel_for(slots.size(), opt.workers_, [&](std::size_t const i) {
    auto const [r, t] = slots[i];
    ts.rows_[r.v_][t] = reduce_trip_transfers(tt, idx, r, t, full.rows_[r.v_][t]);
  });
  return ts;
}

preprocess_result preprocess(timetable const& tt, preprocess_options const& opt) {
  using clock = std::chrono::steady_clock;
  auto res = preprocess_result{};
  auto const t0 = clock::now();
  res.full_ = compute_transfers(tt, opt);
  auto const t1 = clock::now();
  res.reduced_ = reduce_transfers(tt, res.full_, opt);
  auto const t2 = clock::now();
  res.compute_time_ = t1 - t0;
  res.reduce_time_ = t2 - t1;
  return res;
}

bool is_feasible(timetable const& tt, timetable_index const& idx,
                 route_idx_t const from_route, std::uint32_t const from_trip,
                 transfer const& tr) {
  if (from_route.v_ >= tt.n_routes() || tr.to_route_.v_ >= tt.n_routes()) {
    return false;
  }
  auto const& from = tt.get(from_route);
  auto const& to = tt.get(tr.to_route_);
  if (from_trip >= from.n_trips() || tr.to_trip_ >= to.n_trips()) {
    return false;
  }
  auto const& t = from.trips_[from_trip];
  auto const& u = to.trips_[tr.to_trip_];
  if (tr.from_stop_ == 0U || tr.from_stop_ >= t.size() ||
      tr.to_stop_ + 1U >= u.size()) {
    return false;
  }
  auto const s1 = t.stops_[tr.from_stop_];
  auto const s2 = u.stops_[tr.to_stop_];
  auto const slack = s1 == s2 ? tt.change_time(s1, from_route, tr.to_route_)
                              : idx.footpath_duration(s1, s2);
  if (slack == kInfinity) {
    return false;
  }
  auto const shift = static_cast<seconds_t>(tr.day_shift_) * kSecondsPerDay;
  if (t.arr(tr.from_stop_) + slack > u.dep(tr.to_stop_) + shift) {
    return false;
  }
  auto const both = t.active_days_ & u.active_days_.shifted_down(tr.day_shift_);
  return tr.valid_days_.any() && tr.valid_days_.is_subset_of(both);
}

}  // namespace tb
