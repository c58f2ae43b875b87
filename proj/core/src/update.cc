#include "tb/update.h"

#include <algorithm>
#include <set>

#include "fmt/core.h"

#include "tb/parallel.h"

namespace tb {

namespace {

struct editor {
  void apply(remove_edit const& e) {
    auto const [r, i] = tt_.find_trip(e.trip_);
    auto& t = tt_.routes_[r.v_].trips_[i];
    if (e.days_.size() != tt_.horizon_days_) {
      throw invalid_data{fmt::format("remove \"{}\": day set length {} differs from the horizon",
                                     e.trip_, e.days_.size())};
    }
    if (!e.days_.is_subset_of(t.active_days_)) {
      throw invalid_data{
          fmt::format("remove \"{}\": trip does not run on all given days", e.trip_)};
    }
    touch(t.stops_);
    t.active_days_ -= e.days_;
    if (t.active_days_.none()) {
      erase_trip(r, i);
    }
  }

  void apply(add_edit const& e) { insert_trip(e.trip_); }

  void apply(delay_edit const& e) {
    auto const [r, i] = tt_.find_trip(e.trip_);
    auto t = tt_.routes_[r.v_].trips_[i];
    if (e.day_ < 0 || static_cast<std::uint32_t>(e.day_) >= tt_.horizon_days_ ||
        !t.active_days_.test(static_cast<std::size_t>(e.day_))) {
      throw invalid_data{
          fmt::format("delay \"{}\": trip does not run on day {}", e.trip_, e.day_)};
    }
    if (e.delta_.size() != 1U && e.delta_.size() != t.stops_.size()) {
      throw invalid_data{fmt::format(
          "delay \"{}\": expected 1 or {} delay values", e.trip_, t.stops_.size())};
    }
    for (auto k = 0U; k != t.stops_.size(); ++k) {
      auto const d = e.delta_.size() == 1U ? e.delta_[0] : e.delta_[k];
      if (d < 0) {
        throw invalid_data{fmt::format("delay \"{}\": negative delay", e.trip_)};
      }
      t.arr_[k] += d;
      t.dep_[k] += d;
    }
    auto days = day_bitset{tt_.horizon_days_};
    days.set(static_cast<std::size_t>(e.day_));
    t.id_ = fmt::format("{}#d{}", e.trip_, e.day_);
    t.active_days_ = days;
    apply(remove_edit{e.trip_, days});
    insert_trip(std::move(t));
  }

  void insert_trip(trip t) {
    validate_trip(t, tt_.horizon_days_, tt_.n_stops());
    for (auto const& r : tt_.routes_) {
      for (auto const& u : r.trips_) {
        if (u.id_ == t.id_) {
          throw invalid_data{fmt::format("add: trip id \"{}\" already exists", t.id_)};
        }
      }
    }
    touch(t.stops_);

    for (auto r = 0U; r != tt_.n_routes(); ++r) {
      auto& trips = tt_.routes_[r].trips_;
      if (tt_.routes_[r].stops_ != t.stops_) {
        continue;
      }
      auto const n = static_cast<std::uint32_t>(trips.size());
      for (auto p = 0U; p <= n; ++p) {
        auto const& first = p == 0U ? t : trips.front();
        auto const& last = p == n ? t : trips.back();
        if ((p == 0U || precedes(trips[p - 1U], t)) &&
            (p == n || precedes(t, trips[p])) &&
            precedes(last, first, kSecondsPerDay)) {
          for (auto& routes : ts_.rows_) {
            for (auto& row : routes) {
              for (auto& x : row) {
                if (x.to_route_.v_ == r && x.to_trip_ >= p) {
                  ++x.to_trip_;
                }
              }
            }
          }
          trips.insert(begin(trips) + p, std::move(t));
          ts_.rows_[r].insert(begin(ts_.rows_[r]) + p, transfer_set::row_t{});
          return;
        }
      }
    }

    auto stops = t.stops_;
    tt_.routes_.push_back(route{.stops_ = std::move(stops), .trips_ = {}});
    tt_.routes_.back().trips_.push_back(std::move(t));
    ts_.rows_.emplace_back(1U);
  }

  void erase_trip(route_idx_t const r, std::uint32_t const i) {
    auto& trips = tt_.routes_[r.v_].trips_;
    trips.erase(begin(trips) + i);
    ts_.rows_[r.v_].erase(begin(ts_.rows_[r.v_]) + i);
    for (auto& routes : ts_.rows_) {
      for (auto& row : routes) {
        std::erase_if(row, [&](transfer const& x) {
          return x.to_route_ == r && x.to_trip_ == i;
        });
        for (auto& x : row) {
          if (x.to_route_ == r && x.to_trip_ > i) {
            --x.to_trip_;
          }
        }
      }
    }
  }

  void touch(std::vector<stop_idx_t> const& stops) {
    touched_.insert(begin(stops), end(stops));
  }

  timetable& tt_;
  transfer_set& ts_;
  std::set<stop_idx_t> touched_;
};

}  // namespace

std::vector<std::pair<route_idx_t, std::uint32_t>> affected_trips(
    timetable const& tt, timetable_index const& idx,
    std::vector<stop_idx_t> const& stops) {
  auto visit = std::vector<bool>(tt.n_stops(), false);
  for (auto const s : stops) {
    visit[s.v_] = true;
    for (auto const& w : idx.fp_in_[s.v_]) {
      visit[w.stop_.v_] = true;
    }
  }
  auto out = std::vector<std::pair<route_idx_t, std::uint32_t>>{};
  for (auto r = 0U; r != tt.n_routes(); ++r) {
    auto const& route = tt.routes_[r];
    if (std::any_of(begin(route.stops_), end(route.stops_),
                    [&](stop_idx_t const s) { return visit[s.v_]; })) {
      for (auto i = 0U; i != route.n_trips(); ++i) {
        out.emplace_back(route_idx_t{r}, i);
      }
    }
  }
  return out;
}

update_stats apply_batch(timetable& tt, transfer_set& reduced,
                         std::span<timetable_edit const> const edits,
                         preprocess_options const& opt) {
  auto const start = std::chrono::steady_clock::now();
  if (reduced.rows_.size() != tt.n_routes() || reduced.horizon_days_ != tt.horizon_days_) {
    throw invalid_data{"transfer set does not match timetable"};
  }

  auto next_tt = tt;
  auto next_ts = reduced;
  auto ed = editor{next_tt, next_ts, {}};
  for (auto const& e : edits) {
    std::visit([&](auto const& x) { ed.apply(x); }, e);
  }

  auto const idx = timetable_index{next_tt};
  auto const affected = affected_trips(
      next_tt, idx, std::vector<stop_idx_t>(begin(ed.touched_), end(ed.touched_)));
  parallel_for(affected.size(), opt.workers_, [&](std::size_t const k) {
    auto const [r, i] = affected[k];
    next_ts.rows_[r.v_][i] = reduce_trip_transfers(
        next_tt, idx, r, i, compute_trip_transfers(next_tt, idx, r, i, opt));
  });

  tt = std::move(next_tt);
  reduced = std::move(next_ts);
  return update_stats{
      .edits_ = edits.size(),
      .trips_recomputed_ = affected.size(),
      .time_ = std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::steady_clock::now() - start)};
}

update_stats remove_trip(timetable& tt, transfer_set& ts, std::string const& trip_id,
                         day_bitset const& days, preprocess_options const& opt) {
  auto const e = timetable_edit{remove_edit{trip_id, days}};
  return apply_batch(tt, ts, {&e, 1U}, opt);
}

update_stats add_trip(timetable& tt, transfer_set& ts, trip t,
                      preprocess_options const& opt) {
  auto const e = timetable_edit{add_edit{std::move(t)}};
  return apply_batch(tt, ts, {&e, 1U}, opt);
}

update_stats delay_trip(timetable& tt, transfer_set& ts, std::string const& trip_id,
                        day_idx_t const day, std::vector<seconds_t> delta,
                        preprocess_options const& opt) {
  auto const e = timetable_edit{delay_edit{trip_id, day, std::move(delta)}};
  return apply_batch(tt, ts, {&e, 1U}, opt);
}

}  // namespace tb
