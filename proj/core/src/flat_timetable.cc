#include "tb/flat_timetable.h"

#include <algorithm>
#include <limits>

#include "fmt/core.h"

namespace tb {

flat_timetable flatten_window(timetable const& tt, transfer_set const& ts,
                              day_idx_t const window_start,
                              std::uint32_t const window_length,
                              std::shared_ptr<timetable_index const> index) {
  if (window_start < 0 || window_length == 0U ||
      static_cast<std::uint64_t>(window_start) + window_length > tt.horizon_days_) {
    throw range_error{fmt::format("window [{}, {}+{}) outside horizon [0, {})",
                                  window_start, window_start, window_length,
                                  tt.horizon_days_)};
  }
  if (ts.rows_.size() != tt.n_routes()) {
    throw invalid_data{"transfer set does not match timetable"};
  }

  auto ft = flat_timetable{};
  ft.tt_ = &tt;
  ft.index_ = index != nullptr ? std::move(index)
                               : std::make_shared<timetable_index const>(tt);
  ft.window_start_ = window_start;
  ft.window_length_ = window_length;
  ft.flat_routes_of_.resize(tt.n_routes());

  auto const in_window = [&](day_idx_t const d) {
    return d >= window_start &&
           d < window_start + static_cast<day_idx_t>(window_length);
  };

  // flat id per (route, day in window, trip); invalid if not running
  constexpr auto kNone = std::numeric_limits<flat_trip_idx_t>::max();
  auto flat_id = std::vector<std::vector<flat_trip_idx_t>>(tt.n_routes());

  for (auto r = 0U; r != tt.n_routes(); ++r) {
    auto const& rt = tt.routes_[r];
    struct instance {
      day_idx_t day_;
      std::uint32_t trip_;
    };
    auto groups = std::vector<std::vector<instance>>{};
    for (auto w = 0U; w != window_length; ++w) {
      auto const day = window_start + static_cast<day_idx_t>(w);
      for (auto i = 0U; i != rt.n_trips(); ++i) {
        if (!rt.trips_[i].active_days_.test(static_cast<std::size_t>(day))) {
          continue;
        }
        auto const fits = [&](std::vector<instance> const& g) {
          auto const& last = g.back();
          return precedes(rt.trips_[last.trip_], rt.trips_[i],
                          (day - last.day_) * kSecondsPerDay);
        };
        auto it = std::find_if(begin(groups), end(groups), fits);
        if (it == end(groups)) {
          groups.emplace_back();
          it = std::prev(end(groups));
        }
        it->push_back(instance{day, i});
      }
    }

    flat_id[r].assign(static_cast<std::size_t>(window_length) * rt.n_trips(), kNone);
    for (auto const& g : groups) {
      auto const fr = static_cast<std::uint32_t>(ft.routes_.size());
      ft.flat_routes_of_[r].push_back(fr);
      ft.routes_.push_back(flat_route{.route_ = route_idx_t{r},
                                      .first_ = ft.n_trips(),
                                      .n_trips_ = static_cast<std::uint32_t>(g.size())});
      for (auto const& inst : g) {
        flat_id[r][static_cast<std::size_t>(inst.day_ - window_start) * rt.n_trips() +
                   inst.trip_] = ft.n_trips();
        ft.trips_.push_back(flat_trip{.route_ = route_idx_t{r},
                                      .trip_ = inst.trip_,
                                      .day_ = inst.day_,
                                      .flat_route_ = fr});
      }
    }
  }

  ft.time_first_.reserve(ft.trips_.size() + 1U);
  for (auto const& f : ft.trips_) {
    ft.time_first_.push_back(static_cast<std::uint32_t>(ft.arr_.size()));
    auto const& t = tt.routes_[f.route_.v_].trips_[f.trip_];
    for (auto i = pos_t{0U}; i != t.size(); ++i) {
      ft.arr_.push_back(abs_time(f.day_, t.arr(i)));
      auto const d = t.dep(i);
      ft.dep_.push_back(d == kInfinity ? kInfinity : abs_time(f.day_, d));
    }
  }
  ft.time_first_.push_back(static_cast<std::uint32_t>(ft.arr_.size()));

  ft.omitted_.assign(ft.arr_.size(), kInfinity);
  for (auto ti = flat_trip_idx_t{0U}; ti != ft.n_trips(); ++ti) {
    auto const& f = ft.trips_[ti];
    auto const& rt = tt.routes_[f.route_.v_];
    auto const row = ts.row(f.route_, f.trip_);
    auto it = row.begin();
    for (auto e = pos_t{0U}; e != rt.size(); ++e) {
      ft.exit_offsets_.push_back(static_cast<std::uint32_t>(ft.edges_.size()));
      for (; it != row.end() && it->from_stop_ == e; ++it) {
        if (!it->valid_days_.test(static_cast<std::size_t>(f.day_))) {
          continue;
        }
        auto const to_day = f.day_ + it->day_shift_;
        if (!in_window(to_day)) {
          auto& o = ft.omitted_[ft.time_first_[ti] + e];
          auto const& u = tt.routes_[it->to_route_.v_].trips_[it->to_trip_];
          o = std::min(o, abs_time(to_day, u.dep(it->to_stop_)));
          continue;
        }
        auto const n_to = tt.routes_[it->to_route_.v_].n_trips();
        auto const to =
            flat_id[it->to_route_.v_]
                   [static_cast<std::size_t>(to_day - window_start) * n_to + it->to_trip_];
        if (to == kNone) {
          throw invalid_data{"transfer targets a trip instance that does not run"};
        }
        ft.edges_.push_back(flat_edge{.to_ = to, .board_ = it->to_stop_});
      }
    }
    ft.exit_offsets_.push_back(static_cast<std::uint32_t>(ft.edges_.size()));
  }

  return ft;
}

}  // namespace tb
