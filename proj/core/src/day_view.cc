#include "tb/day_view.h"

#include <algorithm>

#include "fmt/core.h"

namespace tb {

day_view::day_view(timetable const& tt, transfer_set const& ts,
                   day_idx_t const query_day, std::uint32_t const horizon,
                   std::shared_ptr<timetable_index const> index)
    : tt_{&tt},
      index_{index != nullptr ? std::move(index)
                              : std::make_shared<timetable_index const>(tt)},
      query_day_{query_day},
      horizon_{horizon} {
  if (query_day < 0 || static_cast<std::uint32_t>(query_day) >= tt.horizon_days_) {
    throw range_error{fmt::format("query day {} outside horizon [0, {})",
                                  query_day, tt.horizon_days_)};
  }
  if (horizon == 0U) {
    throw range_error{"day view horizon must be at least 1"};
  }
  if (ts.rows_.size() != tt.n_routes()) {
    throw invalid_data{"transfer set does not match timetable"};
  }

  auto const n_days = static_cast<day_idx_t>(tt.horizon_days_);
  auto n_instances = std::uint32_t{0U};
  for (auto const& r : tt.routes_) {
    route_first_.push_back(n_instances);
    n_trips_.push_back(r.n_trips());
    n_instances += (horizon + 1U) * r.n_trips();
  }
  active_.reserve(n_instances);
  exit_first_.reserve(n_instances);

  for (auto r = 0U; r != tt.n_routes(); ++r) {
    auto const& rt = tt.routes_[r];
    for (auto o = 0U; o <= horizon; ++o) {
      auto const day = day_of(o);
      for (auto i = 0U; i != rt.n_trips(); ++i) {
        auto const& t = rt.trips_[i];
        auto const is_active =
            day >= 0 && day < n_days && t.active_days_.test(static_cast<std::size_t>(day));
        active_.push_back(is_active ? 1U : 0U);
        exit_first_.push_back(static_cast<std::uint32_t>(exit_offsets_.size()));

        auto const row = ts.row(route_idx_t{r}, i);
        auto it = row.begin();
        for (auto e = pos_t{0U}; e != rt.size(); ++e) {
          exit_offsets_.push_back(static_cast<std::uint32_t>(transfers_.size()));
          auto omitted = kInfinity;
          for (; it != row.end() && it->from_stop_ == e; ++it) {
            if (!is_active || !it->valid_days_.test(static_cast<std::size_t>(day))) {
              continue;
            }
            auto const& u = tt.routes_[it->to_route_.v_].trips_[it->to_trip_];
            auto const to_offset = o + it->day_shift_;
            if (to_offset > horizon) {
              omitted = std::min(omitted, abs_time(day + it->day_shift_, u.dep(it->to_stop_)));
              continue;
            }
            transfers_.push_back(view_transfer{
                .to_ = trip_ref{it->to_route_, pack_trip_ref(to_offset, it->to_trip_)},
                .board_ = it->to_stop_,
                .dep_ = abs_time(day + it->day_shift_, u.dep(it->to_stop_))});
          }
          omitted_.push_back(omitted);
        }
        exit_offsets_.push_back(static_cast<std::uint32_t>(transfers_.size()));
        omitted_.push_back(kInfinity);
      }
    }
  }
}

bool day_view::active(trip_ref const t) const {
  return active_[instance(t)] != 0U;
}

abs_time_t day_view::arr(trip_ref const t, pos_t const i) const {
  return abs_time(day_of(t.day_offset()), get_trip(t).arr(i));
}

abs_time_t day_view::dep(trip_ref const t, pos_t const i) const {
  auto const d = get_trip(t).dep(i);
  return d == kInfinity ? kInfinity : abs_time(day_of(t.day_offset()), d);
}

std::span<view_transfer const> day_view::transfers(trip_ref const t,
                                                   pos_t const exit) const {
  auto const base = exit_first_[instance(t)] + exit;
  return {transfers_.data() + exit_offsets_[base],
          transfers_.data() + exit_offsets_[base + 1U]};
}

abs_time_t day_view::first_omitted(trip_ref const t, pos_t const exit) const {
  return omitted_[exit_first_[instance(t)] + exit];
}

day_view_cache::day_view_cache(timetable const& tt, transfer_set const& ts,
                               std::size_t const capacity)
    : tt_{&tt},
      ts_{&ts},
      index_{std::make_shared<timetable_index const>(tt)},
      capacity_{capacity} {
  if (capacity == 0U) {
    throw range_error{"day view cache capacity must be at least 1"};
  }
}

std::shared_ptr<day_view const> day_view_cache::get_or_build(
    day_idx_t const query_day, std::uint32_t const horizon) {
  auto const key = key_t{query_day, horizon};
  {
    auto const lock = std::scoped_lock{mutex_};
    if (auto const it = entries_.find(key); it != end(entries_)) {
      ++hits_;
      lru_.splice(begin(lru_), lru_, it->second);
      return it->second->second;
    }
    ++misses_;
  }

  auto view =
      std::make_shared<day_view const>(*tt_, *ts_, query_day, horizon, index_);

  auto const lock = std::scoped_lock{mutex_};
  if (auto const it = entries_.find(key); it != end(entries_)) {
    lru_.splice(begin(lru_), lru_, it->second);
    return it->second->second;
  }
  lru_.emplace_front(key, view);
  entries_.emplace(key, begin(lru_));
  while (lru_.size() > capacity_) {
    entries_.erase(lru_.back().first);
    lru_.pop_back();
  }
  return view;
}

void day_view_cache::clear() {
  auto const lock = std::scoped_lock{mutex_};
  lru_.clear();
  entries_.clear();
  index_ = std::make_shared<timetable_index const>(*tt_);
}

std::size_t day_view_cache::hits() const {
  auto const lock = std::scoped_lock{mutex_};
  return hits_;
}

std::size_t day_view_cache::misses() const {
  auto const lock = std::scoped_lock{mutex_};
  return misses_;
}

std::size_t day_view_cache::size() const {
  auto const lock = std::scoped_lock{mutex_};
  return lru_.size();
}

}  // namespace tb
