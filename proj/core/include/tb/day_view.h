#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "tb/model.h"
#include "tb/transfer_set.h"

namespace tb {

struct view_transfer {
  friend bool operator==(view_transfer const&, view_transfer const&) = default;

  trip_ref to_;
  pos_t board_{0U};
  abs_time_t dep_{0};
};

// Transfers valid around one query day q, resolved to trip instances.
// Day offset o covers day q - 1 + o for o in [0, horizon]; offsets outside
// the timetable horizon have no active instances.
class day_view {
public:
  day_view(timetable const&, transfer_set const&, day_idx_t query_day,
           std::uint32_t horizon = 2U,
           std::shared_ptr<timetable_index const> = nullptr);

  day_idx_t query_day() const { return query_day_; }
  std::uint32_t horizon() const { return horizon_; }
  day_idx_t day_of(std::uint32_t const offset) const {
    return query_day_ - 1 + static_cast<day_idx_t>(offset);
  }

  timetable const& tt() const { return *tt_; }
  timetable_index const& index() const { return *index_; }

  bool active(trip_ref) const;
  abs_time_t arr(trip_ref, pos_t) const;
  abs_time_t dep(trip_ref, pos_t) const;

  std::span<view_transfer const> transfers(trip_ref, pos_t exit) const;
  // earliest departure of a transfer target at this exit that lies beyond
  // the view; kInfinity if none was left out
  abs_time_t first_omitted(trip_ref, pos_t exit) const;

  std::size_t n_transfers() const { return transfers_.size(); }

  // fn(from, exit, view_transfer const&)
  template <typename Fn>
  void for_each_transfer(Fn&& fn) const {
    for (auto r = 0U; r != route_first_.size(); ++r) {
      auto const m = n_trips_[r];
      for (auto o = 0U; o <= horizon_; ++o) {
        for (auto i = 0U; i != m; ++i) {
          auto const from = trip_ref{route_idx_t{r}, pack_trip_ref(o, i)};
          auto const n = tt_->routes_[r].size();
          for (auto e = pos_t{0U}; e != n; ++e) {
            for (auto const& t : transfers(from, e)) {
              fn(from, e, t);
            }
          }
        }
      }
    }
  }

  friend bool operator==(day_view const& a, day_view const& b) {
    return a.query_day_ == b.query_day_ && a.horizon_ == b.horizon_ &&
           a.route_first_ == b.route_first_ && a.n_trips_ == b.n_trips_ &&
           a.active_ == b.active_ && a.exit_first_ == b.exit_first_ &&
           a.exit_offsets_ == b.exit_offsets_ && a.transfers_ == b.transfers_ &&
           a.omitted_ == b.omitted_;
  }

private:
  std::uint32_t instance(trip_ref const t) const {
    return route_first_[t.route_.v_] +
           t.day_offset() * n_trips_[t.route_.v_] + t.trip_index();
  }
  trip const& get_trip(trip_ref const t) const {
    return tt_->routes_[t.route_.v_].trips_[t.trip_index()];
  }

  timetable const* tt_;
  std::shared_ptr<timetable_index const> index_;
  day_idx_t query_day_;
  std::uint32_t horizon_;

  std::vector<std::uint32_t> route_first_;  // first instance id per route
  std::vector<std::uint32_t> n_trips_;
  std::vector<std::uint8_t> active_;        // per instance
  std::vector<std::uint32_t> exit_first_;   // per instance, into exit_offsets_
  std::vector<std::uint32_t> exit_offsets_;  // per instance: n_stops + 1
  std::vector<view_transfer> transfers_;
  std::vector<abs_time_t> omitted_;          // per (instance, exit)
};

// LRU cache of day views keyed by (query day, horizon). Views refer to the
// timetable and transfer set given at construction; clear() after updates.
class day_view_cache {
public:
  day_view_cache(timetable const&, transfer_set const&, std::size_t capacity = 8U);

  std::shared_ptr<day_view const> get_or_build(day_idx_t query_day,
                                               std::uint32_t horizon = 2U);
  void clear();

  std::size_t hits() const;
  std::size_t misses() const;
  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }

private:
  using key_t = std::pair<day_idx_t, std::uint32_t>;

  timetable const* tt_;
  transfer_set const* ts_;
  std::shared_ptr<timetable_index const> index_;
  std::size_t capacity_;

  mutable std::mutex mutex_;
  std::list<std::pair<key_t, std::shared_ptr<day_view const>>> lru_;
  std::map<key_t, decltype(lru_)::iterator> entries_;
  std::size_t hits_{0U};
  std::size_t misses_{0U};
};

}  // namespace tb
