#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <limits>
#include <span>
#include <tuple>
#include <vector>

#include "tb/query.h"

namespace tb::detail {

struct view_graph {
  using trip_t = trip_ref;
  using reached_t = reached_set;

  timetable const& tt() const { return v_.tt(); }
  timetable_index const& idx() const { return v_.index(); }

  std::size_t n_slots() const { return tt().n_routes(); }
  template <typename Fn>
  void for_each_slot(route_idx_t const r, Fn&& fn) const {
    fn(r.v_);
  }
  // fn(trip_t) -> bool (continue); ascending instance order
  template <typename Fn>
  void for_each_instance(std::uint32_t const slot, Fn&& fn) const {
    auto const m = tt().routes_[slot].n_trips();
    for (auto o = 0U; o <= v_.horizon(); ++o) {
      for (auto i = 0U; i != m; ++i) {
        auto const t = trip_ref{route_idx_t{slot}, pack_trip_ref(o, i)};
        if (v_.active(t) && !fn(t)) {
          return;
        }
      }
    }
  }

  std::uint32_t slot(trip_t const t) const { return t.route_.v_; }
  std::uint64_t key(trip_t const t) const { return t.packed_; }
  pos_t n_stops(trip_t const t) const { return tt().routes_[t.route_.v_].size(); }
  stop_idx_t stop_at(trip_t const t, pos_t const i) const {
    return tt().routes_[t.route_.v_].stops_[i];
  }
  abs_time_t arr(trip_t const t, pos_t const i) const { return v_.arr(t, i); }
  abs_time_t dep(trip_t const t, pos_t const i) const { return v_.dep(t, i); }
  auto transfers(trip_t const t, pos_t const j) const { return v_.transfers(t, j); }
  abs_time_t first_omitted(trip_t const t, pos_t const j) const {
    return v_.first_omitted(t, j);
  }
  // (route, day, trip index)
  std::tuple<route_idx_t, day_idx_t, std::uint32_t> instance(trip_t const t) const {
    return {t.route_, v_.day_of(t.day_offset()), t.trip_index()};
  }

  void reset(reached_t& r) const { r.reset(n_slots()); }

  day_view const& v_;
};

// Pareto reached sets unrolled into per-(transfers, flat trip) minimum stop
// indices. Equivalent to reached_set for the totally ordered flat routes.
class unrolled_reached {
public:
  explicit unrolled_reached(flat_timetable const& ft, std::uint8_t max_n)
      : ft_{ft}, n_trips_{ft.n_trips()}, max_n_{max_n} {}

  void reset() {
    r_.resize(static_cast<std::size_t>(max_n_ + 1U) * n_trips_);
    for (auto n = 0U; n <= max_n_; ++n) {
      for (auto t = 0U; t != n_trips_; ++t) {
        r_[n * n_trips_ + t] = ft_.n_stops(t) - 1U;
      }
    }
  }

  std::optional<pos_t> insert(std::uint32_t const slot, std::uint64_t const key,
                              pos_t const pos, std::uint8_t const n, pos_t) {
    auto const& fr = ft_.route(slot);
    auto const t = fr.first_ + static_cast<std::uint32_t>(key);
    auto const cap = r_[n * n_trips_ + t];
    if (pos >= cap) {
      return std::nullopt;
    }
    auto const end = fr.first_ + fr.n_trips_;
    for (auto k = static_cast<unsigned>(n); k <= max_n_; ++k) {
      auto* row = &r_[k * n_trips_];
      if (row[t] <= pos) {
        break;
      }
      for (auto u = t; u != end && row[u] > pos; ++u) {
        row[u] = pos;
      }
    }
    return cap;
  }

private:
  flat_timetable const& ft_;
  std::uint32_t n_trips_;
  std::uint8_t max_n_;
  std::vector<pos_t> r_;
};

struct flat_graph {
  using trip_t = flat_trip_idx_t;
  using reached_t = unrolled_reached;

  timetable const& tt() const { return ft_.tt(); }
  timetable_index const& idx() const { return ft_.index(); }

  std::size_t n_slots() const { return ft_.n_routes(); }
  template <typename Fn>
  void for_each_slot(route_idx_t const r, Fn&& fn) const {
    for (auto const s : ft_.flat_routes_of(r)) {
      fn(s);
    }
  }
  template <typename Fn>
  void for_each_instance(std::uint32_t const slot, Fn&& fn) const {
    auto const& fr = ft_.route(slot);
    for (auto t = fr.first_; t != fr.first_ + fr.n_trips_; ++t) {
      if (!fn(t)) {
        return;
      }
    }
  }

  std::uint32_t slot(trip_t const t) const { return ft_.trip(t).flat_route_; }
  std::uint64_t key(trip_t const t) const {
    return t - ft_.route(ft_.trip(t).flat_route_).first_;
  }
  pos_t n_stops(trip_t const t) const { return ft_.n_stops(t); }
  stop_idx_t stop_at(trip_t const t, pos_t const i) const {
    return tt().routes_[ft_.trip(t).route_.v_].stops_[i];
  }
  abs_time_t arr(trip_t const t, pos_t const i) const { return ft_.arr(t, i); }
  abs_time_t dep(trip_t const t, pos_t const i) const { return ft_.dep(t, i); }
  auto transfers(trip_t const t, pos_t const j) const { return ft_.transfers(t, j); }
  abs_time_t first_omitted(trip_t const t, pos_t const j) const {
    return ft_.first_omitted(t, j);
  }
  std::tuple<route_idx_t, day_idx_t, std::uint32_t> instance(trip_t const t) const {
    auto const& f = ft_.trip(t);
    return {f.route_, f.day_, f.trip_};
  }

  void reset(reached_t& r) const { r.reset(); }

  flat_timetable const& ft_;
};

template <typename Graph>
class search {
  using trip_t = typename Graph::trip_t;
  static constexpr auto kNoParent = std::numeric_limits<std::uint32_t>::max();

  struct segment {
    trip_t trip_;
    pos_t from_;
    pos_t to_;
    std::uint32_t parent_;
    pos_t parent_exit_;
    seconds_t walk_;
    std::uint8_t n_;
  };

  struct boarding {
    abs_time_t dep_;  // journey departure: trip departure minus walk
    std::tuple<route_idx_t, day_idx_t, std::uint32_t> instance_;
    trip_t trip_;
    pos_t pos_;
    seconds_t walk_;
  };

  struct dest_record {
    pos_t pos_;
    seconds_t walk_;
  };

public:
  search(Graph const& g, typename Graph::reached_t& reached,
         query_options const& opt)
      : g_{g}, reached_{reached}, max_n_{opt.max_transfers_} {}

  query_result profile(stop_idx_t const src, stop_idx_t const dst,
                       abs_time_t const lo, abs_time_t const hi) {
    check_stops(src, dst);
    auto result = query_result{};
    if (src == dst) {
      return result;
    }
    init_destination(dst);
    auto initial = collect(src, [&](trip_t const t, pos_t const b, seconds_t const walk,
                                    auto& out) {
      auto const d = g_.dep(t, b) - walk;
      if (d >= hi) {
        return false;
      }
      if (d >= lo) {
        out.push_back(boarding{d, g_.instance(t), t, b, walk});
      }
      return true;
    });
    std::sort(begin(initial), end(initial), [](boarding const& a, boarding const& b) {
      return std::tie(b.dep_, a.instance_, a.pos_, a.walk_) <
             std::tie(a.dep_, b.instance_, b.pos_, b.walk_);
    });

    reset();
    auto journeys = std::vector<journey>{};
    for (auto first = begin(initial); first != end(initial);) {
      auto const last = std::find_if(first, end(initial), [&](boarding const& b) {
        return b.dep_ != first->dep_;
      });
      run({first, last}, src, dst, journeys);
      ++result.stats_.runs_;
      first = last;
    }
    result.journeys_ = pareto_filter(std::move(journeys));
    result.truncated_ = truncated_;
    result.stats_.segments_ = n_segments_;
    return result;
  }

  query_result earliest_arrival(stop_idx_t const src, stop_idx_t const dst,
                                abs_time_t const departure) {
    check_stops(src, dst);
    auto result = query_result{};
    if (src == dst) {
      result.journeys_.push_back(journey{.legs_ = {},
                                         .dep_ = departure,
                                         .arr_ = departure,
                                         .transfers_ = 0U});
      return result;
    }
    init_destination(dst);
    auto initial = collect(src, [&](trip_t const t, pos_t const b, seconds_t const walk,
                                    auto& out) {
      auto const d = g_.dep(t, b);
      if (d - walk >= departure) {
        out.push_back(boarding{d - walk, g_.instance(t), t, b, walk});
        return false;
      }
      return true;
    });
    std::sort(begin(initial), end(initial), [](boarding const& a, boarding const& b) {
      return std::tie(a.instance_, a.pos_, a.walk_) <
             std::tie(b.instance_, b.pos_, b.walk_);
    });

    reset();
    auto journeys = std::vector<journey>{};
    run(initial, src, dst, journeys);
    result.stats_.runs_ = 1U;

    // Pareto in (arrival, transfers) only
    auto kept = std::vector<journey>{};
    for (auto& j : journeys) {
      auto const dominated = std::any_of(begin(journeys), end(journeys), [&](journey const& o) {
        return o.arr_ <= j.arr_ && o.transfers_ <= j.transfers_ &&
               (o.arr_ < j.arr_ || o.transfers_ < j.transfers_);
      });
      auto const duplicate = std::any_of(begin(kept), end(kept), [&](journey const& o) {
        return o.arr_ == j.arr_ && o.transfers_ == j.transfers_;
      });
      if (!dominated && !duplicate) {
        kept.push_back(j);
      }
    }
    std::sort(begin(kept), end(kept), [](journey const& a, journey const& b) {
      return std::tuple{a.transfers_, a.arr_} < std::tuple{b.transfers_, b.arr_};
    });
    result.journeys_ = std::move(kept);
    result.truncated_ = truncated_;
    result.stats_.segments_ = n_segments_;
    return result;
  }

private:
  void check_stops(stop_idx_t const src, stop_idx_t const dst) const {
    auto const n = g_.tt().n_stops();
    if (src.v_ >= n || dst.v_ >= n) {
      throw lookup_error{"query stop out of range"};
    }
  }

  void reset() {
    g_.reset(reached_);
    best_.fill(kInfinity);
    truncated_ = false;
    n_segments_ = 0U;
  }

  void init_destination(stop_idx_t const dst) {
    dest_.assign(g_.n_slots(), {});
    auto const& idx = g_.idx();
    auto const add = [&](stop_idx_t const s, seconds_t const walk) {
      for (auto const& rs : idx.routes_at_[s.v_]) {
        if (rs.pos_ == 0U) {
          continue;
        }
        g_.for_each_slot(rs.route_, [&](std::uint32_t const slot) {
          dest_[slot].push_back(dest_record{rs.pos_, walk});
        });
      }
    };
    add(dst, 0);
    for (auto const& w : idx.fp_in_[dst.v_]) {
      add(w.stop_, w.duration_);
    }
    for (auto& d : dest_) {
      std::sort(begin(d), end(d), [](dest_record const& a, dest_record const& b) {
        return std::tie(a.pos_, a.walk_) < std::tie(b.pos_, b.walk_);
      });
    }
  }

  template <typename Fn>
  std::vector<boarding> collect(stop_idx_t const src, Fn&& fn) const {
    auto out = std::vector<boarding>{};
    auto const& idx = g_.idx();
    auto const add = [&](stop_idx_t const s, seconds_t const walk) {
      for (auto const& rs : idx.routes_at_[s.v_]) {
        if (rs.pos_ + 1U >= g_.tt().routes_[rs.route_.v_].size()) {
          continue;
        }
        g_.for_each_slot(rs.route_, [&](std::uint32_t const slot) {
          g_.for_each_instance(slot, [&](trip_t const t) {
            return fn(t, rs.pos_, walk, out);
          });
        });
      }
    };
    add(src, 0);
    for (auto const& w : idx.fp_out_[src.v_]) {
      add(w.stop_, w.duration_);
    }
    return out;
  }

  void enqueue(trip_t const t, pos_t const b, std::uint8_t const n,
               std::uint32_t const parent, pos_t const parent_exit,
               seconds_t const walk) {
    auto const last = g_.n_stops(t) - 1U;
    auto const cap = reached_.insert(g_.slot(t), g_.key(t), b, n, last);
    if (!cap.has_value()) {
      return;
    }
    next_.push_back(static_cast<std::uint32_t>(segments_.size()));
    segments_.push_back(segment{t, b, *cap, parent, parent_exit, walk, n});
  }

  void run(std::span<boarding const> const initial, stop_idx_t const src,
           stop_idx_t const dst, std::vector<journey>& out) {
    segments_.clear();
    next_.clear();
    for (auto const& b : initial) {
      enqueue(b.trip_, b.pos_, 0U, kNoParent, 0U, b.walk_);
    }
    for (auto n = 0U; !next_.empty(); ++n) {
      std::swap(cur_, next_);
      next_.clear();
      for (auto const si : cur_) {
        auto const s = segments_[si];
        ++n_segments_;
        if (g_.arr(s.trip_, s.from_ + 1U) > best_[n]) {
          continue;
        }
        for (auto const& d : dest_[g_.slot(s.trip_)]) {
          if (d.pos_ <= s.from_ || d.pos_ > s.to_) {
            continue;
          }
          auto const a = g_.arr(s.trip_, d.pos_) + d.walk_;
          if (a < best_[n]) {
            out.push_back(reconstruct(si, d.pos_, d.walk_, src, dst));
            for (auto k = n; k <= max_n_; ++k) {
              best_[k] = std::min(best_[k], a);
            }
          }
        }
        if (n >= max_n_) {
          continue;
        }
        for (auto j = s.from_ + 1U; j <= s.to_; ++j) {
          if (g_.arr(s.trip_, j) > best_[n + 1U]) {
            break;
          }
          if (g_.first_omitted(s.trip_, j) < best_[n + 1U]) {
            truncated_ = true;
          }
          for (auto const& e : g_.transfers(s.trip_, j)) {
            enqueue(e.to_, e.board_, static_cast<std::uint8_t>(n + 1U), si, j, 0);
          }
        }
      }
    }
  }

  journey reconstruct(std::uint32_t si, pos_t exit, seconds_t const final_walk,
                      stop_idx_t const src, stop_idx_t const dst) const {
    auto j = journey{};
    auto& legs = j.legs_;
    if (final_walk != 0) {
      legs.emplace_back(walk_leg{g_.stop_at(segments_[si].trip_, exit), dst, final_walk});
    }
    j.transfers_ = segments_[si].n_;
    j.arr_ = g_.arr(segments_[si].trip_, exit) + final_walk;
    while (true) {
      auto const& s = segments_[si];
      auto const [route, day, trip] = g_.instance(s.trip_);
      legs.emplace_back(trip_leg{.route_ = route,
                                 .trip_ = trip,
                                 .day_ = day,
                                 .board_ = s.from_,
                                 .exit_ = exit,
                                 .dep_ = g_.dep(s.trip_, s.from_),
                                 .arr_ = g_.arr(s.trip_, exit)});
      auto const board_stop = g_.stop_at(s.trip_, s.from_);
      if (s.parent_ == kNoParent) {
        if (s.walk_ != 0) {
          legs.emplace_back(walk_leg{src, board_stop, s.walk_});
        }
        j.dep_ = g_.dep(s.trip_, s.from_) - s.walk_;
        break;
      }
      auto const& p = segments_[s.parent_];
      auto const exit_stop = g_.stop_at(p.trip_, s.parent_exit_);
      if (exit_stop != board_stop) {
        legs.emplace_back(walk_leg{exit_stop, board_stop,
                                   g_.idx().footpath_duration(exit_stop, board_stop)});
      }
      exit = s.parent_exit_;
      si = s.parent_;
    }
    std::reverse(begin(legs), end(legs));
    return j;
  }

  Graph const& g_;
  typename Graph::reached_t& reached_;
  std::uint8_t max_n_;

  std::vector<std::vector<dest_record>> dest_;
  std::vector<segment> segments_;
  std::vector<std::uint32_t> cur_;
  std::vector<std::uint32_t> next_;
  std::array<abs_time_t, 256U> best_{};
  bool truncated_{false};
  std::uint64_t n_segments_{0U};
};

}  // namespace tb::detail
