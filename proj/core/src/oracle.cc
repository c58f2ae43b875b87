#include "tb/oracle.h"

#include <algorithm>
#include <map>
#include <set>

#include "fmt/core.h"

namespace tb {

namespace {

struct instance {
  route_idx_t route_;
  std::uint32_t day_;  // relative to the first considered day
  std::vector<stop_idx_t> const* stops_;
  std::vector<abs_time_t> arr_;
  std::vector<abs_time_t> dep_;
};

class event_search {
public:
  event_search(timetable const& tt, stop_idx_t const src, stop_idx_t const dst,
               day_idx_t const q, oracle_options const& opt)
      : tt_{tt}, src_{src}, dst_{dst}, opt_{opt} {
    if (src.v_ >= tt.n_stops() || dst.v_ >= tt.n_stops()) {
      throw lookup_error{"oracle: stop out of range"};
    }
    auto const first = std::max<day_idx_t>(0, q - 1);
    auto const last = std::min<day_idx_t>(
        static_cast<day_idx_t>(tt.horizon_days_) - 1,
        q + static_cast<day_idx_t>(opt.horizon_) - 1);
    n_days_ = static_cast<std::uint32_t>(std::max(0, last - first + 1));
    auto n_events = std::size_t{0U};
    for (auto r = 0U; r != tt.n_routes(); ++r) {
      for (auto const& t : tt.routes_[r].trips_) {
        for (auto d = first; d <= last; ++d) {
          if (!t.active_days_.test(static_cast<std::size_t>(d))) {
            continue;
          }
          auto inst = instance{route_idx_t{r}, static_cast<std::uint32_t>(d - first),
                               &t.stops_, {}, {}};
          for (auto i = 0U; i != t.stops_.size(); ++i) {
            inst.arr_.push_back(static_cast<abs_time_t>(d) * 86400 + t.arr_[i]);
            inst.dep_.push_back(static_cast<abs_time_t>(d) * 86400 + t.dep_[i]);
          }
          n_events += 2U * t.stops_.size();
          instances_.push_back(std::move(inst));
        }
      }
    }
    if (n_events > opt.max_events_) {
      throw oracle_refused{fmt::format("oracle: {} events exceed the limit of {}",
                                       n_events, opt.max_events_)};
    }

    walk_out_.resize(tt.n_stops());
    walk_in_.resize(tt.n_stops());
    for (auto const& f : tt.footpaths_) {
      walk_out_[f.from_.v_].emplace_back(f.to_, f.duration_);
      walk_in_[f.to_.v_].emplace_back(f.from_, f.duration_);
    }
    serving_.resize(tt.n_stops());
    for (auto r = 0U; r != tt.n_routes(); ++r) {
      for (auto const s : tt.routes_[r].stops_) {
        auto& v = serving_[s.v_];
        if (std::find(begin(v), end(v), route_idx_t{r}) == end(v)) {
          v.push_back(route_idx_t{r});
        }
      }
    }
  }

  std::size_t n_instances() const { return instances_.size(); }
  instance const& get(std::size_t const i) const { return instances_[i]; }

  seconds_t walk(stop_idx_t const from, stop_idx_t const to) const {
    for (auto const& [s, d] : walk_out_[from.v_]) {
      if (s == to) {
        return d;
      }
    }
    return kInfinity;
  }
  std::vector<std::pair<stop_idx_t, seconds_t>> const& walks_from(
      stop_idx_t const s) const {
    return walk_out_[s.v_];
  }

  // Best arrival per transfer count given initial boarding positions per
  // instance (npos: not boarded). Entry n is the earliest arrival with at
  // most n transfers.
  std::vector<abs_time_t> run(std::vector<std::uint32_t> boarding) {
    auto const n_routes = tt_.n_routes();
    auto const n_instances = instances_.size();
    auto const n_days = n_days_;
    // earliest arrival per (stop, route, service day of the arriving trip)
    auto arrive = std::vector<abs_time_t>(tt_.n_stops() * n_routes * n_days, kInfinity);
    // earliest arrival per (stop, service day of the arriving trip)
    auto arrive_any = std::vector<abs_time_t>(tt_.n_stops() * n_days, kInfinity);
    auto boarded = std::vector<std::uint32_t>(n_instances, kNone);

    auto best = std::vector<abs_time_t>{};
    auto current = kInfinity;
    for (auto n = 0U; n <= opt_.max_transfers_; ++n) {
      // ride
      auto any = false;
      for (auto i = 0U; i != n_instances; ++i) {
        if (boarding[i] == kNone || (boarded[i] != kNone && boarding[i] >= boarded[i])) {
          continue;
        }
        any = true;
        auto const& inst = instances_[i];
        auto const end = boarded[i] == kNone
                             ? static_cast<std::uint32_t>(inst.stops_->size() - 1U)
                             : boarded[i];
        for (auto j = boarding[i] + 1U; j <= end; ++j) {
          auto const s = (*inst.stops_)[j];
          auto const a = inst.arr_[j];
          auto& slot = arrive[(s.v_ * n_routes + inst.route_.v_) * n_days + inst.day_];
          slot = std::min(slot, a);
          auto& any_slot = arrive_any[s.v_ * n_days + inst.day_];
          any_slot = std::min(any_slot, a);
          if (s == dst_) {
            current = std::min(current, a);
          }
          auto const w = walk(s, dst_);
          if (w != kInfinity) {
            current = std::min(current, a + w);
          }
        }
        boarded[i] = boarding[i];
      }
      if (!any) {
        break;
      }
      best.push_back(current);

      // board
      std::fill(begin(boarding), std::end(boarding), kNone);
      for (auto i = 0U; i != n_instances; ++i) {
        auto const& inst = instances_[i];
        auto const limit = std::min<std::uint32_t>(
            boarded[i], static_cast<std::uint32_t>(inst.stops_->size() - 1U));
        auto const day_lo = inst.day_ >= opt_.max_day_shift_ ? inst.day_ - opt_.max_day_shift_ : 0U;
        for (auto b = 0U; b < limit; ++b) {
          auto const s = (*inst.stops_)[b];
          auto ready = kInfinity;
          for (auto dx = day_lo; dx <= inst.day_; ++dx) {
            for (auto const r : serving_[s.v_]) {
              auto const a = arrive[(s.v_ * n_routes + r.v_) * n_days + dx];
              if (a != kInfinity) {
                ready = std::min(ready, a + tt_.change_time(s, r, inst.route_));
              }
            }
            for (auto const& [from, d] : walk_in_[s.v_]) {
              auto const a = arrive_any[from.v_ * n_days + dx];
              if (a != kInfinity) {
                ready = std::min(ready, a + d);
              }
            }
          }
          if (ready <= inst.dep_[b]) {
            boarding[i] = b;
            break;
          }
        }
      }
    }
    while (best.size() <= opt_.max_transfers_) {
      best.push_back(current);
    }
    return best;
  }

  static constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();

private:
  timetable const& tt_;
  stop_idx_t src_;
  stop_idx_t dst_;
  oracle_options opt_;
  std::uint32_t n_days_{0U};
  std::vector<instance> instances_;
  std::vector<std::vector<std::pair<stop_idx_t, seconds_t>>> walk_out_;
  std::vector<std::vector<std::pair<stop_idx_t, seconds_t>>> walk_in_;
  std::vector<std::vector<route_idx_t>> serving_;
};

// first-boarding candidates: (instance, position, journey departure)
template <typename Fn>
void for_each_first_boarding(event_search const& es, stop_idx_t const src, Fn&& fn) {
  for (auto i = 0U; i != es.n_instances(); ++i) {
    auto const& inst = es.get(i);
    for (auto b = 0U; b + 1U < inst.stops_->size(); ++b) {
      auto const s = (*inst.stops_)[b];
      if (s == src) {
        fn(i, b, inst.dep_[b]);
      } else if (auto const w = es.walk(src, s); w != kInfinity) {
        fn(i, b, inst.dep_[b] - w);
      }
    }
  }
}

}  // namespace

profile_front oracle_profile(timetable const& tt, stop_idx_t const source,
                             stop_idx_t const destination, day_idx_t const q,
                             oracle_options const& opt) {
  auto es = event_search{tt, source, destination, q, opt};
  if (source == destination) {
    return {};
  }
  auto const lo = static_cast<abs_time_t>(q) * 86400;
  auto const hi = lo + 86400;

  auto by_departure = std::map<abs_time_t, std::vector<std::uint32_t>>{};
  for_each_first_boarding(es, source, [&](std::uint32_t const i, std::uint32_t const b,
                                          abs_time_t const d) {
    if (d < lo || d >= hi) {
      return;
    }
    auto& v = by_departure[d];
    if (v.empty()) {
      v.assign(es.n_instances(), event_search::kNone);
    }
    v[i] = std::min(v[i], b);
  });

  auto candidates = profile_front{};
  for (auto& [d, boarding] : by_departure) {
    auto const best = es.run(std::move(boarding));
    auto prev = kInfinity;
    for (auto n = 0U; n != best.size(); ++n) {
      if (best[n] < prev) {
        candidates.emplace_back(d, best[n], n);
        prev = best[n];
      }
    }
  }

  auto front = profile_front{};
  for (auto const& c : candidates) {
    auto const& [d, a, n] = c;
    auto const dominated = std::any_of(begin(candidates), end(candidates), [&](auto const& o) {
      auto const& [d2, a2, n2] = o;
      return d2 >= d && a2 <= a && n2 <= n && (d2 > d || a2 < a || n2 < n);
    });
    if (!dominated) {
      front.push_back(c);
    }
  }
  std::sort(begin(front), end(front));
  front.erase(std::unique(begin(front), end(front)), end(front));
  return front;
}

arrival_front oracle_earliest_arrival(timetable const& tt, stop_idx_t const source,
                                      stop_idx_t const destination,
                                      abs_time_t const departure, day_idx_t const q,
                                      oracle_options const& opt) {
  auto es = event_search{tt, source, destination, q, opt};
  if (source == destination) {
    return {{departure, 0U}};
  }
  auto boarding = std::vector<std::uint32_t>(es.n_instances(), event_search::kNone);
  for_each_first_boarding(es, source, [&](std::uint32_t const i, std::uint32_t const b,
                                          abs_time_t const d) {
    if (d >= departure) {
      boarding[i] = std::min(boarding[i], b);
    }
  });
  auto const best = es.run(std::move(boarding));
  auto front = arrival_front{};
  auto prev = kInfinity;
  for (auto n = 0U; n != best.size(); ++n) {
    if (best[n] < prev) {
      front.emplace_back(best[n], n);
      prev = best[n];
    }
  }
  std::sort(begin(front), end(front));
  return front;
}

}  // namespace tb
