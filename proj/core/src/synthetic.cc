#include "tb/synthetic.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "fmt/core.h"

#include "tb/preprocess.h"

namespace tb {

activity_pattern activity_pattern::parse(std::string_view const s) {
  if (s == "daily") {
    return {activity::kDaily, 1.0};
  }
  if (s == "weekday") {
    return {activity::kWeekday, 1.0};
  }
  if (s.starts_with("random")) {
    auto p = 0.5;
    if (s.size() > 7U && s[6] == ':') {
      p = std::stod(std::string{s.substr(7)});
    }
    if (p <= 0.0 || p > 1.0) {
      throw invalid_data{fmt::format("activity probability {} not in (0,1]", p)};
    }
    return {activity::kRandom, p};
  }
  throw invalid_data{fmt::format("unknown activity pattern \"{}\"", s)};
}

timetable gen_synthetic(synthetic_params const& p) {
  if (p.n_stops_ == 0U || p.n_routes_ == 0U || p.trips_per_route_ == 0U ||
      p.horizon_days_ == 0U) {
    throw invalid_data{"synthetic: all counts must be at least 1"};
  }
  if (p.footpath_density_ < 0.0 || p.footpath_density_ > 1.0) {
    throw invalid_data{"synthetic: footpath density must be in [0,1]"};
  }

  auto rng = std::mt19937_64{p.seed_};
  auto const uniform = [&](std::int64_t const lo, std::int64_t const hi) {
    return std::uniform_int_distribution<std::int64_t>{lo, hi}(rng);
  };
  auto const chance = [&](double const q) {
    return std::uniform_real_distribution<double>{0.0, 1.0}(rng) < q;
  };

  auto tt = timetable{};
  tt.horizon_days_ = p.horizon_days_;
  for (auto s = 0U; s != p.n_stops_; ++s) {
    tt.stops_.push_back(stop{.id_ = fmt::format("S{}", s),
                             .name_ = fmt::format("Stop {}", s),
                             .min_change_time_ = uniform(0, 6) * 30});
  }
  if (p.footpath_density_ > 0.0) {
    for (auto a = 0U; a != p.n_stops_; ++a) {
      for (auto b = 0U; b != p.n_stops_; ++b) {
        if (a != b && chance(p.footpath_density_)) {
          tt.footpaths_.push_back(footpath{.from_ = stop_idx_t{a},
                                           .to_ = stop_idx_t{b},
                                           .duration_ = uniform(1, 10) * 60});
        }
      }
    }
  }

  auto const days_for = [&]() {
    auto days = day_bitset{p.horizon_days_};
    for (auto d = 0U; d != p.horizon_days_; ++d) {
      switch (p.activity_.kind_) {
        case activity::kDaily: days.set(d); break;
        case activity::kWeekday:
          if (d % 7U < 5U) {
            days.set(d);
          }
          break;
        case activity::kRandom:
          if (chance(p.activity_.p_)) {
            days.set(d);
          }
          break;
      }
    }
    if (days.none()) {
      days.set(static_cast<std::size_t>(uniform(0, p.horizon_days_ - 1)));
    }
    return days;
  };

  // Stops lie on a grid; lines walk along grid edges so that lines share
  // corridors. Every other line runs the reverse of its predecessor.
  auto const width = static_cast<std::uint32_t>(
      std::ceil(std::sqrt(static_cast<double>(p.n_stops_))));
  auto const neighbors = [&](std::uint32_t const s) {
    auto out = std::vector<std::uint32_t>{};
    auto const x = s % width;
    auto const y = s / width;
    if (x != 0U) {
      out.push_back(s - 1U);
    }
    if (x + 1U != width && s + 1U < p.n_stops_) {
      out.push_back(s + 1U);
    }
    if (y != 0U) {
      out.push_back(s - width);
    }
    if (s + width < p.n_stops_) {
      out.push_back(s + width);
    }
    return out;
  };

  auto trips = std::vector<trip>{};
  auto stops = std::vector<stop_idx_t>{};
  auto hop = std::vector<seconds_t>{};
  auto dwell = std::vector<seconds_t>{};
  for (auto line = 0U; line != p.n_routes_; ++line) {
    auto const reverse = line % 2U == 1U && stops.size() >= 2U;
    if (reverse) {
      std::reverse(begin(stops), end(stops));
      std::reverse(begin(hop) + 1, end(hop));
      std::reverse(begin(dwell) + 1, end(dwell));
    } else {
      auto const max_len = std::min<std::int64_t>(12, std::max(2U, p.n_stops_));
      auto const len = static_cast<std::size_t>(uniform(2, max_len));
      auto at = static_cast<std::uint32_t>(uniform(0, p.n_stops_ - 1U));
      auto seq = std::vector<std::uint32_t>{at};
      auto dir = std::optional<std::int64_t>{};
      while (seq.size() != len) {
        auto options = neighbors(at);
        std::erase_if(options, [&](std::uint32_t const n) {
          return std::find(begin(seq), end(seq), n) != end(seq);
        });
        if (options.empty()) {
          break;
        }
        auto next = options[static_cast<std::size_t>(
            uniform(0, static_cast<std::int64_t>(options.size()) - 1))];
        if (dir.has_value() && chance(0.7)) {
          auto const straight = static_cast<std::int64_t>(at) + *dir;
          if (std::find(begin(options), end(options), straight) != end(options)) {
            next = static_cast<std::uint32_t>(straight);
          }
        }
        dir = static_cast<std::int64_t>(next) - static_cast<std::int64_t>(at);
        seq.push_back(next);
        at = next;
      }
      if (seq.size() < 2U) {
        seq.push_back(seq.front() == 0U && p.n_stops_ > 1U ? 1U : 0U);
      }
      if (seq.size() >= 3U && chance(0.15)) {
        seq.push_back(seq.front());  // circular line
      }
      stops.clear();
      for (auto const s : seq) {
        stops.push_back(stop_idx_t{s});
      }
      hop.assign(stops.size(), 0);
      dwell.assign(stops.size(), 0);
      for (auto i = 1U; i != stops.size(); ++i) {
        hop[i] = uniform(2, 6) * 60;
        dwell[i] = uniform(0, 2) * 30;
      }
    }
    auto const len = stops.size();

    auto const late = chance(0.2);
    auto const first = late ? uniform(22 * 60, 23 * 60 + 50) * 60
                            : uniform(5 * 60, 21 * 60) * 60;
    auto const headway = std::min<seconds_t>(
        uniform(10, 60) * 60,
        kSecondsPerDay / (2 * static_cast<seconds_t>(p.trips_per_route_) + 1));

    auto slow = seconds_t{0};
    for (auto k = 0U; k != p.trips_per_route_; ++k) {
      if (k != 0U && chance(0.2)) {
        slow += 30;  // later trips may run slower, never faster
      }
      auto t = trip{.id_ = fmt::format("L{}T{}", line, k),
                    .stops_ = stops,
                    .arr_ = std::vector<rel_time_t>(len),
                    .dep_ = std::vector<rel_time_t>(len),
                    .active_days_ = days_for()};
      auto now = first + static_cast<seconds_t>(k) * headway;
      t.arr_[0] = now;
      t.dep_[0] = now;
      for (auto i = 1U; i != len; ++i) {
        now += hop[i] + slow;
        t.arr_[i] = now;
        now += dwell[i];
        t.dep_[i] = now;
      }
      trips.push_back(std::move(t));
    }
  }

  tt.routes_ = partition_routes(std::move(trips));
  return tt;
}

}  // namespace tb
