#include <random>
#include <set>
#include <tuple>

#include "gtest/gtest.h"

#include "tb/day_view.h"
#include "tb/flat_timetable.h"
#include "tb/preprocess.h"

#include "test_util.h"

using namespace tb;
using test::make_trip;

namespace {

// (route, trip, exit, to route, to trip, board, shift, source day)
using instance_key = std::tuple<std::uint32_t, std::uint32_t, pos_t, std::uint32_t,
                                std::uint32_t, pos_t, std::uint32_t, day_idx_t>;

std::set<instance_key> view_instances(day_view const& v) {
  auto out = std::set<instance_key>{};
  v.for_each_transfer([&](trip_ref const from, pos_t const exit, view_transfer const& x) {
    EXPECT_GE(x.to_.day_offset(), from.day_offset());
    out.emplace(from.route_.v_, from.trip_index(), exit, x.to_.route_.v_,
                x.to_.trip_index(), x.board_, x.to_.day_offset() - from.day_offset(),
                v.day_of(from.day_offset()));
  });
  return out;
}

// instances of the transfer set with source day in [lo, hi] and target day
// at most hi
std::set<instance_key> set_instances(transfer_set const& ts, day_idx_t const lo,
                                     day_idx_t const hi) {
  auto out = std::set<instance_key>{};
  for (auto r = 0U; r != ts.rows_.size(); ++r) {
    for (auto t = 0U; t != ts.rows_[r].size(); ++t) {
      for (auto const& x : ts.rows_[r][t]) {
        x.valid_days_.for_each_day([&](day_idx_t const d) {
          if (d >= lo && d <= hi && d + x.day_shift_ <= hi) {
            out.emplace(r, t, x.from_stop_, x.to_route_.v_, x.to_trip_, x.to_stop_,
                        x.day_shift_, d);
          }
        });
      }
    }
  }
  return out;
}

}  // namespace

TEST(day_view, same_day_transfer_at_offset_one) {
  auto const tt = test::make_timetable(
      3U, 3U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "010"),
       make_trip("u", {{1, 0, 160}, {2, 300, 300}}, "010")});
  auto const pre = preprocess(tt);
  auto const v = day_view{tt, pre.reduced_, 1};
  auto const [r, i] = tt.find_trip("t");
  auto const [ur, ui] = tt.find_trip("u");
  auto const from = trip_ref{r, pack_trip_ref(1U, i)};
  EXPECT_TRUE(v.active(from));
  EXPECT_FALSE(v.active(trip_ref{r, pack_trip_ref(0U, i)}));
  EXPECT_EQ(v.arr(from, 1U), abs_time(1, 100));
  auto const xs = v.transfers(from, 1U);
  ASSERT_EQ(xs.size(), 1U);
  EXPECT_EQ(xs[0].to_, (trip_ref{ur, pack_trip_ref(1U, ui)}));
  EXPECT_EQ(xs[0].board_, 0U);
  EXPECT_EQ(xs[0].dep_, abs_time(1, 160));
  EXPECT_EQ(v.n_transfers(), 1U);
}

TEST(day_view, transfer_on_distant_day_absent) {
  auto const tt = test::make_timetable(
      3U, 8U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "01000000"),
       make_trip("u", {{1, 0, 160}, {2, 300, 300}}, "01000000")});
  auto const pre = preprocess(tt);
  ASSERT_EQ(pre.reduced_.size(), 1U);
  EXPECT_EQ(day_view(tt, pre.reduced_, 6).n_transfers(), 0U);
  EXPECT_EQ(day_view(tt, pre.reduced_, 2).n_transfers(), 1U);
}

TEST(day_view, rejects_bad_arguments) {
  auto const tt = test::small_instance(1U);
  auto const pre = preprocess(tt);
  EXPECT_THROW(day_view(tt, pre.reduced_, -1), range_error);
  EXPECT_THROW(day_view(tt, pre.reduced_, static_cast<day_idx_t>(tt.horizon_days_)),
               range_error);
  EXPECT_THROW(day_view(tt, pre.reduced_, 0, 0U), range_error);
}

TEST(day_view, contents_are_exact_per_day) {
  for (auto seed = 1U; seed <= 30U; ++seed) {
    auto const tt = test::small_instance(seed);
    auto const pre = preprocess(tt);
    for (auto q = 0; q != static_cast<day_idx_t>(tt.horizon_days_); ++q) {
      for (auto const h : {1U, 2U, 3U}) {
        auto const v = day_view{tt, pre.reduced_, q, h};
        auto const hi = std::min(q - 1 + static_cast<day_idx_t>(h),
                                 static_cast<day_idx_t>(tt.horizon_days_) - 1);
        ASSERT_EQ(view_instances(v), set_instances(pre.reduced_, q - 1, hi))
            << "seed " << seed << " q " << q << " h " << h;
      }
    }
  }
}

TEST(day_view, union_reconstructs_reduced_set) {
  for (auto seed = 1U; seed <= 30U; ++seed) {
    auto const tt = test::small_instance(seed);
    auto const pre = preprocess(tt);
    auto all = std::set<instance_key>{};
    for (auto q = 0; q != static_cast<day_idx_t>(tt.horizon_days_); ++q) {
      auto const v = view_instances(day_view{tt, pre.reduced_, q});
      all.insert(begin(v), end(v));
    }
    ASSERT_EQ(all, set_instances(pre.reduced_, 0, static_cast<day_idx_t>(tt.horizon_days_)))
        << "seed " << seed;
  }
}

TEST(day_view, times_and_omitted_targets) {
  for (auto seed = 1U; seed <= 20U; ++seed) {
    auto const tt = test::small_instance(seed);
    auto const pre = preprocess(tt);
    auto const q = static_cast<day_idx_t>(seed % tt.horizon_days_);
    auto const v = day_view{tt, pre.reduced_, q, 1U};
    for (auto r = 0U; r != tt.n_routes(); ++r) {
      auto const& route = tt.routes_[r];
      for (auto o = 0U; o <= 1U; ++o) {
        auto const d = v.day_of(o);
        for (auto i = 0U; i != route.n_trips(); ++i) {
          auto const ref = trip_ref{route_idx_t{r}, pack_trip_ref(o, i)};
          auto const& t = route.trips_[i];
          auto const running = d >= 0 && d < static_cast<day_idx_t>(tt.horizon_days_) &&
                               t.active_days_.test(static_cast<std::size_t>(d));
          ASSERT_EQ(v.active(ref), running);
          if (!running) {
            continue;
          }
          for (auto e = 0U; e != t.size(); ++e) {
            if (e != 0U) {
              ASSERT_EQ(v.arr(ref, e), abs_time(d, t.arr(e)));
            }
            if (e + 1U != t.size()) {
              ASSERT_EQ(v.dep(ref, e), abs_time(d, t.dep(e)));
            }
            for (auto const& x : v.transfers(ref, e)) {
              auto const& u = tt.get(x.to_.route_).trips_[x.to_.trip_index()];
              ASSERT_EQ(x.dep_, abs_time(v.day_of(x.to_.day_offset()), u.dep(x.board_)));
            }
            auto omitted = kInfinity;
            for (auto const& x : pre.reduced_.row(route_idx_t{r}, i)) {
              if (x.from_stop_ == e && x.valid_days_.test(static_cast<std::size_t>(d)) &&
                  o + x.day_shift_ > 1U) {
                auto const& u = tt.get(x.to_route_).trips_[x.to_trip_];
                omitted = std::min(omitted, abs_time(d + x.day_shift_, u.dep(x.to_stop_)));
              }
            }
            ASSERT_EQ(v.first_omitted(ref, e), omitted) << "seed " << seed;
          }
        }
      }
    }
  }
}

TEST(day_view_cache, repeated_request_hits) {
  auto const tt = test::small_instance(2U);
  auto const pre = preprocess(tt);
  auto cache = day_view_cache{tt, pre.reduced_};
  EXPECT_EQ(cache.capacity(), 8U);
  auto const a = cache.get_or_build(0);
  auto const b = cache.get_or_build(0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(cache.misses(), 1U);
  EXPECT_EQ(cache.hits(), 1U);
}

TEST(day_view_cache, capacity_one_evicts) {
  auto const tt = test::small_instance(2U);
  ASSERT_GE(tt.horizon_days_, 2U);
  auto const pre = preprocess(tt);
  auto cache = day_view_cache{tt, pre.reduced_, 1U};
  cache.get_or_build(0);
  cache.get_or_build(1);
  cache.get_or_build(0);
  EXPECT_EQ(cache.misses(), 3U);
  EXPECT_EQ(cache.hits(), 0U);
  EXPECT_EQ(cache.size(), 1U);
}

TEST(day_view_cache, least_recently_used_is_evicted) {
  auto const tt = test::small_instance(4U, test::small_limits{.max_days_ = 10U});
  ASSERT_GE(tt.horizon_days_, 3U);
  auto const pre = preprocess(tt);
  auto cache = day_view_cache{tt, pre.reduced_, 2U};
  cache.get_or_build(0);
  cache.get_or_build(1);
  cache.get_or_build(0);  // hit, 1 is now least recent
  cache.get_or_build(2);  // evicts 1
  cache.get_or_build(0);  // hit
  cache.get_or_build(1);  // miss
  EXPECT_EQ(cache.hits(), 2U);
  EXPECT_EQ(cache.misses(), 4U);
  EXPECT_THROW(cache.get_or_build(-1), range_error);
  cache.clear();
  EXPECT_EQ(cache.size(), 0U);
}

TEST(day_view_cache, views_equal_fresh_builds) {
  auto const tt = test::small_instance(6U);
  auto const pre = preprocess(tt);
  auto cache = day_view_cache{tt, pre.reduced_, 3U};
  auto rng = std::mt19937_64{6U};
  for (auto k = 0U; k != 200U; ++k) {
    auto const q = test::random_day(tt, rng);
    auto const h = 1U + static_cast<std::uint32_t>(rng() % 3U);
    ASSERT_EQ(*cache.get_or_build(q, h), (day_view{tt, pre.reduced_, q, h}));
  }
  EXPECT_GT(cache.hits(), 0U);
}

TEST(flatten, single_day_single_instance) {
  auto const tt = test::make_timetable(
      2U, 3U, {make_trip("t", {{0, 0, 100}, {1, 200, 200}}, "010")});
  auto const pre = preprocess(tt);
  auto const flat = flatten_window(tt, pre.reduced_, 1, 1U);
  ASSERT_EQ(flat.n_trips(), 1U);
  EXPECT_EQ(flat.trip(0U).day_, 1);
  EXPECT_EQ(flat.dep(0U, 0U), abs_time(1, 100));
  EXPECT_EQ(flat.arr(0U, 1U), abs_time(1, 200));
  EXPECT_EQ(flatten_window(tt, pre.reduced_, 0, 1U).n_trips(), 0U);
}

TEST(flatten, next_day_target_outside_window_excluded) {
  auto const tt = test::make_timetable(
      3U, 3U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "111"),
       make_trip("u", {{1, 0, 50}, {2, 300, 300}}, "111")});
  auto const pre = preprocess(tt);
  ASSERT_EQ(pre.full_.n_day_instances(), 2U);  // days 0 and 1, shift 1
  auto const inside = flatten_window(tt, pre.full_, 0, 2U);
  EXPECT_EQ(inside.n_transfers(), 1U);
  auto const last_day = flatten_window(tt, pre.full_, 1, 1U);
  EXPECT_EQ(last_day.n_transfers(), 0U);
}

TEST(flatten, rejects_windows_outside_horizon) {
  auto const tt = test::small_instance(1U);
  auto const pre = preprocess(tt);
  auto const D = tt.horizon_days_;
  EXPECT_THROW(flatten_window(tt, pre.reduced_, -1, 1U), range_error);
  EXPECT_THROW(flatten_window(tt, pre.reduced_, 0, D + 1U), range_error);
  EXPECT_THROW(flatten_window(tt, pre.reduced_, 0, 0U), range_error);
  EXPECT_NO_THROW(flatten_window(tt, pre.reduced_, 0, D));
}

TEST(flatten, instances_edges_and_route_order) {
  for (auto seed = 1U; seed <= 30U; ++seed) {
    auto const tt = test::small_instance(seed);
    auto const pre = preprocess(tt);
    auto const D = static_cast<day_idx_t>(tt.horizon_days_);
    auto const w = static_cast<day_idx_t>(seed % tt.horizon_days_);
    auto const L = static_cast<std::uint32_t>(std::min(D - w, 3));
    auto const flat = flatten_window(tt, pre.reduced_, w, L);

    auto expected_trips = std::size_t{0U};
    for (auto const& r : tt.routes_) {
      for (auto const& t : r.trips_) {
        for (auto d = w; d != w + static_cast<day_idx_t>(L); ++d) {
          expected_trips += t.active_days_.test(static_cast<std::size_t>(d)) ? 1U : 0U;
        }
      }
    }
    ASSERT_EQ(flat.n_trips(), expected_trips);
    ASSERT_EQ(flat.n_transfers(),
              set_instances(pre.reduced_, w, w + static_cast<day_idx_t>(L) - 1).size());

    for (auto fr = 0U; fr != flat.n_routes(); ++fr) {
      auto const& route = flat.route(fr);
      for (auto k = 1U; k < route.n_trips_; ++k) {
        auto const a = route.first_ + k - 1U;
        auto const b = route.first_ + k;
        for (auto i = 0U; i != flat.n_stops(a); ++i) {
          if (i != 0U) {
            ASSERT_LE(flat.arr(a, i), flat.arr(b, i));
          }
          if (i + 1U != flat.n_stops(a)) {
            ASSERT_LE(flat.dep(a, i), flat.dep(b, i));
          }
        }
      }
    }
    for (auto t = 0U; t != flat.n_trips(); ++t) {
      auto const& ft = flat.trip(t);
      auto const& orig = tt.get(ft.route_).trips_[ft.trip_];
      ASSERT_TRUE(orig.active_days_.test(static_cast<std::size_t>(ft.day_)));
      for (auto e = 0U; e != flat.n_stops(t); ++e) {
        for (auto const& x : flat.transfers(t, e)) {
          ASSERT_LE(flat.arr(t, e), flat.dep(x.to_, x.board_));
        }
      }
    }
  }
}
