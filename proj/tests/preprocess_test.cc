#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include "gtest/gtest.h"

#include "tb/day_view.h"
#include "tb/preprocess.h"
#include "tb/query.h"
#include "tb/transfer_set.h"

#include "test_util.h"

using namespace tb;
using test::hm;
using test::make_trip;

namespace {

// (route, trip, exit, to route, to trip, board, shift, source day)
using instance_key = std::tuple<std::uint32_t, std::uint32_t, pos_t, std::uint32_t,
                                std::uint32_t, pos_t, std::uint32_t, day_idx_t>;

std::set<instance_key> expand(transfer_set const& ts) {
  auto out = std::set<instance_key>{};
  for (auto r = 0U; r != ts.rows_.size(); ++r) {
    for (auto t = 0U; t != ts.rows_[r].size(); ++t) {
      for (auto const& x : ts.rows_[r][t]) {
        x.valid_days_.for_each_day([&](day_idx_t const d) {
          out.emplace(r, t, x.from_stop_, x.to_route_.v_, x.to_trip_, x.to_stop_,
                      x.day_shift_, d);
        });
      }
    }
  }
  return out;
}

// Per source day: the first instance (in day, trip order) of every route
// position reachable at every exit, by exhaustive enumeration.
std::set<instance_key> brute_force_transfers(timetable const& tt,
                                             std::uint32_t const max_shift) {
  auto out = std::set<instance_key>{};
  auto const D = static_cast<day_idx_t>(tt.horizon_days_);
  for (auto r = 0U; r != tt.n_routes(); ++r) {
    for (auto ti = 0U; ti != tt.routes_[r].n_trips(); ++ti) {
      auto const& t = tt.routes_[r].trips_[ti];
      for (auto d = 0; d != D; ++d) {
        if (!t.active_days_.test(static_cast<std::size_t>(d))) {
          continue;
        }
        for (auto e = 1U; e != t.size(); ++e) {
          auto const s = t.stops_[e];
          auto targets = std::vector<std::pair<stop_idx_t, seconds_t>>{{s, -1}};
          for (auto const& f : tt.footpaths_) {
            if (f.from_ == s) {
              targets.emplace_back(f.to_, f.duration_);
            }
          }
          for (auto const& [target, walk] : targets) {
            for (auto r2 = 0U; r2 != tt.n_routes(); ++r2) {
              auto const& to = tt.routes_[r2];
              auto const slack = walk < 0 ? tt.change_time(s, route_idx_t{r}, route_idx_t{r2})
                                          : walk;
              auto const ready = abs_time(d, t.arr(e)) + slack;
              for (auto b = 0U; b + 1U < to.size(); ++b) {
                if (to.stops_[b] != target) {
                  continue;
                }
                auto found = false;
                for (auto shift = 0U; shift <= max_shift && !found; ++shift) {
                  auto const d2 = d + static_cast<day_idx_t>(shift);
                  if (d2 >= D) {
                    break;
                  }
                  for (auto ui = 0U; ui != to.n_trips() && !found; ++ui) {
                    auto const& u = to.trips_[ui];
                    if (u.active_days_.test(static_cast<std::size_t>(d2)) &&
                        abs_time(d2, u.dep(b)) >= ready) {
                      out.emplace(r, ti, e, r2, ui, b, shift, d);
                      found = true;
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::size_t min_chain_cover(std::vector<trip> const& trips) {
  auto const n = trips.size();
  auto match_to = std::vector<int>(n, -1);
  auto const augment = [&](auto&& self, std::size_t const a,
                           std::vector<bool>& seen) -> bool {
    for (auto b = 0U; b != n; ++b) {
      if (a == b || seen[b] || !precedes(trips[a], trips[b]) ||
          (precedes(trips[b], trips[a]) && b < a)) {
        continue;
      }
      seen[b] = true;
      if (match_to[b] == -1 ||
          self(self, static_cast<std::size_t>(match_to[b]), seen)) {
        match_to[b] = static_cast<int>(a);
        return true;
      }
    }
    return false;
  };
  auto matched = std::size_t{0U};
  for (auto a = 0U; a != n; ++a) {
    auto seen = std::vector<bool>(n, false);
    matched += augment(augment, a, seen) ? 1U : 0U;
  }
  return n - matched;
}

// The plain first-fit rule: sort, append to the first chain whose last trip
// precedes the candidate.
std::size_t greedy_chains(std::vector<trip> trips) {
  std::stable_sort(begin(trips), end(trips), [](trip const& a, trip const& b) {
    return std::pair(a.dep_.front(), a.arr_.back()) <
           std::pair(b.dep_.front(), b.arr_.back());
  });
  auto chains = std::vector<trip const*>{};
  for (auto const& t : trips) {
    auto const it = std::find_if(begin(chains), end(chains),
                                 [&](trip const* last) { return precedes(*last, t); });
    if (it == end(chains)) {
      chains.push_back(&t);
    } else {
      *it = &t;
    }
  }
  return chains.size();
}

std::vector<trip> random_trips_on_one_sequence(std::uint64_t const seed,
                                               seconds_t const spread) {
  auto rng = std::mt19937_64{seed};
  auto trips = std::vector<trip>{};
  for (auto i = 0U; i != 100U; ++i) {
    auto st = std::vector<test::stop_time_spec>{};
    auto t = static_cast<seconds_t>(rng() % static_cast<std::uint64_t>(spread));
    for (auto s = 0U; s != 5U; ++s) {
      auto const arr = t;
      auto const dep = arr + static_cast<seconds_t>(rng() % 3U) * 30;
      st.push_back({s, arr, dep});
      t = dep + 60 + static_cast<seconds_t>(rng() % 20U) * 30;
    }
    trips.push_back(make_trip(fmt::format("t{}", i), st, "1"));
  }
  return trips;
}

transfer_set one_row(timetable const& tt, transfer_set::row_t row) {
  auto ts = transfer_set{};
  ts.horizon_days_ = tt.horizon_days_;
  ts.rows_.resize(tt.n_routes());
  for (auto r = 0U; r != tt.n_routes(); ++r) {
    ts.rows_[r].resize(tt.routes_[r].n_trips());
  }
  auto const [r, t] = tt.find_trip("t");
  ts.rows_[r.v_][t] = std::move(row);
  return ts;
}

profile_front front_with(timetable const& tt, transfer_set const& ts, stop_idx_t const src,
                         stop_idx_t const dst, day_idx_t const q, std::uint32_t const h) {
  return profile_query(day_view{tt, ts, q, h}, src, dst).front();
}

}  // namespace

TEST(partition, later_trip_joins_route) {
  auto const routes = partition_routes(
      {make_trip("a", {{0, 0, hm(10, 0)}, {1, hm(11, 0), hm(11, 0)}}, "1"),
       make_trip("b", {{0, 0, hm(10, 30)}, {1, hm(11, 30), hm(11, 30)}}, "1")});
  ASSERT_EQ(routes.size(), 1U);
  EXPECT_EQ(routes[0].n_trips(), 2U);
  EXPECT_EQ(routes[0].trips_[0].id_, "a");
}

TEST(partition, overtaking_trip_opens_route) {
  auto const routes = partition_routes(
      {make_trip("a", {{0, 0, hm(10, 0)}, {1, hm(11, 0), hm(11, 0)}}, "1"),
       make_trip("b", {{0, 0, hm(10, 30)}, {1, hm(10, 45), hm(10, 45)}}, "1")});
  EXPECT_EQ(routes.size(), 2U);
  for (auto const& r : routes) {
    EXPECT_TRUE(is_ordered(r));
  }
}

TEST(partition, different_sequences_never_share_a_route) {
  auto const routes = partition_routes(
      {make_trip("a", {{0, 0, 100}, {1, 200, 200}}, "1"),
       make_trip("b", {{0, 0, 300}, {2, 400, 400}}, "1"),
       make_trip("c", {{0, 0, 500}, {1, 600, 600}}, "1")});
  ASSERT_EQ(routes.size(), 2U);
  for (auto const& r : routes) {
    for (auto const& t : r.trips_) {
      EXPECT_EQ(t.stops_, r.stops_);
    }
  }
}

TEST(partition, random_trips_form_ordered_chains) {
  for (auto seed = 1U; seed <= 20U; ++seed) {
    for (auto const spread : {seconds_t{4 * 3600}, seconds_t{40 * 3600}}) {
      auto const trips = random_trips_on_one_sequence(seed, spread);
      auto const routes = partition_routes(trips);

      auto ids = std::multiset<std::string>{};
      for (auto const& r : routes) {
        ASSERT_TRUE(is_ordered(r)) << "seed " << seed;
        for (auto const& t : r.trips_) {
          ids.insert(t.id_);
        }
      }
      auto expected = std::multiset<std::string>{};
      for (auto const& t : trips) {
        expected.insert(t.id_);
      }
      ASSERT_EQ(ids, expected);

      ASSERT_GE(routes.size(), min_chain_cover(trips)) << "seed " << seed;
      if (spread < kSecondsPerDay / 2) {
        // the one-day span never binds: same count as plain first-fit
        ASSERT_EQ(routes.size(), greedy_chains(trips)) << "seed " << seed;
      } else {
        ASSERT_GE(routes.size(), greedy_chains(trips)) << "seed " << seed;
      }
    }
  }
}

TEST(compute, change_time_met_with_equality) {
  auto const tt = test::make_timetable(
      3U, 1U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1"),
       make_trip("u", {{1, 0, 160}, {2, 300, 300}}, "1")},
      60);
  auto const ts = compute_transfers(tt);
  auto const [r, i] = tt.find_trip("t");
  auto const [ur, ui] = tt.find_trip("u");
  auto const row = ts.row(r, i);
  ASSERT_EQ(row.size(), 1U);
  EXPECT_EQ(row[0].from_stop_, 1U);
  EXPECT_EQ(row[0].to_route_, ur);
  EXPECT_EQ(row[0].to_trip_, ui);
  EXPECT_EQ(row[0].to_stop_, 0U);
  EXPECT_EQ(row[0].day_shift_, 0U);
  EXPECT_EQ(row[0].valid_days_.to_string(), "1");
}

TEST(compute, missed_by_one_second_shifts_a_day) {
  auto const single_day = test::make_timetable(
      3U, 1U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1"),
       make_trip("u", {{1, 0, 159}, {2, 300, 300}}, "1")},
      60);
  EXPECT_EQ(compute_transfers(single_day).size(), 0U);

  auto const two_days = test::make_timetable(
      3U, 2U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "10"),
       make_trip("u", {{1, 0, 159}, {2, 300, 300}}, "11")},
      60);
  auto const ts = compute_transfers(two_days);
  auto const [r, i] = two_days.find_trip("t");
  auto const row = ts.row(r, i);
  ASSERT_EQ(row.size(), 1U);
  EXPECT_EQ(row[0].day_shift_, 1U);
  EXPECT_EQ(row[0].valid_days_.to_string(), "10");
}

TEST(compute, earliest_reachable_trip_per_day) {
  auto const tt = test::make_timetable(
      3U, 2U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "11"),
       make_trip("u1", {{1, 0, 200}, {2, 300, 300}}, "10"),
       make_trip("u2", {{1, 0, 400}, {2, 500, 500}}, "11")});
  auto const ts = compute_transfers(tt);
  auto const [r, i] = tt.find_trip("t");
  auto const [r1, i1] = tt.find_trip("u1");
  auto const [r2, i2] = tt.find_trip("u2");
  ASSERT_EQ(r1, r2);
  auto const row = ts.row(r, i);
  ASSERT_EQ(row.size(), 2U);
  EXPECT_EQ(row[0].to_trip_, i1);
  EXPECT_EQ(row[0].valid_days_.to_string(), "10");
  EXPECT_EQ(row[1].to_trip_, i2);
  EXPECT_EQ(row[1].valid_days_.to_string(), "01");
}

TEST(compute, footpath_transfer) {
  auto const tt = test::make_timetable(
      4U, 1U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1"),
       make_trip("u", {{2, 0, 219}, {3, 300, 300}}, "1"),
       make_trip("v", {{2, 0, 220}, {3, 400, 400}}, "1")},
      1000, {footpath{stop_idx_t{1U}, stop_idx_t{2U}, 120}});
  auto const ts = compute_transfers(tt);
  auto const [r, i] = tt.find_trip("t");
  auto const [vr, vi] = tt.find_trip("v");
  auto const row = ts.row(r, i);
  ASSERT_EQ(row.size(), 1U);
  EXPECT_EQ(row[0].to_route_, vr);
  EXPECT_EQ(row[0].to_trip_, vi);
}

TEST(compute, matches_per_day_brute_force) {
  for (auto seed = 1U; seed <= 60U; ++seed) {
    auto const tt = test::small_instance(seed);
    auto const full = compute_transfers(tt);
    ASSERT_EQ(expand(full), brute_force_transfers(tt, 2U)) << "seed " << seed;
  }
}

TEST(compute, single_day_matches_classic_algorithm) {
  for (auto seed = 1U; seed <= 30U; ++seed) {
    auto tt = test::small_instance(seed, test::small_limits{.max_days_ = 1U});
    ASSERT_EQ(tt.horizon_days_, 1U);
    auto const full = compute_transfers(tt);
    auto expected = std::set<instance_key>{};
    for (auto r = 0U; r != tt.n_routes(); ++r) {
      for (auto ti = 0U; ti != tt.routes_[r].n_trips(); ++ti) {
        auto const& t = tt.routes_[r].trips_[ti];
        for (auto e = 1U; e != t.size(); ++e) {
          auto const s = t.stops_[e];
          for (auto r2 = 0U; r2 != tt.n_routes(); ++r2) {
            auto const& to = tt.routes_[r2];
            for (auto b = 0U; b + 1U < to.size(); ++b) {
              auto walk = kInfinity;
              if (to.stops_[b] == s) {
                walk = tt.change_time(s, route_idx_t{r}, route_idx_t{r2});
              } else {
                for (auto const& f : tt.footpaths_) {
                  if (f.from_ == s && f.to_ == to.stops_[b]) {
                    walk = f.duration_;
                  }
                }
              }
              if (walk == kInfinity) {
                continue;
              }
              for (auto ui = 0U; ui != to.n_trips(); ++ui) {
                if (to.trips_[ui].dep(b) >= t.arr(e) + walk) {
                  expected.emplace(r, ti, e, r2, ui, b, 0U, 0);
                  break;
                }
              }
            }
          }
        }
      }
    }
    ASSERT_EQ(expand(full), expected) << "seed " << seed;
    for (auto const& rows : full.rows_) {
      for (auto const& row : rows) {
        for (auto const& x : row) {
          ASSERT_EQ(x.valid_days_.to_string(), "1");
          ASSERT_EQ(x.day_shift_, 0U);
        }
      }
    }
  }
}

TEST(reduce, dominated_later_trip_dropped) {
  auto const tt = test::make_timetable(
      4U, 1U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1"),
       make_trip("u1", {{1, 0, 200}, {2, 300, 300}, {3, 400, 400}}, "1"),
       make_trip("u2", {{1, 0, 300}, {2, 400, 400}, {3, 500, 500}}, "1")});
  auto const [r, i] = tt.find_trip("t");
  auto const [ur, u1] = tt.find_trip("u1");
  auto const [ur2, u2] = tt.find_trip("u2");
  auto const days = day_bitset::from_string("1");
  auto const full = one_row(tt, {transfer{1U, ur, u1, 0U, 0U, days},
                                 transfer{1U, ur2, u2, 0U, 0U, days}});
  auto const reduced = reduce_transfers(tt, full);
  auto const row = reduced.row(r, i);
  ASSERT_EQ(row.size(), 1U);
  EXPECT_EQ(row[0].to_trip_, u1);
}

TEST(reduce, transfer_without_improvement_dropped) {
  auto const tt = test::make_timetable(
      4U, 1U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}, {2, 200, 200}, {3, 300, 300}}, "1"),
       make_trip("u", {{1, 0, 150}, {2, 250, 250}, {3, 350, 350}}, "1")});
  auto const pre = preprocess(tt);
  auto const [r, i] = tt.find_trip("t");
  auto const [ur, ui] = tt.find_trip("u");
  auto const full_row = pre.full_.row(r, i);
  EXPECT_TRUE(std::any_of(begin(full_row), end(full_row), [&](transfer const& x) {
    return x.to_route_ == ur && x.to_trip_ == ui && x.from_stop_ == 1U;
  }));
  EXPECT_EQ(pre.reduced_.row(r, i).size(), 0U);
}

TEST(reduce, improving_transfer_kept_on_needed_days_only) {
  auto const tt = test::make_timetable(
      4U, 2U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}, {2, 200, 200}, {3, 300, 300}}, "11"),
       make_trip("fast", {{1, 0, 150}, {3, 250, 250}}, "10"),
       make_trip("slow", {{1, 0, 150}, {2, 160, 160}, {3, 900, 900}}, "11")});
  auto const pre = preprocess(tt);
  auto const [r, i] = tt.find_trip("t");
  auto const [fr, fi] = tt.find_trip("fast");
  auto const row = pre.reduced_.row(r, i);
  auto kept = std::vector<std::pair<std::uint32_t, std::string>>{};
  for (auto const& x : row) {
    kept.emplace_back(x.to_route_.v_, x.valid_days_.to_string());
  }
  ASSERT_EQ(kept.size(), 2U) << fmt::format("{}", kept.size());
  auto const has = [&](route_idx_t const route, std::string const& days) {
    return std::find(begin(kept), end(kept), std::pair(route.v_, days)) != end(kept);
  };
  EXPECT_TRUE(has(fr, "10"));
  auto const [sr, si] = tt.find_trip("slow");
  EXPECT_TRUE(has(sr, "11"));
}

TEST(reduce, stored_transfers_are_feasible_and_within_active_days) {
  for (auto seed = 1U; seed <= 60U; ++seed) {
    auto const tt = test::small_instance(seed);
    auto const idx = timetable_index{tt};
    auto const pre = preprocess(tt);
    for (auto const* ts : {&pre.full_, &pre.reduced_}) {
      for (auto r = 0U; r != tt.n_routes(); ++r) {
        for (auto t = 0U; t != tt.routes_[r].n_trips(); ++t) {
          auto const& from = tt.routes_[r].trips_[t];
          for (auto const& x : ts->row(route_idx_t{r}, t)) {
            ASSERT_TRUE(is_feasible(tt, idx, route_idx_t{r}, t, x)) << "seed " << seed;
            ASSERT_TRUE(x.valid_days_.any());
            ASSERT_GE(x.from_stop_, 1U);
            ASSERT_LT(x.to_stop_ + 1U, tt.get(x.to_route_).size());
            auto const& to = tt.get(x.to_route_).trips_[x.to_trip_];
            auto const allowed =
                from.active_days_ & to.active_days_.shifted_down(x.day_shift_);
            ASSERT_TRUE(x.valid_days_.is_subset_of(allowed)) << "seed " << seed;
          }
        }
      }
    }
  }
}

TEST(reduce, reduced_is_subset_of_full) {
  for (auto seed = 1U; seed <= 60U; ++seed) {
    auto const tt = test::small_instance(seed);
    auto const pre = preprocess(tt);
    auto const full = expand(pre.full_);
    auto const reduced = expand(pre.reduced_);
    ASSERT_TRUE(std::includes(begin(full), end(full), begin(reduced), end(reduced)))
        << "seed " << seed;
    ASSERT_LE(pre.reduced_.size(), pre.full_.size());
    ASSERT_TRUE(pre.reduced_.reduced_);
    ASSERT_FALSE(pre.full_.reduced_);
  }
}

TEST(reduce, periodic_instances_shrink) {
  for (auto seed = 1U; seed <= 5U; ++seed) {
    auto const tt = gen_synthetic(synthetic_params{.seed_ = seed,
                                                   .n_stops_ = 40U,
                                                   .n_routes_ = 10U,
                                                   .trips_per_route_ = 4U,
                                                   .horizon_days_ = 14U,
                                                   .footpath_density_ = 0.05,
                                                   .activity_ = {}});
    auto const pre = preprocess(tt);
    EXPECT_LT(pre.reduced_.size(), pre.full_.size()) << "seed " << seed;
    EXPECT_LT(pre.reduced_.n_day_instances(), pre.full_.n_day_instances());
  }
}

TEST(reduce, query_results_equal_with_full_set) {
  auto const tt = gen_synthetic(synthetic_params{.seed_ = 30U,
                                                 .n_stops_ = 30U,
                                                 .n_routes_ = 8U,
                                                 .trips_per_route_ = 4U,
                                                 .horizon_days_ = 7U,
                                                 .footpath_density_ = 0.05,
                                                 .activity_ = activity_pattern::parse("random:0.7")});
  auto const pre = preprocess(tt);
  auto rng = std::mt19937_64{30U};
  for (auto k = 0U; k != 500U; ++k) {
    auto const src = test::random_stop(tt, rng);
    auto const dst = test::random_stop(tt, rng);
    auto const q = test::random_day(tt, rng);
    auto const h = test::widened_horizon(tt, q);
    ASSERT_EQ(front_with(tt, pre.full_, src, dst, q, h),
              front_with(tt, pre.reduced_, src, dst, q, h))
        << "src=" << src.v_ << " dst=" << dst.v_ << " q=" << q;
  }
}

TEST(preprocess, deterministic_across_runs_and_workers) {
  for (auto seed = 1U; seed <= 10U; ++seed) {
    auto const tt = test::small_instance(seed);
    auto const a = preprocess(tt, preprocess_options{.max_day_shift_ = 2U, .workers_ = 1U});
    auto const b = preprocess(tt, preprocess_options{.max_day_shift_ = 2U, .workers_ = 4U});
    EXPECT_EQ(serialize(a.full_), serialize(b.full_));
    EXPECT_EQ(serialize(a.reduced_), serialize(b.reduced_));
    EXPECT_EQ(serialize(a.reduced_), serialize(preprocess(tt).reduced_));
  }
}

TEST(transfer_set, serialization_round_trip) {
  for (auto seed = 1U; seed <= 20U; ++seed) {
    auto const tt = test::small_instance(seed);
    auto const pre = preprocess(tt);
    for (auto const* ts : {&pre.full_, &pre.reduced_}) {
      auto const bytes = serialize(*ts);
      ASSERT_EQ(deserialize_transfer_set(bytes), *ts);
    }
  }
  auto const dir = test::temp_dir{"ts"};
  auto const pre = preprocess(test::small_instance(5U));
  auto const path = (dir / "reduced.tbts").string();
  save_transfer_set(pre.reduced_, path);
  EXPECT_EQ(load_transfer_set(path), pre.reduced_);
}

TEST(transfer_set, header_layout_and_corruption) {
  auto const tt = test::make_timetable(
      3U, 1U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1"),
       make_trip("u", {{1, 0, 160}, {2, 300, 300}}, "1")});
  auto const bytes = serialize(preprocess(tt).reduced_);
  ASSERT_GE(bytes.size(), 17U);
  EXPECT_EQ(bytes.substr(0U, 4U), "TBTS");
  EXPECT_EQ(bytes[4], 1);  // version, little-endian
  EXPECT_EQ(bytes[8], 1);  // reduced
  EXPECT_EQ(bytes[9], 1);  // horizon days

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(deserialize_transfer_set(bad_magic), invalid_data);
  EXPECT_THROW(deserialize_transfer_set(bytes.substr(0U, bytes.size() - 1U)), invalid_data);
  EXPECT_THROW(deserialize_transfer_set(bytes + "x"), invalid_data);
}
