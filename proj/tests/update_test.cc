#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "tb/preprocess.h"
#include "tb/query.h"
#include "tb/update.h"

#include "test_util.h"

using namespace tb;
using test::make_timetable;
using test::make_trip;
using test::matches_rebuild;

namespace {

struct state {
  explicit state(timetable tt) : tt_{std::move(tt)}, ts_{preprocess(tt_).reduced_} {}

  std::vector<transfer> row(std::string const& id) const {
    auto const [r, i] = tt_.find_trip(id);
    auto const x = ts_.row(r, i);
    return {begin(x), end(x)};
  }

  std::string target(transfer const& x) const {
    return tt_.routes_[x.to_route_.v_].trips_[x.to_trip_].id_;
  }

  timetable tt_;
  transfer_set ts_;
};

// t: A->B arriving 100; u1 and u2 leave B at 200 and 300 on the same route.
timetable retarget_network() {
  return make_timetable(
      3U, 2U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "11"),
       make_trip("u1", {{1, 200, 200}, {2, 400, 400}}, "11"),
       make_trip("u2", {{1, 300, 300}, {2, 500, 500}}, "11")});
}

std::vector<profile_front> sample_fronts(timetable const& tt, transfer_set const& ts,
                                         std::uint64_t const seed) {
  auto rng = std::mt19937_64{seed};
  auto fronts = std::vector<profile_front>{};
  for (auto i = 0U; i != 20U; ++i) {
    auto const src = test::random_stop(tt, rng);
    auto const dst = test::random_stop(tt, rng);
    auto const q = test::random_day(tt, rng);
    fronts.push_back(test::profile_vs_oracle(tt, ts, src, dst, q).result_.front());
  }
  return fronts;
}

}  // namespace

TEST(update, remove_only_trip_of_two_stop_network) {
  auto s = state{make_timetable(2U, 1U, {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1")})};
  remove_trip(s.tt_, s.ts_, "t", day_bitset::from_string("1"));
  EXPECT_EQ(s.ts_.size(), 0U);
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
  EXPECT_THROW(s.tt_.find_trip("t"), lookup_error);
}

TEST(update, removing_a_day_retargets_the_transfer) {
  auto s = state{retarget_network()};
  auto before = s.row("t");
  ASSERT_EQ(before.size(), 1U);
  EXPECT_EQ(s.target(before[0]), "u1");
  EXPECT_EQ(before[0].valid_days_.to_string(), "11");

  remove_trip(s.tt_, s.ts_, "u1", day_bitset::from_string("10"));
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
  auto after = s.row("t");
  ASSERT_EQ(after.size(), 2U);
  for (auto const& x : after) {
    EXPECT_EQ(x.day_shift_, 0U);
    EXPECT_EQ(x.valid_days_.to_string(), s.target(x) == "u1" ? "01" : "10");
  }
}

TEST(update, removing_an_untargeted_trip_keeps_other_rows) {
  auto const x = make_trip("x", {{3, 1000, 1000}, {4, 1100, 1100}}, "11");
  auto s = state{make_timetable(
      5U, 2U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "11"),
       make_trip("u1", {{1, 200, 200}, {2, 400, 400}}, "11"), x})};
  auto const t_before = s.row("t");
  auto const u_before = s.row("u1");
  auto const stats = remove_trip(s.tt_, s.ts_, "x", day_bitset::from_string("01"));
  EXPECT_EQ(s.row("t"), t_before);
  EXPECT_EQ(s.row("u1"), u_before);
  EXPECT_EQ(stats.trips_recomputed_, 1U);
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
}

TEST(update, add_to_empty_timetable) {
  auto s = state{make_timetable(2U, 1U, {})};
  add_trip(s.tt_, s.ts_, make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1"));
  ASSERT_EQ(s.tt_.routes_.size(), 1U);
  EXPECT_EQ(s.tt_.routes_[0].trips_.size(), 1U);
  EXPECT_EQ(s.ts_.size(), 0U);
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
}

TEST(update, add_earlier_connection) {
  auto s = state{make_timetable(
      3U, 1U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1"),
       make_trip("u", {{1, 500, 500}, {2, 900, 900}}, "1")})};
  ASSERT_EQ(s.target(s.row("t").at(0)), "u");
  add_trip(s.tt_, s.ts_, make_trip("u0", {{1, 200, 200}, {2, 600, 600}}, "1"));
  EXPECT_EQ(s.tt_.routes_.size(), 2U);
  auto const row = s.row("t");
  ASSERT_EQ(row.size(), 1U);
  EXPECT_EQ(s.target(row[0]), "u0");
  EXPECT_EQ(s.tt_.find_trip("u0").first, s.tt_.find_trip("u").first);
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
}

TEST(update, add_overtaking_trip_opens_new_route) {
  auto s = state{make_timetable(
      3U, 1U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1"),
       make_trip("slow", {{1, 150, 150}, {2, 1000, 1000}}, "1")})};
  auto const n_routes = s.tt_.routes_.size();
  add_trip(s.tt_, s.ts_, make_trip("fast", {{1, 200, 200}, {2, 300, 300}}, "1"));
  EXPECT_EQ(s.tt_.routes_.size(), n_routes + 1U);
  EXPECT_NE(s.tt_.find_trip("fast").first, s.tt_.find_trip("slow").first);
  EXPECT_TRUE(test::all_routes_ordered(s.tt_));
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
  auto targets = std::vector<std::string>{};
  for (auto const& x : s.row("t")) {
    targets.push_back(s.target(x));
  }
  EXPECT_EQ(targets.size(), 2U);
}

TEST(update, zero_delay_keeps_query_results) {
  for (auto seed = 1U; seed <= 10U; ++seed) {
    auto s = state{test::small_instance(seed)};
    auto const before = sample_fronts(s.tt_, s.ts_, seed);
    auto rng = std::mt19937_64{seed};
    auto e = test::random_delay(s.tt_, rng);
    delay_trip(s.tt_, s.ts_, e.trip_, e.day_, {0});
    EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
    EXPECT_EQ(sample_fronts(s.tt_, s.ts_, seed), before) << "seed " << seed;
  }
}

TEST(update, delay_past_slack_drops_that_days_transfer) {
  auto s = state{make_timetable(
      3U, 2U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "11"),
       make_trip("u", {{1, 150, 150}, {2, 400, 400}}, "11")})};
  ASSERT_EQ(s.row("t").at(0).valid_days_.to_string(), "11");
  delay_trip(s.tt_, s.ts_, "t", 0U, {100});
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));

  auto const orig = s.row("t");
  ASSERT_EQ(orig.size(), 1U);
  EXPECT_EQ(orig[0].valid_days_.to_string(), "01");
  EXPECT_EQ(s.tt_.routes_[s.tt_.find_trip("t#d0").first.v_]
                .trips_[s.tt_.find_trip("t#d0").second]
                .active_days_.to_string(),
            "10");
  for (auto const& x : s.row("t#d0")) {
    EXPECT_EQ(x.day_shift_, 1U);
  }
}

TEST(update, random_delays_match_rebuild) {
  for (auto seed = 1U; seed <= 8U; ++seed) {
    auto s = state{test::small_instance(seed)};
    auto rng = std::mt19937_64{seed + 100U};
    for (auto i = 0U; i != 12U; ++i) {
      auto const e = test::random_delay(s.tt_, rng);
      delay_trip(s.tt_, s.ts_, e.trip_, e.day_, e.delta_);
      ASSERT_TRUE(test::all_routes_ordered(s.tt_));
      ASSERT_TRUE(matches_rebuild(s.tt_, s.ts_)) << "seed " << seed << " step " << i;
    }
  }
}

TEST(update, per_stop_delay) {
  auto s = state{retarget_network()};
  delay_trip(s.tt_, s.ts_, "t", 1U, {0, 150});
  auto const [r, i] = s.tt_.find_trip("t#d1");
  EXPECT_EQ(s.tt_.routes_[r.v_].trips_[i].arr(1U), 250);
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
  ASSERT_EQ(s.row("t#d1").size(), 1U);
  EXPECT_EQ(s.target(s.row("t#d1")[0]), "u2");
}

TEST(update, batch_of_one_equals_single_edit) {
  for (auto seed = 1U; seed <= 5U; ++seed) {
    auto a = state{test::small_instance(seed)};
    auto b = a;
    auto rng = std::mt19937_64{seed};
    auto const e = test::random_delay(a.tt_, rng);
    delay_trip(a.tt_, a.ts_, e.trip_, e.day_, e.delta_);
    auto const batch = std::vector<timetable_edit>{e};
    apply_batch(b.tt_, b.ts_, batch);
    EXPECT_EQ(serialize(a.ts_), serialize(b.ts_));
    EXPECT_EQ(a.tt_.routes_.size(), b.tt_.routes_.size());
  }
}

TEST(update, neighbouring_delays_share_recomputation) {
  auto s = state{make_timetable(
      4U, 1U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "1"),
       make_trip("u1", {{1, 200, 200}, {2, 400, 400}}, "1"),
       make_trip("u2", {{1, 300, 300}, {2, 500, 500}}, "1"),
       make_trip("v", {{2, 600, 600}, {3, 700, 700}}, "1")})};
  auto single = std::size_t{0U};
  for (auto const* id : {"u1", "u2"}) {
    auto copy = s;
    single += delay_trip(copy.tt_, copy.ts_, id, 0U, {60}).trips_recomputed_;
  }
  auto const batch = std::vector<timetable_edit>{
      delay_edit{.trip_ = "u1", .day_ = 0U, .delta_ = {60}},
      delay_edit{.trip_ = "u2", .day_ = 0U, .delta_ = {60}}};
  auto const stats = apply_batch(s.tt_, s.ts_, batch);
  EXPECT_EQ(stats.edits_, 2U);
  EXPECT_LT(stats.trips_recomputed_, single);
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
}

TEST(update, random_batches_match_sequential_and_rebuild) {
  for (auto seed = 1U; seed <= 6U; ++seed) {
    auto batched = state{test::small_instance(seed)};
    auto sequential = batched;
    auto rng = std::mt19937_64{seed + 7U};
    auto edits = std::vector<timetable_edit>{};
    auto scratch = batched;
    for (auto i = 0U; i != 10U; ++i) {
      auto const e = test::random_delay(scratch.tt_, rng);
      edits.push_back(e);
      delay_trip(scratch.tt_, scratch.ts_, e.trip_, e.day_, e.delta_);
    }
    apply_batch(batched.tt_, batched.ts_, edits);
    for (auto const& e : edits) {
      auto const& d = std::get<delay_edit>(e);
      delay_trip(sequential.tt_, sequential.ts_, d.trip_, d.day_, d.delta_);
    }
    EXPECT_EQ(serialize(batched.ts_), serialize(sequential.ts_)) << "seed " << seed;
    EXPECT_TRUE(matches_rebuild(batched.tt_, batched.ts_)) << "seed " << seed;
  }
}

TEST(update, mixed_random_edits_match_rebuild) {
  for (auto seed = 1U; seed <= 6U; ++seed) {
    auto s = state{test::small_instance(seed)};
    auto rng = std::mt19937_64{seed + 31U};
    for (auto i = 0U; i != 8U; ++i) {
      auto ids = std::vector<trip const*>{};
      for (auto const& r : s.tt_.routes_) {
        for (auto const& t : r.trips_) {
          ids.push_back(&t);
        }
      }
      auto const& t = *ids[rng() % ids.size()];
      switch (rng() % 3U) {
        case 0U: {
          auto days = day_bitset{s.tt_.horizon_days_};
          t.active_days_.for_each_day([&](day_idx_t const d) {
            if (rng() % 2U == 0U) {
              days.set(d);
            }
          });
          remove_trip(s.tt_, s.ts_, std::string{t.id_}, days);
          break;
        }
        case 1U: {
          auto copy = t;
          copy.id_ = fmt::format("{}+{}", t.id_, i);
          auto const shift = 60 * static_cast<seconds_t>(rng() % 20U);
          for (auto k = 0U; k != copy.arr_.size(); ++k) {
            copy.arr_[k] += shift;
            copy.dep_[k] += shift;
          }
          add_trip(s.tt_, s.ts_, std::move(copy));
          break;
        }
        default: {
          auto const e = test::random_delay(s.tt_, rng);
          delay_trip(s.tt_, s.ts_, e.trip_, e.day_, e.delta_);
        }
      }
      ASSERT_TRUE(test::all_routes_ordered(s.tt_));
      ASSERT_TRUE(matches_rebuild(s.tt_, s.ts_)) << "seed " << seed << " step " << i;
    }
  }
}

TEST(update, failed_batch_changes_nothing) {
  auto s = state{retarget_network()};
  auto const tt_before = s.tt_;
  auto const ts_before = serialize(s.ts_);
  auto const batch = std::vector<timetable_edit>{
      delay_edit{.trip_ = "u1", .day_ = 0U, .delta_ = {60}},
      delay_edit{.trip_ = "nope", .day_ = 0U, .delta_ = {60}}};
  EXPECT_THROW(apply_batch(s.tt_, s.ts_, batch), lookup_error);
  EXPECT_EQ(serialize(s.ts_), ts_before);
  EXPECT_EQ(s.tt_.routes_.size(), tt_before.routes_.size());
  EXPECT_THROW(s.tt_.find_trip("u1#d0"), lookup_error);
}

TEST(update, invalid_edits_are_rejected) {
  auto s = state{make_timetable(
      3U, 2U,
      {make_trip("t", {{0, 0, 0}, {1, 100, 100}}, "10"),
       make_trip("u", {{1, 200, 200}, {2, 400, 400}}, "11")})};
  EXPECT_THROW(remove_trip(s.tt_, s.ts_, "t", day_bitset::from_string("01")), invalid_data);
  EXPECT_THROW(remove_trip(s.tt_, s.ts_, "t", day_bitset::from_string("1")), invalid_data);
  EXPECT_THROW(remove_trip(s.tt_, s.ts_, "x", day_bitset::from_string("10")), lookup_error);
  EXPECT_THROW(delay_trip(s.tt_, s.ts_, "x", 0U, {60}), lookup_error);
  EXPECT_THROW(delay_trip(s.tt_, s.ts_, "t", 0U, {-60}), invalid_data);
  EXPECT_THROW(delay_trip(s.tt_, s.ts_, "t", 0U, {60, 60, 60}), invalid_data);
  EXPECT_THROW(delay_trip(s.tt_, s.ts_, "t", 1U, {60}), invalid_data);
  EXPECT_THROW(add_trip(s.tt_, s.ts_, make_trip("u", {{0, 0, 0}, {2, 50, 50}}, "11")),
               invalid_data);
  EXPECT_TRUE(matches_rebuild(s.tt_, s.ts_));
}
