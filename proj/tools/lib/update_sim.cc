#include "update_sim.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <set>

#include "fmt/ostream.h"
#include "nlohmann/json.hpp"

#include "tb/preprocess.h"

namespace tb::tools {

using nlohmann::json;

namespace {

timetable_edit parse_edit(json const& j, timetable const& tt) {
  auto const op = j.at("op").get<std::string>();
  auto const days = [&](json const& d) {
    auto const b = day_bitset::from_string(d.get<std::string>());
    if (b.size() != tt.horizon_days_) {
      throw invalid_data{fmt::format("days has length {}, expected {}", b.size(),
                                     tt.horizon_days_)};
    }
    return b;
  };
  if (op == "delay") {
    return delay_edit{.trip_ = j.at("trip").get<std::string>(),
                      .day_ = j.at("day").get<day_idx_t>(),
                      .delta_ = j.at("delta").get<std::vector<seconds_t>>()};
  }
  if (op == "remove") {
    return remove_edit{.trip_ = j.at("trip").get<std::string>(),
                       .days_ = days(j.at("days"))};
  }
  if (op == "add") {
    auto t = trip{.id_ = j.at("id").get<std::string>(),
                  .stops_ = {},
                  .arr_ = j.at("arr").get<std::vector<rel_time_t>>(),
                  .dep_ = j.at("dep").get<std::vector<rel_time_t>>(),
                  .active_days_ = days(j.at("days"))};
    for (auto const& s : j.at("stops")) {
      t.stops_.push_back(tt.find_stop(s.get<std::string>()));
    }
    return add_edit{.trip_ = std::move(t)};
  }
  throw invalid_data{fmt::format("unknown op '{}'", op)};
}

}  // namespace

std::vector<timetable_edit> read_edit_stream(std::istream& in, timetable const& tt) {
  auto edits = std::vector<timetable_edit>{};
  auto line = std::string{};
  for (auto line_no = 1U; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      edits.push_back(parse_edit(json::parse(line), tt));
    } catch (json::exception const& e) {
      throw invalid_data{fmt::format("edit stream:{}: {}", line_no, e.what())};
    } catch (invalid_data const& e) {
      throw invalid_data{fmt::format("edit stream:{}: {}", line_no, e.what())};
    } catch (lookup_error const& e) {
      throw invalid_data{fmt::format("edit stream:{}: {}", line_no, e.what())};
    }
  }
  return edits;
}

std::vector<timetable_edit> random_delays(timetable const& tt, std::size_t const n,
                                          std::uint64_t const seed) {
  auto trips = std::vector<trip const*>{};
  auto n_instances = std::size_t{0U};
  for (auto const& r : tt.routes_) {
    for (auto const& t : r.trips_) {
      trips.push_back(&t);
      n_instances += t.active_days_.count();
    }
  }
  if (n > n_instances) {
    throw invalid_data{
        fmt::format("{} delays requested but only {} trip instances", n, n_instances)};
  }

  auto rng = std::mt19937_64{seed};
  auto used = std::set<std::pair<trip const*, day_idx_t>>{};
  auto edits = std::vector<timetable_edit>{};
  while (edits.size() != n) {
    auto const* t = trips[std::uniform_int_distribution<std::size_t>{
        0U, trips.size() - 1U}(rng)];
    auto days = std::vector<day_idx_t>{};
    t->active_days_.for_each_day([&](day_idx_t const d) {
      if (!used.contains({t, d})) {
        days.push_back(d);
      }
    });
    if (days.empty()) {
      continue;
    }
    auto const day =
        days[std::uniform_int_distribution<std::size_t>{0U, days.size() - 1U}(rng)];
    auto const delay = 60 * std::uniform_int_distribution<seconds_t>{1, 30}(rng);
    used.emplace(t, day);
    edits.push_back(delay_edit{.trip_ = t->id_, .day_ = day, .delta_ = {delay}});
  }
  return edits;
}

std::vector<update_record> simulate_updates(timetable& tt, transfer_set& ts,
                                            std::vector<timetable_edit> const& edits,
                                            std::size_t const batch_size) {
  auto records = std::vector<update_record>{};
  auto const k = std::max(std::size_t{1U}, batch_size);
  for (auto first = std::size_t{0U}; first < edits.size(); first += k) {
    auto const last = std::min(edits.size(), first + k);
    auto const stats = apply_batch(
        tt, ts, std::span{edits}.subspan(first, last - first));
    records.push_back(update_record{
        .batch_ = records.size(),
        .edits_ = stats.edits_,
        .trips_recomputed_ = stats.trips_recomputed_,
        .micros_ = std::chrono::duration<double, std::micro>(stats.time_).count()});
  }
  return records;
}

void write_update_csv(std::ostream& out, std::vector<update_record> const& records) {
  out << "#schema=update/1\nbatch,edits,trips_recomputed,micros\n";
  for (auto const& r : records) {
    fmt::print(out, "{},{},{},{:.3f}\n", r.batch_, r.edits_, r.trips_recomputed_,
               r.micros_);
  }
}

std::string verify_against_rebuild(timetable const& tt, transfer_set const& ts) {
  auto const fresh = preprocess(tt).reduced_;
  if (serialize(ts) == serialize(fresh)) {
    return {};
  }
  if (ts.rows_.size() != fresh.rows_.size()) {
    return fmt::format("route count differs: incremental {}, rebuild {}",
                       ts.rows_.size(), fresh.rows_.size());
  }
  auto n_rows = std::size_t{0U};
  auto first = std::string{};
  for (auto r = 0U; r != ts.rows_.size(); ++r) {
    for (auto i = 0U; i != std::max(ts.rows_[r].size(), fresh.rows_[r].size()); ++i) {
      auto const a = i < ts.rows_[r].size() ? ts.rows_[r][i] : transfer_set::row_t{};
      auto const b =
          i < fresh.rows_[r].size() ? fresh.rows_[r][i] : transfer_set::row_t{};
      if (a != b) {
        if (n_rows++ == 0U) {
          first = i < tt.routes_[r].trips_.size() ? tt.routes_[r].trips_[i].id_
                                                  : fmt::format("route {} #{}", r, i);
          first += fmt::format(" ({} vs {} transfers)", a.size(), b.size());
        }
      }
    }
  }
  return fmt::format(
      "{} trip rows differ from rebuild ({} vs {} transfers in total), first: {}",
      n_rows, ts.size(), fresh.size(), first);
}

}  // namespace tb::tools
