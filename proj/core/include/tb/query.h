#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "tb/day_view.h"
#include "tb/flat_timetable.h"
#include "tb/model.h"

namespace tb {

constexpr std::uint8_t kMaxTransfers = 15U;

struct query_options {
  std::uint8_t max_transfers_{kMaxTransfers};
};

struct trip_leg {
  friend bool operator==(trip_leg const&, trip_leg const&) = default;

  route_idx_t route_;
  std::uint32_t trip_{0U};
  day_idx_t day_{0};
  pos_t board_{0U};
  pos_t exit_{0U};
  abs_time_t dep_{0};
  abs_time_t arr_{0};
};

struct walk_leg {
  friend bool operator==(walk_leg const&, walk_leg const&) = default;

  stop_idx_t from_;
  stop_idx_t to_;
  seconds_t duration_{0};
};

using leg = std::variant<trip_leg, walk_leg>;

struct journey {
  friend bool operator==(journey const&, journey const&) = default;

  auto criteria() const { return std::tuple{dep_, arr_, transfers_}; }

  std::vector<leg> legs_;
  abs_time_t dep_{0};
  abs_time_t arr_{0};
  std::uint32_t transfers_{0U};
};

struct query_stats {
  std::uint64_t segments_{0U};
  std::uint64_t runs_{0U};
};

struct query_result {
  // (dep, arr, transfers) of every journey, sorted
  std::vector<std::tuple<abs_time_t, abs_time_t, std::uint32_t>> front() const;

  std::vector<journey> journeys_;
  // a transfer left out of the view could have improved the result
  bool truncated_{false};
  query_stats stats_;
};

// (dep, arr, n) dominates (dep', arr', n') under the profile order
bool dominates(journey const&, journey const&);

// Pareto filter keeping the first of equal (dep, arr, n) journeys; the result
// is sorted by (dep, arr, n)
std::vector<journey> pareto_filter(std::vector<journey>);

// Pareto set of (packed trip, stop index, transfers) per route.
class reached_set {
public:
  struct entry {
    friend bool operator==(entry const&, entry const&) = default;

    std::uint64_t key_;
    pos_t pos_;
    std::uint8_t n_;
  };

  explicit reached_set(std::size_t n_routes = 0U) : sets_(n_routes) {}

  void reset(std::size_t n_routes);

  // nullopt if dominated; otherwise inserts and returns the scan cap: the
  // smallest stop index among earlier entries with key' <= key and
  // n' <= n, or last_pos if there is none
  std::optional<pos_t> insert(std::uint32_t route, std::uint64_t key, pos_t pos,
                              std::uint8_t n, pos_t last_pos);

  std::vector<entry> const& entries(std::uint32_t const route) const {
    return sets_[route];
  }

  // no entry dominates another
  bool is_antichain() const;

private:
  std::vector<std::vector<entry>> sets_;
};

// Throws range_error unless the departure lies on the view's query day.
// source == destination yields one journey without legs.
query_result earliest_arrival_query(day_view const&, stop_idx_t source,
                                    stop_idx_t destination,
                                    abs_time_t departure,
                                    query_options const& = {});

// Journeys departing in [q * 86400, (q + 1) * 86400) for the view's query
// day q. Empty for source == destination.
query_result profile_query(day_view const&, stop_idx_t source,
                           stop_idx_t destination, query_options const& = {});

// The same queries on flattened trip instances; the window should cover the
// days [q - 1, q + H] of the full-structure query to compare against. The
// departure must lie inside the window.
query_result earliest_arrival_query(flat_timetable const&, stop_idx_t source,
                                    stop_idx_t destination,
                                    abs_time_t departure,
                                    query_options const& = {});

query_result profile_query(flat_timetable const&, stop_idx_t source,
                           stop_idx_t destination, day_idx_t query_day,
                           query_options const& = {});

// Flat window matching a day view's coverage, clipped to the horizon.
flat_timetable flatten_for_query(timetable const&, transfer_set const&,
                                 day_idx_t query_day, std::uint32_t horizon,
                                 std::shared_ptr<timetable_index const> = nullptr);

// Empty string if the journey is a valid chain of legs from source to
// destination under the timetable; otherwise a description of the problem.
std::string validate_journey(timetable const&, timetable_index const&,
                             journey const&, stop_idx_t source,
                             stop_idx_t destination);

// One JSON object per line.
std::string journey_to_json(timetable const&, journey const&);
void write_journeys_jsonl(std::ostream&, timetable const&,
                          std::vector<journey> const&);
// Human readable listing.
void write_journeys_text(std::ostream&, timetable const&,
                         std::vector<journey> const&);

}  // namespace tb
