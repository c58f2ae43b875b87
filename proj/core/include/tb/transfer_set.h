#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tb/day_bitset.h"
#include "tb/types.h"

namespace tb {

// A vehicle change from the owning trip (exit at from_stop_) to
// to_route_/to_trip_ (board at to_stop_) on the day day_shift_ days after
// the source trip's service day. valid_days_ is indexed by the source day.
struct transfer {
  friend bool operator==(transfer const&, transfer const&) = default;

  auto key() const {
    return std::tuple{from_stop_, to_route_, day_shift_, to_trip_, to_stop_};
  }

  pos_t from_stop_{0U};
  route_idx_t to_route_;
  std::uint32_t to_trip_{0U};
  pos_t to_stop_{0U};
  std::uint8_t day_shift_{0U};
  day_bitset valid_days_;
};

// Outgoing transfers per trip, sorted by transfer::key().
struct transfer_set {
  friend bool operator==(transfer_set const&, transfer_set const&) = default;

  using row_t = std::vector<transfer>;

  std::span<transfer const> row(route_idx_t const r,
                                std::uint32_t const trip) const {
    return rows_[r.v_][trip];
  }

  // number of transfer records
  std::size_t size() const;
  // number of (transfer, valid day) pairs
  std::size_t n_day_instances() const;

  bool reduced_{false};
  std::uint32_t horizon_days_{1U};
  std::vector<std::vector<row_t>> rows_;
};

// Binary layout, little-endian:
//   "TBTS" u32 version=1 u8 reduced u32 horizon_days u32 n_routes
//   per route: u32 n_trips
//     per trip: u32 n_transfers
//       per transfer: u32 from_stop u32 to_route u32 to_trip u32 to_stop
//                     u8 day_shift u64[ceil(horizon_days / 64)] valid_days
void write_transfer_set(std::ostream&, transfer_set const&);
transfer_set read_transfer_set(std::istream&);

std::string serialize(transfer_set const&);
transfer_set deserialize_transfer_set(std::string const&);

void save_transfer_set(transfer_set const&, std::string const& path);
transfer_set load_transfer_set(std::string const& path);

}  // namespace tb
