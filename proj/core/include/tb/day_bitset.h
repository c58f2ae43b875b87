#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "boost/dynamic_bitset.hpp"

#include "tb/types.h"

namespace tb {

// Fixed-length set of days over the timetable horizon. Bit i is day i.
class day_bitset {
public:
  using block_t = std::uint64_t;

  day_bitset() = default;
  explicit day_bitset(std::size_t const n_days) : bits_(n_days) {}

  // '0'/'1' characters, day 0 first
  static day_bitset from_string(std::string_view);
  static day_bitset from_blocks(std::size_t n_days,
                                std::vector<block_t> const& blocks);
  static day_bitset all(std::size_t n_days);

  std::string to_string() const;
  std::vector<block_t> blocks() const;

  std::size_t size() const { return bits_.size(); }
  bool test(std::size_t const d) const { return bits_.test(d); }
  bool operator[](std::size_t const d) const { return bits_.test(d); }

  day_bitset& set(std::size_t const d, bool const v = true) {
    bits_.set(d, v);
    return *this;
  }
  day_bitset& reset(std::size_t const d) {
    bits_.reset(d);
    return *this;
  }

  bool any() const { return bits_.any(); }
  bool none() const { return bits_.none(); }
  std::size_t count() const { return bits_.count(); }
  bool is_subset_of(day_bitset const& o) const {
    return bits_.is_subset_of(o.bits_);
  }
  bool intersects(day_bitset const& o) const {
    return bits_.intersects(o.bits_);
  }

  // result[d] = this[d + k]; days shifted past the end are dropped
  day_bitset shifted_down(std::size_t k) const;
  // result[d] = this[d - k]
  day_bitset shifted_up(std::size_t k) const;

  // npos when empty / exhausted
  std::size_t find_first() const { return bits_.find_first(); }
  std::size_t find_next(std::size_t const d) const {
    return bits_.find_next(d);
  }
  static constexpr std::size_t npos =
      boost::dynamic_bitset<block_t>::npos;

  template <typename Fn>
  void for_each_day(Fn&& fn) const {
    for (auto d = bits_.find_first(); d != npos; d = bits_.find_next(d)) {
      fn(static_cast<day_idx_t>(d));
    }
  }

  day_bitset& operator&=(day_bitset const& o) {
    bits_ &= o.bits_;
    return *this;
  }
  day_bitset& operator|=(day_bitset const& o) {
    bits_ |= o.bits_;
    return *this;
  }
  day_bitset& operator-=(day_bitset const& o) {
    bits_ -= o.bits_;
    return *this;
  }
  friend day_bitset operator&(day_bitset a, day_bitset const& b) {
    return a &= b;
  }
  friend day_bitset operator|(day_bitset a, day_bitset const& b) {
    return a |= b;
  }
  friend day_bitset operator-(day_bitset a, day_bitset const& b) {
    return a -= b;
  }
  day_bitset operator~() const {
    auto r = *this;
    r.bits_.flip();
    return r;
  }

  friend bool operator==(day_bitset const&, day_bitset const&) = default;
  friend bool operator<(day_bitset const& a, day_bitset const& b) {
    return a.bits_ < b.bits_;
  }

private:
  boost::dynamic_bitset<block_t> bits_;
};

}  // namespace tb
