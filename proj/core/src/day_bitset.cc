#include "tb/day_bitset.h"

#include "fmt/core.h"

namespace tb {

day_bitset day_bitset::from_string(std::string_view const s) {
  auto b = day_bitset{s.size()};
  for (auto i = 0U; i != s.size(); ++i) {
    switch (s[i]) {
      case '0': break;
      case '1': b.bits_.set(i); break;
      default:
        throw invalid_data{
            fmt::format("day bitset: invalid character '{}' at {}", s[i], i)};
    }
  }
  return b;
}

day_bitset day_bitset::from_blocks(std::size_t const n_days,
                                   std::vector<block_t> const& blocks) {
  auto b = day_bitset{};
  b.bits_.append(begin(blocks), end(blocks));
  b.bits_.resize(n_days);
  return b;
}

day_bitset day_bitset::all(std::size_t const n_days) {
  auto b = day_bitset{n_days};
  b.bits_.set();
  return b;
}

std::string day_bitset::to_string() const {
  auto s = std::string(bits_.size(), '0');
  for_each_day([&](day_idx_t const d) { s[static_cast<std::size_t>(d)] = '1'; });
  return s;
}

std::vector<day_bitset::block_t> day_bitset::blocks() const {
  auto out = std::vector<block_t>(bits_.num_blocks());
  boost::to_block_range(bits_, out.begin());
  return out;
}

day_bitset day_bitset::shifted_down(std::size_t const k) const {
  auto r = *this;
  if (k >= size()) {
    r.bits_.reset();
  } else {
    r.bits_ >>= k;
  }
  return r;
}

day_bitset day_bitset::shifted_up(std::size_t const k) const {
  auto r = *this;
  if (k >= size()) {
    r.bits_.reset();
  } else {
    r.bits_ <<= k;
  }
  return r;
}

}  // namespace tb
