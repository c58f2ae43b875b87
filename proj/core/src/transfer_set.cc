#include "tb/transfer_set.h"

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fmt/core.h"

namespace tb {

namespace {

constexpr auto kMagic = std::array<char, 4>{'T', 'B', 'T', 'S'};
constexpr std::uint32_t kVersion = 1U;

template <typename T>
void put(std::ostream& out, T v) {
  std::array<char, sizeof(T)> buf{};
  for (auto i = 0U; i != sizeof(T); ++i) {
    buf[i] = static_cast<char>(static_cast<std::uint64_t>(v) >> (8U * i));
  }
  out.write(buf.data(), buf.size());
}

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!in) {
    throw invalid_data{"transfer set: unexpected end of input"};
  }
  auto v = std::uint64_t{0U};
  for (auto i = 0U; i != sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(buf[i]) << (8U * i);
  }
  return static_cast<T>(v);
}

transfer_set read_whole(std::istream& in) {
  auto ts = read_transfer_set(in);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw invalid_data{"transfer set: trailing data"};
  }
  return ts;
}

}  // namespace

std::size_t transfer_set::size() const {
  auto n = std::size_t{0U};
  for (auto const& route : rows_) {
    for (auto const& row : route) {
      n += row.size();
    }
  }
  return n;
}

std::size_t transfer_set::n_day_instances() const {
  auto n = std::size_t{0U};
  for (auto const& route : rows_) {
    for (auto const& row : route) {
      for (auto const& t : row) {
        n += t.valid_days_.count();
      }
    }
  }
  return n;
}

void write_transfer_set(std::ostream& out, transfer_set const& ts) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, ts.reduced_ ? 1U : 0U);
  put<std::uint32_t>(out, ts.horizon_days_);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ts.rows_.size()));
  for (auto const& route : ts.rows_) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(route.size()));
    for (auto const& row : route) {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(row.size()));
      for (auto const& t : row) {
        put<std::uint32_t>(out, t.from_stop_);
        put<std::uint32_t>(out, t.to_route_.v_);
        put<std::uint32_t>(out, t.to_trip_);
        put<std::uint32_t>(out, t.to_stop_);
        put<std::uint8_t>(out, t.day_shift_);
        for (auto const b : t.valid_days_.blocks()) {
          put<std::uint64_t>(out, b);
        }
      }
    }
  }
}

transfer_set read_transfer_set(std::istream& in) {
  auto magic = std::array<char, 4>{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    throw invalid_data{"transfer set: bad magic"};
  }
  if (auto const v = get<std::uint32_t>(in); v != kVersion) {
    throw invalid_data{fmt::format("transfer set: unsupported version {}", v)};
  }
  auto ts = transfer_set{};
  ts.reduced_ = get<std::uint8_t>(in) != 0U;
  ts.horizon_days_ = get<std::uint32_t>(in);
  auto const n_blocks = (ts.horizon_days_ + 63U) / 64U;
  ts.rows_.resize(get<std::uint32_t>(in));
  auto blocks = std::vector<std::uint64_t>(n_blocks);
  for (auto& route : ts.rows_) {
    route.resize(get<std::uint32_t>(in));
    for (auto& row : route) {
      row.resize(get<std::uint32_t>(in));
      for (auto& t : row) {
        t.from_stop_ = get<std::uint32_t>(in);
        t.to_route_ = route_idx_t{get<std::uint32_t>(in)};
        t.to_trip_ = get<std::uint32_t>(in);
        t.to_stop_ = get<std::uint32_t>(in);
        t.day_shift_ = get<std::uint8_t>(in);
        for (auto& b : blocks) {
          b = get<std::uint64_t>(in);
        }
        t.valid_days_ = day_bitset::from_blocks(ts.horizon_days_, blocks);
      }
    }
  }
  return ts;
}

std::string serialize(transfer_set const& ts) {
  auto out = std::ostringstream{};
  write_transfer_set(out, ts);
  return std::move(out).str();
}

transfer_set deserialize_transfer_set(std::string const& bytes) {
  auto in = std::istringstream{bytes};
  return read_whole(in);
}

void save_transfer_set(transfer_set const& ts, std::string const& path) {
  auto out = std::ofstream{path, std::ios::binary};
  if (!out) {
    throw std::runtime_error{fmt::format("cannot write {}", path)};
  }
  write_transfer_set(out, ts);
}

transfer_set load_transfer_set(std::string const& path) {
  auto in = std::ifstream{path, std::ios::binary};
  if (!in) {
    throw invalid_data{fmt::format("cannot open {}", path)};
  }
  return read_whole(in);
}

}  // namespace tb
