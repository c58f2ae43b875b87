#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tb/model.h"
#include "tb/transfer_set.h"

namespace tb::tools {

enum class engine : std::uint8_t { kFull, kFlat };

std::string_view to_string(engine);
engine parse_engine(std::string_view);

struct bench_query {
  std::uint32_t id_{0U};
  stop_idx_t source_;
  stop_idx_t destination_;
  day_idx_t day_{0};
};

// Source, destination and day drawn uniformly at random; deterministic for a
// fixed seed.
std::vector<bench_query> sample_queries(timetable const&, std::size_t n,
                                        std::uint64_t seed);

struct bench_record {
  bench_query query_;
  double micros_{0.0};
  std::size_t journeys_{0U};
  engine engine_{engine::kFull};
  bool success_{false};
};

struct bench_summary {
  engine engine_{engine::kFull};
  std::size_t queries_{0U};
  std::size_t successful_{0U};
  // over successful queries, microseconds
  double q1_{0.0};
  double median_{0.0};
  double q3_{0.0};
  double mean_{0.0};
  // one-time preparation of the per-day structures, not part of query times
  std::chrono::nanoseconds preparation_{};
};

struct bench_options {
  std::size_t n_queries_{1000U};
  std::uint64_t seed_{1U};
  std::vector<engine> engines_{engine::kFull, engine::kFlat};
  std::uint32_t horizon_{2U};
};

struct bench_report {
  std::vector<bench_record> records_;
  std::vector<bench_summary> summaries_;
};

// Full-day profile queries run sequentially. The day view (full engine) or
// flattened window (flat engine) of each query day is built once before the
// first query of that day and excluded from the query time.
bench_report run_bench(timetable const&, transfer_set const&, bench_options const&);

// Linear interpolation between closest ranks; values must be sorted.
double quantile(std::vector<double> const& sorted, double q);

void write_bench_csv(std::ostream&, std::vector<bench_record> const&);
void write_bench_summary(std::ostream&, bench_report const&);

}  // namespace tb::tools
