#include "bench.h"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>

#include "fmt/ostream.h"

#include "tb/day_view.h"
#include "tb/query.h"

namespace tb::tools {

namespace {

using clock = std::chrono::steady_clock;

template <typename Prepare, typename Run>
bench_summary run_engine(std::vector<bench_query> const& queries, engine const e,
                         std::vector<bench_record>& out, Prepare&& prepare,
                         Run&& run) {
  auto summary = bench_summary{.engine_ = e, .queries_ = queries.size()};
  auto times = std::vector<double>{};
  for (auto const& q : queries) {
    auto const prep_start = clock::now();
    auto const& structure = prepare(q.day_);
    summary.preparation_ += clock::now() - prep_start;

    auto const start = clock::now();
    auto const result = run(structure, q);
    auto const micros =
        std::chrono::duration<double, std::micro>(clock::now() - start).count();

    auto const success = !result.journeys_.empty();
    out.push_back(bench_record{.query_ = q,
                               .micros_ = micros,
                               .journeys_ = result.journeys_.size(),
                               .engine_ = e,
                               .success_ = success});
    if (success) {
      times.push_back(micros);
    }
  }
  std::sort(begin(times), end(times));
  summary.successful_ = times.size();
  if (!times.empty()) {
    summary.q1_ = quantile(times, 0.25);
    summary.median_ = quantile(times, 0.5);
    summary.q3_ = quantile(times, 0.75);
    summary.mean_ = std::accumulate(begin(times), end(times), 0.0) /
                    static_cast<double>(times.size());
  }
  return summary;
}

}  // namespace

std::string_view to_string(engine const e) {
  return e == engine::kFull ? "full" : "flat";
}

engine parse_engine(std::string_view const s) {
  if (s == "full") {
    return engine::kFull;
  }
  if (s == "flat") {
    return engine::kFlat;
  }
  throw invalid_data{fmt::format("unknown engine '{}'", s)};
}

std::vector<bench_query> sample_queries(timetable const& tt, std::size_t const n,
                                        std::uint64_t const seed) {
  auto queries = std::vector<bench_query>{};
  if (tt.n_stops() == 0U) {
    return queries;
  }
  auto rng = std::mt19937_64{seed};
  auto stop = std::uniform_int_distribution<std::uint32_t>{
      0U, static_cast<std::uint32_t>(tt.n_stops() - 1U)};
  auto day = std::uniform_int_distribution<day_idx_t>{
      0, static_cast<day_idx_t>(tt.horizon_days_) - 1};
  queries.reserve(n);
  for (auto i = 0U; i != n; ++i) {
    auto const src = stop(rng);
    auto const dst = stop(rng);
    queries.push_back(bench_query{.id_ = i,
                                  .source_ = stop_idx_t{src},
                                  .destination_ = stop_idx_t{dst},
                                  .day_ = day(rng)});
  }
  return queries;
}

bench_report run_bench(timetable const& tt, transfer_set const& ts,
                       bench_options const& opt) {
  auto report = bench_report{};
  auto const queries = sample_queries(tt, opt.n_queries_, opt.seed_);
  auto const index = std::make_shared<timetable_index const>(tt);
  for (auto const e : opt.engines_) {
    if (e == engine::kFull) {
      auto views = std::map<day_idx_t, std::unique_ptr<day_view const>>{};
      report.summaries_.push_back(run_engine(
          queries, e, report.records_,
          [&](day_idx_t const q) -> day_view const& {
            auto& v = views[q];
            if (v == nullptr) {
              v = std::make_unique<day_view const>(tt, ts, q, opt.horizon_, index);
            }
            return *v;
          },
          [&](day_view const& v, bench_query const& q) {
            return profile_query(v, q.source_, q.destination_);
          }));
    } else {
      auto windows = std::map<day_idx_t, std::unique_ptr<flat_timetable const>>{};
      report.summaries_.push_back(run_engine(
          queries, e, report.records_,
          [&](day_idx_t const q) -> flat_timetable const& {
            auto& w = windows[q];
            if (w == nullptr) {
              w = std::make_unique<flat_timetable const>(
                  flatten_for_query(tt, ts, q, opt.horizon_, index));
            }
            return *w;
          },
          [&](flat_timetable const& w, bench_query const& q) {
            return profile_query(w, q.source_, q.destination_, q.day_);
          }));
    }
  }
  return report;
}

double quantile(std::vector<double> const& sorted, double const q) {
  if (sorted.empty()) {
    return 0.0;
  }
  auto const pos = q * static_cast<double>(sorted.size() - 1U);
  auto const lo = static_cast<std::size_t>(pos);
  auto const hi = std::min(lo + 1U, sorted.size() - 1U);
  auto const frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

void write_bench_csv(std::ostream& out, std::vector<bench_record> const& records) {
  out << "#schema=bench/1\n"
         "query,source,destination,day,micros,journeys,engine,success\n";
  for (auto const& r : records) {
    fmt::print(out, "{},{},{},{},{:.3f},{},{},{}\n", r.query_.id_, r.query_.source_.v_,
               r.query_.destination_.v_, r.query_.day_, r.micros_, r.journeys_,
               to_string(r.engine_), r.success_ ? 1 : 0);
  }
}

void write_bench_summary(std::ostream& out, bench_report const& report) {
  for (auto const& s : report.summaries_) {
    fmt::print(out,
               "engine {}: {} queries, {} successful, q1 {:.1f} us, median {:.1f} us, "
               "q3 {:.1f} us, mean {:.1f} us, preparation {:.1f} ms\n",
               to_string(s.engine_), s.queries_, s.successful_, s.q1_, s.median_,
               s.q3_, s.mean_,
               std::chrono::duration<double, std::milli>(s.preparation_).count());
  }
  auto const find = [&](engine const e) {
    return std::find_if(begin(report.summaries_), end(report.summaries_),
                        [&](bench_summary const& s) { return s.engine_ == e; });
  };
  auto const full = find(engine::kFull);
  auto const flat = find(engine::kFlat);
  if (full != end(report.summaries_) && flat != end(report.summaries_) &&
      flat->median_ > 0.0) {
    fmt::print(out, "median ratio full/flat: {:.2f}\n", full->median_ / flat->median_);
  }
}

}  // namespace tb::tools
