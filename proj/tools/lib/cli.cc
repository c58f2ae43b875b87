#include "cli.h"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fmt/ostream.h"

#include "tb/canonical.h"
#include "tb/day_view.h"
#include "tb/preprocess.h"
#include "tb/query.h"
#include "tb/synthetic.h"
#include "tb/time_format.h"

#include "artifact.h"
#include "bench.h"
#include "update_sim.h"

namespace tb::tools {

namespace {

struct verification_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double millis(std::chrono::nanoseconds const d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

struct preprocess_args {
  std::string input_;
  std::string output_;
  std::string start_{"1970-01-01"};
  std::uint32_t days_{1U};
  seconds_t change_time_{0};
  seconds_t walk_time_{60};
  bool no_merge_{false};
  unsigned max_day_shift_{2U};
  unsigned workers_{0U};
  bool no_full_{false};
};

int cmd_preprocess(preprocess_args const& a, std::ostream& out, std::ostream& err) {
  auto const gtfs = gtfs_options{.start_ = parse_date(a.start_),
                                 .horizon_days_ = a.days_,
                                 .default_change_time_ = a.change_time_,
                                 .default_walk_time_ = a.walk_time_,
                                 .merge_days_ = !a.no_merge_};
  auto warnings = std::vector<std::string>{};
  auto const tt = load_input(a.input_, gtfs, &warnings);
  for (auto const& w : warnings) {
    fmt::print(err, "warning: {}\n", w);
  }
  auto const opt = preprocess_options{
      .max_day_shift_ = static_cast<std::uint8_t>(a.max_day_shift_), .workers_ = a.workers_};
  auto const r = preprocess(tt, opt);
  save_artifact(a.output_, tt, r.reduced_, a.no_full_ ? nullptr : &r.full_);

  auto const total = r.full_.size();
  auto const reduced = r.reduced_.size();
  fmt::print(out, "stops {}\nroutes {}\ntrips {}\ntrip_days {}\n", tt.n_stops(),
             tt.n_routes(), tt.n_trips(), tt.n_trip_days());
  fmt::print(out, "transfers_total {}\ntransfers_reduced {}\nratio {:.4f}\n", total,
             reduced,
             total == 0U ? 0.0 : static_cast<double>(reduced) / static_cast<double>(total));
  fmt::print(out, "compute_ms {:.3f}\nreduce_ms {:.3f}\n", millis(r.compute_time_),
             millis(r.reduce_time_));
  return kExitOk;
}

struct query_args {
  std::string artifact_;
  std::string source_;
  std::string destination_;
  std::string date_;
  std::string time_;
  std::string engine_{"full"};
  std::uint32_t horizon_{2U};
  unsigned max_transfers_{kMaxTransfers};
  bool json_{false};
};

int cmd_query(query_args const& a, bool const profile, std::ostream& out,
              std::ostream& err) {
  auto const art = load_artifact(a.artifact_);
  auto const& tt = art.tt_;
  auto const e = parse_engine(a.engine_);
  if (a.horizon_ == 0U) {
    throw range_error{"horizon must be at least 1"};
  }
  auto const q = parse_query_day(tt, a.date_);
  auto const src = tt.find_stop(a.source_);
  auto const dst = tt.find_stop(a.destination_);
  auto const opt =
      query_options{.max_transfers_ = static_cast<std::uint8_t>(a.max_transfers_)};

  auto result = query_result{};
  if (e == engine::kFull) {
    auto const view = day_view{tt, art.reduced_, q, a.horizon_};
    result = profile ? profile_query(view, src, dst, opt)
                     : earliest_arrival_query(view, src, dst,
                                              abs_time(q, parse_hms(a.time_)), opt);
  } else {
    auto const flat = flatten_for_query(tt, art.reduced_, q, a.horizon_);
    result = profile ? profile_query(flat, src, dst, q, opt)
                     : earliest_arrival_query(flat, src, dst,
                                              abs_time(q, parse_hms(a.time_)), opt);
  }
  if (result.truncated_) {
    fmt::print(err,
               "warning: journeys beyond the {}-day window may be missing; "
               "increase --horizon\n",
               a.horizon_);
  }
  if (a.json_) {
    write_journeys_jsonl(out, tt, result.journeys_);
  } else {
    write_journeys_text(out, tt, result.journeys_);
  }
  return kExitOk;
}

struct bench_args {
  std::string artifact_;
  std::size_t queries_{1000U};
  std::uint64_t seed_{1U};
  std::string engine_{"both"};
  std::uint32_t horizon_{2U};
  std::string out_;
};

int cmd_bench(bench_args const& a, std::ostream& out) {
  auto const art = load_artifact(a.artifact_);
  auto opt = bench_options{
      .n_queries_ = a.queries_, .seed_ = a.seed_, .engines_ = {}, .horizon_ = a.horizon_};
  if (a.engine_ == "both") {
    opt.engines_ = {engine::kFull, engine::kFlat};
  } else {
    opt.engines_ = {parse_engine(a.engine_)};
  }
  auto const report = run_bench(art.tt_, art.reduced_, opt);
  if (!a.out_.empty()) {
    auto f = std::ofstream{a.out_};
    if (!f) {
      throw invalid_data{fmt::format("{}: cannot open for writing", a.out_)};
    }
    write_bench_csv(f, report.records_);
  }
  write_bench_summary(out, report);
  return kExitOk;
}

struct update_args {
  std::string artifact_;
  std::string edits_;
  std::optional<std::size_t> random_;
  std::uint64_t seed_{1U};
  std::size_t batch_{1U};
  bool verify_{false};
  std::string out_;
  std::string save_;
};

int cmd_update_sim(update_args const& a, std::ostream& out, std::ostream& err) {
  auto art = load_artifact(a.artifact_);
  auto edits = std::vector<timetable_edit>{};
  if (!a.edits_.empty()) {
    auto f = std::ifstream{a.edits_};
    if (!f) {
      throw invalid_data{fmt::format("{}: cannot open", a.edits_)};
    }
    edits = read_edit_stream(f, art.tt_);
  }
  if (a.random_.has_value()) {
    auto random = random_delays(art.tt_, *a.random_, a.seed_);
    edits.insert(end(edits), begin(random), end(random));
  }

  auto const records = simulate_updates(art.tt_, art.reduced_, edits, a.batch_);
  if (!a.out_.empty()) {
    auto f = std::ofstream{a.out_};
    if (!f) {
      throw invalid_data{fmt::format("{}: cannot open for writing", a.out_)};
    }
    write_update_csv(f, records);
  }
  auto total = 0.0;
  auto recomputed = std::size_t{0U};
  for (auto const& r : records) {
    total += r.micros_;
    recomputed += r.trips_recomputed_;
  }
  fmt::print(out, "edits {}\nbatches {}\ntrips_recomputed {}\nupdate_ms {:.3f}\n",
             edits.size(), records.size(), recomputed, total / 1000.0);

  if (!a.save_.empty()) {
    save_artifact(a.save_, art.tt_, art.reduced_, nullptr);
  }
  if (a.verify_) {
    if (auto const diff = verify_against_rebuild(art.tt_, art.reduced_); !diff.empty()) {
      fmt::print(err, "verification failed: {}\n", diff);
      throw verification_failure{diff};
    }
    fmt::print(out, "verify ok\n");
  }
  return kExitOk;
}

struct generate_args {
  std::string output_;
  synthetic_params params_{};
  std::string activity_{"daily"};
};

int cmd_generate(generate_args a, std::ostream& out) {
  a.params_.activity_ = activity_pattern::parse(a.activity_);
  auto const tt = gen_synthetic(a.params_);
  save_canonical(tt, a.output_);
  fmt::print(out, "stops {}\nroutes {}\ntrips {}\ntrip_days {}\n", tt.n_stops(),
             tt.n_routes(), tt.n_trips(), tt.n_trip_days());
  return kExitOk;
}

}  // namespace

int run_cli(int const argc, char const* const* argv, std::ostream& out,
            std::ostream& err) {
  auto app = CLI::App{"Trip-based public transit routing over long horizons", "tbroute"};
  app.require_subcommand(1);

  auto pre = preprocess_args{};
  auto* pre_cmd = app.add_subcommand("preprocess", "Compute and reduce transfers");
  pre_cmd->add_option("input", pre.input_, "GTFS directory or canonical file")->required();
  pre_cmd->add_option("output", pre.output_, "Artifact directory")->required();
  pre_cmd->add_option("--start", pre.start_, "GTFS: first day of the horizon");
  pre_cmd->add_option("--days", pre.days_, "GTFS: horizon length in days")
      ->check(CLI::PositiveNumber);
  pre_cmd->add_option("--change-time", pre.change_time_,
                      "GTFS: change time of stops without one");
  pre_cmd->add_option("--walk-time", pre.walk_time_,
                      "GTFS: duration of footpaths without one");
  pre_cmd->add_flag("--no-merge", pre.no_merge_,
                    "GTFS: keep one trip per service day");
  pre_cmd->add_option("--max-day-shift", pre.max_day_shift_,
                      "Latest day a transfer may board, relative to the arrival day")
      ->check(CLI::Range(0U, 255U));
  pre_cmd->add_option("--workers", pre.workers_,
                      "Worker threads (0: $TB_WORKERS or all cores)");
  pre_cmd->add_flag("--no-full", pre.no_full_, "Do not store the unreduced transfers");

  auto qa = query_args{};
  auto const add_query_options = [&](CLI::App* cmd) {
    cmd->add_option("artifact", qa.artifact_, "Artifact directory")->required();
    cmd->add_option("source", qa.source_, "Source stop id")->required();
    cmd->add_option("destination", qa.destination_, "Destination stop id")->required();
    cmd->add_option("date", qa.date_, "YYYY-MM-DD or day number")->required();
    cmd->add_option("--engine", qa.engine_, "full or flat")
        ->check(CLI::IsMember({"full", "flat"}));
    cmd->add_option("--horizon", qa.horizon_, "Days after the query day to consider");
    cmd->add_option("--max-transfers", qa.max_transfers_)->check(CLI::Range(0U, 15U));
    cmd->add_flag("--json", qa.json_, "One JSON object per journey");
  };
  auto* query_cmd =
      app.add_subcommand("query", "Earliest arrival from a departure time");
  add_query_options(query_cmd);
  query_cmd->add_option("time", qa.time_, "Departure time HH:MM[:SS]")->required();
  auto* profile_cmd =
      app.add_subcommand("profile", "All Pareto-optimal journeys departing on a day");
  add_query_options(profile_cmd);

  auto ba = bench_args{};
  auto* bench_cmd = app.add_subcommand("bench", "Time random full-day profile queries");
  bench_cmd->add_option("artifact", ba.artifact_, "Artifact directory")->required();
  bench_cmd->add_option("-n,--queries", ba.queries_, "Number of queries");
  bench_cmd->add_option("--seed", ba.seed_);
  bench_cmd->add_option("--engine", ba.engine_, "full, flat or both")
      ->check(CLI::IsMember({"full", "flat", "both"}));
  bench_cmd->add_option("--horizon", ba.horizon_)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", ba.out_, "Per-query CSV");

  auto ua = update_args{};
  auto* update_cmd =
      app.add_subcommand("update-sim", "Apply timetable edits incrementally");
  update_cmd->add_option("artifact", ua.artifact_, "Artifact directory")->required();
  update_cmd->add_option("--edits", ua.edits_, "Edit stream (JSON lines)");
  update_cmd->add_option("--random", ua.random_, "Number of random delays");
  update_cmd->add_option("--seed", ua.seed_);
  update_cmd->add_option("--batch", ua.batch_, "Edits per batch")
      ->check(CLI::PositiveNumber);
  update_cmd->add_flag("--verify", ua.verify_, "Compare with fresh preprocessing");
  update_cmd->add_option("--out", ua.out_, "Per-batch CSV");
  update_cmd->add_option("--save", ua.save_, "Write the updated artifact here");

  auto ga = generate_args{};
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic timetable");
  gen_cmd->add_option("output", ga.output_, "Canonical timetable file")->required();
  gen_cmd->add_option("--seed", ga.params_.seed_);
  gen_cmd->add_option("--stops", ga.params_.n_stops_);
  gen_cmd->add_option("--routes", ga.params_.n_routes_);
  gen_cmd->add_option("--trips", ga.params_.trips_per_route_, "Trips per route and day");
  gen_cmd->add_option("--days", ga.params_.horizon_days_)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--footpath-density", ga.params_.footpath_density_);
  gen_cmd->add_option("--activity", ga.activity_, "daily, weekday or random:<p>");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    auto const code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*pre_cmd) {
      return cmd_preprocess(pre, out, err);
    }
    if (*query_cmd) {
      return cmd_query(qa, false, out, err);
    }
    if (*profile_cmd) {
      return cmd_query(qa, true, out, err);
    }
    if (*bench_cmd) {
      return cmd_bench(ba, out);
    }
    if (*update_cmd) {
      return cmd_update_sim(ua, out, err);
    }
    return cmd_generate(ga, out);
  } catch (verification_failure const&) {
    return kExitVerification;
  } catch (range_error const& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (std::exception const& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitData;
  }
}

}  // namespace tb::tools
