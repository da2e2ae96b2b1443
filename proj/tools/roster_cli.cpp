// Command-line front end: instance generation, solving, checking, the
// extension modes, the benchmark harness and the HTTP service.

#include <csignal>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "roster/bench.hpp"
#include "roster/extensions.hpp"
#include "roster/generator.hpp"
#include "roster/io.hpp"
#include "roster/service.hpp"

using namespace roster;
namespace fs = std::filesystem;

namespace {

constexpr int kExitError = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNoRoster = 4;

// Exceptions from reading a named file carry the file name.
struct FileError : std::runtime_error {
  FileError(const std::string& file, const InvalidInputError& e) : std::runtime_error(file + ": " + e.what()) {}
};

template <typename F>
auto from_file(const std::string& path, F&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const InvalidInputError& e) {
    throw FileError(path, e);
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InvalidInputError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct SolveOptions {
  double gap = 0.01;
  std::string mode = "hybrid";
  double time_limit = 300;
  double phase1 = 30;
  bool no_relax_fix = false;
  std::uint64_t seed = 1;
  std::string lambda, theta;
  double gamma = 1.0;
  double deviation_weight = 1.0;
  bool quiet = false;

  void add(CLI::App* app) {
    app->add_option("--gap", gap, "Target optimality gap as a fraction")->check(CLI::Range(1e-9, 1.0));
    app->add_option("--mode", mode, "hybrid or milp")->check(CLI::IsMember({"hybrid", "milp", "milp_alone"}));
    app->add_option("--time-limit", time_limit, "Total time limit in seconds")->check(CLI::PositiveNumber);
    app->add_option("--phase1", phase1, "Phase-1 time budget in seconds")->check(CLI::PositiveNumber);
    app->add_flag("--no-relax-fix", no_relax_fix, "Run phase 1 on the full model");
    app->add_option("--seed", seed, "Search seed");
    app->add_option("--lambda", lambda, "Comma-separated lambda_1..3");
    app->add_option("--theta", theta, "Comma-separated theta_1..3");
    app->add_option("--deviation-weight", deviation_weight, "Weight of the roster deviation term (reopt)");
    app->add_flag("-q,--quiet", quiet, "Do not print progress");
  }

  HybridConfig config() const {
    HybridConfig c;
    c.gap_target = gap;
    c.mode = *parse_solve_mode(mode);
    c.total_time_limit = time_limit;
    c.phase1_time_budget = std::min(phase1, time_limit);
    c.use_relax_and_fix = !no_relax_fix;
    c.seed = seed;
    c.validate();
    return c;
  }

  ObjectiveWeights weights() const {
    ObjectiveWeights w;
    const auto triple = [](const std::string& text, std::array<double, 3>& into, const char* name) {
      if (text.empty()) return;
      const auto v = split_numbers(text);
      if (v.size() != 3) throw InvalidInputError(std::string(name) + " needs three values");
      std::copy(v.begin(), v.end(), into.begin());
    };
    triple(lambda, w.lambda, "--lambda");
    triple(theta, w.theta, "--theta");
    w.gamma = gamma;
    w.deviation_weight = deviation_weight;
    if (!w.valid()) throw InvalidInputError("weights must lie in [0, 1]");
    return w;
  }

  ProgressSink sink(std::string* trace) const {
    return [this, trace](const ProgressEvent& ev) {
      if (trace) *trace += progress_line(ev);
      if (!quiet) {
        std::fprintf(stderr, "%8.2fs %-9s incumbent %-12.6g bound %-12.6g gap %s\n", ev.elapsed, to_string(ev.phase),
                     ev.incumbent, ev.bound, std::isfinite(ev.gap) ? (std::to_string(ev.gap * 100) + "%").c_str() : "-");
      }
    };
  }
};

int status_exit(const OptimizationResult& r) {
  if (r.status == OptimizationStatus::kInfeasible) return kExitInfeasible;
  return r.roster ? 0 : kExitNoRoster;
}

void print_summary(const OptimizationResult& r) {
  std::fprintf(stderr, "status %s, objective %.6g, bound %.6g, gap %.4f%%, %.2fs\n", to_string(r.status), r.objective,
               r.lower_bound, 100 * r.gap, r.timings.total);
  if (!r.message.empty()) std::fprintf(stderr, "%s\n", r.message.c_str());
}

std::atomic<bool> g_interrupted{false};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Employee rostering with a hybrid MILP and scatter search"};
  app.require_subcommand(1);
  std::signal(SIGINT, [](int) { g_interrupted = true; });

  // generate
  GeneratorConfig gen;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a random instance");
  generate->add_option("--employees", gen.employees)->check(CLI::PositiveNumber);
  generate->add_option("--weeks", gen.weeks)->check(CLI::PositiveNumber);
  generate->add_option("--shift-types", gen.shift_types)->check(CLI::Range(1, 3));
  generate->add_option("--preference-density", gen.preference_density)->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", gen_seed);
  generate->add_option("-o,--output", gen_out, "Output file (stdout when omitted)");

  // solve
  SolveOptions so;
  std::string solve_instance, solve_out, solve_trace, solve_result;
  auto* solve = app.add_subcommand("solve", "Optimize an instance");
  solve->add_option("instance", solve_instance)->required();
  so.add(solve);
  solve->add_option("-o,--output", solve_out, "Roster CSV (stdout when omitted)");
  solve->add_option("--trace", solve_trace, "Progress trace (NDJSON)");
  solve->add_option("--result", solve_result, "Result document (JSON)");

  // check
  std::string check_instance, check_roster;
  auto* check = app.add_subcommand("check", "Check a roster against the hard constraints");
  check->add_option("instance", check_instance)->required();
  check->add_option("roster", check_roster, "Roster CSV")->required();

  // reopt
  SolveOptions ro;
  std::string reopt_instance, reopt_roster, reopt_changes, reopt_out, reopt_result;
  auto* reopt = app.add_subcommand("reopt", "Re-optimize a roster after parameter changes");
  reopt->add_option("instance", reopt_instance)->required();
  reopt->add_option("roster", reopt_roster, "Current roster CSV")->required();
  reopt->add_option("changes", reopt_changes, "Change requests (JSON)")->required();
  ro.add(reopt);
  reopt->add_option("-o,--output", reopt_out, "New roster CSV (stdout when omitted)");
  reopt->add_option("--result", reopt_result, "Result document (JSON)");

  // rolling
  SolveOptions rlo;
  std::string rolling_instance, rolling_dir;
  int rolling_periods = 4;
  bool rolling_fixed = false;
  auto* rolling = app.add_subcommand("rolling", "Plan consecutive periods with adaptive targets");
  rolling->add_option("instance", rolling_instance)->required();
  rolling->add_option("--periods", rolling_periods)->check(CLI::PositiveNumber);
  rolling->add_flag("--non-adaptive", rolling_fixed, "Keep the per-period fair-share targets");
  rolling->add_option("--out-dir", rolling_dir, "Directory for per-period rosters and the summary");
  rlo.add(rolling);

  // patterns
  SolveOptions po;
  std::string pattern_instance, pattern_file, pattern_out, pattern_result;
  auto* patterns = app.add_subcommand("patterns", "Optimize towards a company work pattern");
  patterns->add_option("instance", pattern_instance)->required();
  patterns->add_option("pattern", pattern_file, "Pattern file: weeks x 7 labels M A N P OM -")->required();
  po.add(patterns);
  patterns->add_option("--gamma", po.gamma, "Weight of the employee terms against the pattern")->check(CLI::Range(0.0, 1.0));
  patterns->add_option("-o,--output", pattern_out, "Roster CSV (stdout when omitted)");
  patterns->add_option("--result", pattern_result, "Result document (JSON)");

  // bench
  BenchConfig bc;
  std::string bench_modes = "hybrid,milp", bench_gaps = "50,20,10,5,3,1", bench_dir, bench_verify;
  auto* bench = app.add_subcommand("bench", "Time to reach each optimality gap over seeded trials");
  bench->add_option("--trials", bc.trials)->check(CLI::PositiveNumber);
  bench->add_option("--modes", bench_modes, "Comma-separated modes");
  bench->add_option("--gaps", bench_gaps, "Comma-separated gap thresholds in percent");
  bench->add_option("--employees", bc.instance.employees)->check(CLI::PositiveNumber);
  bench->add_option("--weeks", bc.instance.weeks)->check(CLI::PositiveNumber);
  bench->add_option("--shift-types", bc.instance.shift_types)->check(CLI::Range(1, 3));
  bench->add_option("--time-limit", bc.time_limit, "Per-run limit in seconds")->check(CLI::PositiveNumber);
  bench->add_option("--phase1", bc.phase1_time_budget)->check(CLI::PositiveNumber);
  bench->add_option("--seed", bc.seed, "First instance seed");
  bench->add_option("--out-dir", bench_dir, "Directory for traces and report.json");
  bench->add_option("--verify", bench_verify, "Recompute the table of an earlier --out-dir from its traces");

  // export
  std::string export_source, export_instance, export_format = "csv", export_out;
  auto* exporter = app.add_subcommand("export", "Convert a stored result into a roster CSV, JSON or statistics");
  exporter->add_option("source", export_source, "Job directory or result JSON")->required();
  exporter->add_option("--instance", export_instance, "Instance file (defaults to the job's)");
  exporter->add_option("--format", export_format)->check(CLI::IsMember({"csv", "json", "stats"}));
  exporter->add_option("-o,--output", export_out);

  // serve
  ServiceOptions svc = ServiceOptions::from_env();
  std::string svc_dir = svc.data_dir.string();
  auto* serve = app.add_subcommand("serve", "Run the HTTP service (ROSTER_DATA_DIR, ROSTER_PORT, ROSTER_WORKERS)");
  serve->add_option("--data-dir", svc_dir);
  serve->add_option("--port", svc.port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", svc.host);
  serve->add_option("--workers", svc.workers)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitMalformed;
  }

  try {
    if (*generate) {
      emit(gen_out, write_instance(generate_instance(gen, gen_seed)));
      return 0;
    }

    if (*solve) {
      const RosterInstance in = from_file(solve_instance, read_instance);
      std::string trace;
      const OptimizationResult r = optimize(in, so.weights(), so.config(), so.sink(&trace), &g_interrupted);
      print_summary(r);
      if (!solve_trace.empty()) write_file(solve_trace, trace);
      if (!solve_result.empty()) write_file(solve_result, result_to_json(in, r).dump(1) + "\n");
      if (r.roster) emit(solve_out, write_roster_csv(in, *r.roster));
      return status_exit(r);
    }

    if (*check) {
      const RosterInstance in = from_file(check_instance, read_instance);
      const Roster x = from_file(check_roster, [&](const std::string& t) { return read_roster_csv(t, in); });
      const FeasibilityReport report = check_feasibility(in, x);
      for (const Violation& v : report.violations) {
        std::cout << to_string(v.constraint) << " employee=" << v.employee << " block=" << v.block << ": "
                  << v.description << '\n';
      }
      const ObjectiveBreakdown b = evaluate_objective(in, x, ObjectiveWeights{});
      std::cout << (report.feasible() ? "feasible" : "infeasible") << ", " << report.violations.size()
                << " violation(s), objective " << b.total << '\n';
      return report.feasible() ? 0 : kExitInfeasible;
    }

    if (*reopt) {
      const RosterInstance in = from_file(reopt_instance, read_instance);
      const Roster original = from_file(reopt_roster, [&](const std::string& t) { return read_roster_csv(t, in); });
      const auto changes = from_file(reopt_changes, [](const std::string& t) { return changes_from_json(parse_json(t)); });
      const EventResult ev =
          reoptimize_event(in, original, changes, ro.weights(), ro.config(), ro.sink(nullptr), &g_interrupted);
      print_summary(ev.result);
      std::fprintf(stderr, "deviation %d (locked through block %d)\n", ev.deviation, ev.lock_until);
      if (!reopt_result.empty()) {
        Json doc = result_to_json(ev.updated, ev.result);
        doc["deviation"] = ev.deviation;
        doc["lock_until"] = ev.lock_until;
        write_file(reopt_result, doc.dump(1) + "\n");
      }
      if (ev.result.roster) emit(reopt_out, write_roster_csv(ev.updated, *ev.result.roster));
      return status_exit(ev.result);
    }

    if (*rolling) {
      const RosterInstance in = from_file(rolling_instance, read_instance);
      const RollingPlan plan = plan_rolling_horizon(
          in, rolling_periods, rlo.weights(), rlo.config(), !rolling_fixed,
          [&](int, const ProgressEvent& ev) { rlo.sink(nullptr)(ev); }, &g_interrupted);
      if (!rolling_dir.empty()) fs::create_directories(rolling_dir);
      Json periods = Json::array();
      for (const PeriodPlan& p : plan.periods) {
        std::printf("period %d: %s objective %.6g gap %.4f%%\n", p.period, to_string(p.status), p.objective, 100 * p.gap);
        if (!rolling_dir.empty()) {
          write_file((fs::path(rolling_dir) / ("period-" + std::to_string(p.period) + ".csv")).string(),
                     write_roster_csv(p.instance, p.roster));
          write_file((fs::path(rolling_dir) / ("period-" + std::to_string(p.period) + ".json")).string(),
                     write_instance(p.instance));
        }
        periods.push_back({{"period", p.period}, {"objective", p.objective}, {"gap", p.gap}, {"status", to_string(p.status)}});
      }
      const auto weekend = plan.annual_weekend_workload();
      std::printf("weekend workload std across employees: %.4f\n", standard_deviation(weekend));
      if (!rolling_dir.empty()) {
        const Json summary{{"periods", periods},
                           {"annual_workload", plan.annual_workload()},
                           {"annual_weekend_workload", weekend},
                           {"weekend_workload_std", standard_deviation(weekend)},
                           {"complete", plan.complete()},
                           {"error", plan.error}};
        write_file((fs::path(rolling_dir) / "summary.json").string(), summary.dump(1) + "\n");
      }
      if (!plan.complete()) {
        std::fprintf(stderr, "%s\n", plan.error.c_str());
        return plan.error.find("infeasible") != std::string::npos ? kExitInfeasible : kExitNoRoster;
      }
      return 0;
    }

    if (*patterns) {
      const RosterInstance in = from_file(pattern_instance, read_instance);
      const WorkPattern pattern = from_file(pattern_file, read_pattern);
      const PatternResult pr =
          optimize_with_patterns(in, pattern, po.weights(), po.config(), po.sink(nullptr), &g_interrupted);
      print_summary(pr.result);
      std::fprintf(stderr, "distance to the company pattern: %g\n", pr.f4);
      if (!pattern_result.empty()) {
        Json doc = result_to_json(in, pr.result);
        doc["variants"] = pr.variants;
        doc["f4"] = pr.f4;
        write_file(pattern_result, doc.dump(1) + "\n");
      }
      if (pr.result.roster) emit(pattern_out, write_roster_csv(in, *pr.result.roster));
      return status_exit(pr.result);
    }

    if (*bench) {
      if (!bench_verify.empty()) {
        const fs::path dir(bench_verify);
        const Json report = from_file((dir / "report.json").string(), parse_json);
        const BenchConfig cfg = bench_config_from_json(report.at("config"));
        std::vector<BenchRun> runs;
        for (const Json& run : report.at("runs")) {
          BenchRun r;
          r.mode = *parse_solve_mode(run.at("mode").get<std::string>());
          r.trial = run.at("trial").get<int>();
          const std::string trace_file = (dir / run.at("trace").get<std::string>()).string();
          r.trace = from_file(trace_file, read_trace);
          runs.push_back(std::move(r));
        }
        const auto recomputed = tabulate(cfg, runs);
        const auto stored = bench_rows_from_json(report.at("rows"));
        bool same = recomputed.size() == stored.size();
        for (std::size_t i = 0; same && i < stored.size(); ++i) {
          for (std::size_t m = 0; m < stored[i].cells.size(); ++m) {
            const BenchCell& a = stored[i].cells[m];
            const BenchCell& b = recomputed[i].cells[m];
            same = same && a.reached == b.reached && a.runs == b.runs && a.mean_time == b.mean_time;
          }
        }
        std::cout << (same ? "report matches the stored traces\n" : "report differs from the stored traces\n");
        return same ? 0 : kExitError;
      }
      bc.modes.clear();
      std::stringstream ms(bench_modes);
      for (std::string m; std::getline(ms, m, ',');) {
        const auto mode = parse_solve_mode(m);
        if (!mode) throw InvalidInputError("unknown mode '" + m + "'");
        bc.modes.push_back(*mode);
      }
      bc.gaps.clear();
      for (double g : split_numbers(bench_gaps)) bc.gaps.push_back(g / 100.0);
      const auto name = [](const BenchRun& run) {
        return std::string(to_string(run.mode)) + "-trial" + std::to_string(run.trial) + ".ndjson";
      };
      if (!bench_dir.empty()) fs::create_directories(bench_dir);
      const BenchReport report = run_benchmark(
          bc,
          [&](const BenchRun& run) {
            std::fprintf(stderr, "%s trial %d (seed %llu): %s, gap %.4f%% in %.1fs\n", to_string(run.mode), run.trial,
                         static_cast<unsigned long long>(run.seed), to_string(run.status), 100 * run.gap, run.elapsed);
            if (!bench_dir.empty()) write_file((fs::path(bench_dir) / name(run)).string(), write_trace(run.trace));
          },
          &g_interrupted);
      const std::string table = format_table(report);
      std::cout << table;
      if (!bench_dir.empty()) {
        write_file((fs::path(bench_dir) / "report.json").string(), bench_report_to_json(report, name).dump(1) + "\n");
        write_file((fs::path(bench_dir) / "table.txt").string(), table);
      }
      return 0;
    }

    if (*exporter) {
      const fs::path src(export_source);
      const bool job_dir = fs::is_directory(src);
      const std::string result_file = job_dir ? (src / "result.json").string() : export_source;
      const std::string instance_file =
          !export_instance.empty() ? export_instance : job_dir ? (src / "instance.json").string() : "";
      if (instance_file.empty()) throw InvalidInputError("--instance is required for a result file");
      const RosterInstance in = from_file(instance_file, read_instance);
      const Json result = from_file(result_file, parse_json);
      if (!result.contains("roster")) throw InvalidInputError(result_file + " holds no roster");
      const Roster x = roster_from_json(result.at("roster"), in);
      if (export_format == "csv") {
        emit(export_out, write_roster_csv(in, x));
      } else if (export_format == "json") {
        emit(export_out, roster_to_json(in, x).dump(1) + "\n");
      } else {
        emit(export_out, statistics_to_json(in, compute_statistics(in, x)).dump(1) + "\n");
      }
      return 0;
    }

    if (*serve) {
      svc.data_dir = svc_dir;
      Service service(svc);
      std::fprintf(stderr, "serving /v1 on %s:%d, data in %s\n", svc.host.c_str(), svc.port, svc.data_dir.c_str());
      if (!service.listen()) {
        std::fprintf(stderr, "cannot listen on %s:%d\n", svc.host.c_str(), svc.port);
        return kExitError;
      }
      return 0;
    }
  } catch (const FileError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMalformed;
  } catch (const InvalidInputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
