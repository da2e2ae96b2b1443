#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "roster/generator.hpp"
#include "roster/io.hpp"

using namespace roster;

namespace {

RosterInstance make(std::uint64_t seed, int employees, int weeks, int shift_types) {
  GeneratorConfig cfg;
  cfg.employees = employees;
  cfg.weeks = weeks;
  cfg.shift_types = shift_types;
  return generate_instance(cfg, seed);
}

template <typename F>
FormatError format_error(F&& f) {
  try {
    f();
  } catch (const FormatError& e) {
    return e;
  }
  FAIL("expected a FormatError");
  return FormatError("", 0, "");
}

}  // namespace

TEST_CASE("instances survive a file round trip") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    RosterInstance in = make(static_cast<std::uint64_t>(trial), 2 + trial % 11, 1 + trial % 8, 1 + trial % 3);
    // Non-round targets exercise the double formatting.
    in.workload_targets(0, 0) = std::uniform_real_distribution<double>(0, 10)(rng);
    const std::string text = write_instance(in);
    const RosterInstance back = read_instance(text);
    CHECK(back == in);
    CHECK(write_instance(back) == text);
  }
}

TEST_CASE("null preferences are written explicitly") {
  RosterInstance in = make(3, 3, 1, 2);
  in.preferences(0, 0) = Preference::kNone;
  in.preferences(0, 1) = Preference::kAgainst;
  in.preferences(0, 2) = Preference::kFor;
  const Json doc = instance_to_json(in);
  CHECK(doc["preferences"][0][0].is_null());
  CHECK(doc["preferences"][0][1] == 0);
  CHECK(doc["preferences"][0][2] == 1);
}

TEST_CASE("malformed instance files are diagnosed") {
  const RosterInstance in = make(1, 3, 1, 2);
  const std::string good = write_instance(in);

  const FormatError syntax = format_error([&] { read_instance("{\n  \"weeks\": 1,\n  oops\n}"); });
  CHECK(syntax.line() == 3);

  Json doc = instance_to_json(in);
  doc.erase("cover");
  CHECK(format_error([&] { instance_from_json(doc); }).field() == "/cover");

  doc = instance_to_json(in);
  doc["surplus"] = 1;
  CHECK(format_error([&] { instance_from_json(doc); }).field() == "/surplus");

  doc = instance_to_json(in);
  doc["availability"][2][5] = 7;
  CHECK(format_error([&] { instance_from_json(doc); }).field() == "/availability/2/5");

  doc = instance_to_json(in);
  doc["cover"][4].erase(0);
  CHECK(format_error([&] { instance_from_json(doc); }).field() == "/cover/4");

  doc = instance_to_json(in);
  doc["blocks"] = 20;
  CHECK(format_error([&] { instance_from_json(doc); }).field() == "/blocks");

  doc = instance_to_json(in);
  doc["forbidden_sequences"][0]["previous"] = "X";
  CHECK(format_error([&] { instance_from_json(doc); }).field() == "/forbidden_sequences/0/previous");

  doc = instance_to_json(in);
  doc["workload_targets"][0][0] = "many";
  const FormatError typed = format_error([&] { instance_from_json(doc); });
  CHECK(std::string(typed.what()).find("/workload_targets/0/0") != std::string::npos);

  CHECK_NOTHROW(read_instance(good));
}

TEST_CASE("rosters survive a CSV round trip") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const RosterInstance in = make(static_cast<std::uint64_t>(trial), 2 + trial % 5, 1 + trial % 3, 1 + trial % 3);
    Roster x = oracle::random_roster(in, rng, 0.3);
    // Infeasible double assignments must survive as well.
    if (in.num_shift_types() > 1) {
      x.set(0, 0, 0, true);
      x.set(0, 0, 1, true);
    }
    const std::string csv = write_roster_csv(in, x);
    CHECK(read_roster_csv(csv, in) == x);
    CHECK(roster_from_json(roster_to_json(in, x), in) == x);
  }
}

TEST_CASE("roster CSV layout and statistics block") {
  const RosterInstance in = make(2, 3, 1, 2);
  Roster x = Roster::empty_for(in);
  x.set(1, 3 * 5 + 1, 0, true);  // Saturday afternoon
  const std::string csv = write_roster_csv(in, x);
  CHECK(csv.rfind("employee,week,day,slot,shift\n1,1,Sat,A," + in.shift_types[0].label + "\n\n", 0) == 0);
  CHECK(csv.find("\nemployee,shifts,weekend_shifts,") != std::string::npos);
  CHECK(csv.find("preferences are satisfied") != std::string::npos);

  const RosterStatistics stats = compute_statistics(in, x);
  const Json js = statistics_to_json(in, stats);
  CHECK(js["employees"][1]["weekend_shifts"] == 1);
  CHECK(js["employees"][1]["shifts"] == 1);
  CHECK(js["employees"].size() == 3);
}

TEST_CASE("malformed roster CSV is diagnosed by line") {
  const RosterInstance in = make(2, 3, 1, 2);
  CHECK(format_error([&] { read_roster_csv("emp,week\n", in); }).line() == 1);
  const std::string head = "employee,week,day,slot,shift\n";
  CHECK(format_error([&] { read_roster_csv(head + "0,1,Mon,M,SW\n0,2,Mon,M,SW\n", in); }).field() == "week");
  CHECK(format_error([&] { read_roster_csv(head + "0,1,Mon,M,SW\n0,1,Fun,M,SW\n", in); }).line() == 3);
  CHECK(format_error([&] { read_roster_csv(head + "x,1,Mon,M,SW\n", in); }).field() == "employee");
  CHECK(format_error([&] { read_roster_csv(head + "0,1,Mon,Q,SW\n", in); }).field() == "slot");
  CHECK(format_error([&] { read_roster_csv(head + "0,1,Mon,M,ZZ\n", in); }).field() == "shift");
  CHECK(format_error([&] { read_roster_csv(head + "0,1,Mon,M\n", in); }).line() == 2);
  CHECK(format_error([&] { read_roster_csv(head + "0,1,Mon,M,SW\n0,1,Mon,M,SW\n", in); }).line() == 3);
}

TEST_CASE("configuration documents") {
  HybridConfig c;
  c.mode = SolveMode::kMilpAlone;
  c.gap_target = 0.03;
  c.seed = 77;
  c.use_relax_and_fix = false;
  const HybridConfig back = config_from_json(config_to_json(c));
  CHECK(back.mode == c.mode);
  CHECK(back.gap_target == c.gap_target);
  CHECK(back.seed == 77);
  CHECK_FALSE(back.use_relax_and_fix);

  CHECK(config_from_json(Json::object()).gap_target == HybridConfig{}.gap_target);
  CHECK(format_error([] { config_from_json({{"gap", 0.1}}); }).field() == "/config/gap");
  CHECK(format_error([] { config_from_json({{"mode", "cplex"}}); }).field() == "/config/mode");
  CHECK(format_error([] { config_from_json({{"gap_target", -1.0}}); }).field() == "/config");
  CHECK(format_error([] { config_from_json({{"seed", -1}}); }).field() == "/config/seed");

  ObjectiveWeights w;
  w.lambda = {0.2, 0.3, 0.4};
  w.gamma = 0.25;
  const ObjectiveWeights wb = weights_from_json(weights_to_json(w));
  CHECK(wb.lambda == w.lambda);
  CHECK(wb.gamma == 0.25);
  CHECK(format_error([] { weights_from_json({{"lambda", {1, 2}}}); }).field() == "/weights/lambda");
  CHECK(format_error([] { weights_from_json({{"gamma", 2.0}}); }).field() == "/weights");
}

TEST_CASE("progress events as newline-delimited records") {
  ProgressEvent ev;
  ev.elapsed = 1.5;
  ev.phase = Phase::kScatter;
  ev.incumbent = 12.5;
  ev.bound = 11.0;
  ev.gap = compute_gap(12.5, 11.0);
  ev.detail = "generation 3";
  const std::string line = progress_line(ev);
  CHECK(line.back() == '\n');
  CHECK(std::count(line.begin(), line.end(), '\n') == 1);
  const ProgressEvent back = progress_from_json(parse_json(line));
  CHECK(back.phase == Phase::kScatter);
  CHECK(back.gap == ev.gap);
  CHECK(back.detail == ev.detail);

  const ProgressEvent empty = progress_from_json(progress_to_json(ProgressEvent{}));
  CHECK(std::isinf(empty.incumbent));
  CHECK(empty.bound == -kInf);
  CHECK(std::isinf(empty.gap));
}

TEST_CASE("change request documents") {
  const ChangeRequest c{2, ChangeKind::kVacation, {30, 31}, {1, 1}, 30};
  const auto one = changes_from_json(change_to_json(c));
  REQUIRE(one.size() == 1);
  CHECK(one[0].blocks == c.blocks);
  CHECK(one[0].effective_from == 30);
  CHECK(changes_from_json(Json::array({change_to_json(c), change_to_json(c)})).size() == 2);
  CHECK(changes_from_json({{"changes", Json::array({change_to_json(c)})}}).size() == 1);

  Json pref = change_to_json(ChangeRequest{0, ChangeKind::kPreference, {4}, {1}, 0});
  pref["values"][0] = nullptr;
  CHECK(changes_from_json(pref)[0].values[0] == -1);

  Json broken = change_to_json(c);
  broken["kind"] = "holiday";
  CHECK(format_error([&] { changes_from_json(broken); }).field() == "/kind");
  broken = change_to_json(c);
  broken["values"] = {1};
  CHECK(format_error([&] { changes_from_json({{"changes", {broken}}}); }).field() == "/changes/0/values");
}

TEST_CASE("pattern files") {
  const std::string text =
      "# eight weeks\n"
      "M M M M M - -\n"
      "A,A,A,A,A,-,-\n"
      "N N N N N - -\n"
      "- - - - - P P\n"
      "OM OM OM OM OM - -\n"
      "M A N - - - -\n"
      "P P P P P P P\n"
      "- - - - - - -  # rest week\n";
  const WorkPattern p = read_pattern(text);
  CHECK(p.weeks() == 8);
  CHECK(p.grid[1][0] == DayLabel::kAfternoon);
  CHECK(p.grid[4][2] == DayLabel::kOutage);
  CHECK(read_pattern(write_pattern(p)) == p);
  CHECK(read_pattern("M M M M M \xE2\x88\x92 -\n").grid[0][5] == DayLabel::kRest);

  CHECK(format_error([] { read_pattern("M M M\n"); }).line() == 1);
  const FormatError label = format_error([] { read_pattern("M M M M M - -\nM M X M M - -\n"); });
  CHECK(label.line() == 2);
  CHECK(label.field() == "Wed");
  CHECK_THROWS_AS(read_pattern("# nothing\n"), FormatError);
}
