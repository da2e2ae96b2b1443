#include "roster/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "roster/bnb.hpp"

namespace roster {

FormatError::FormatError(const std::string& message, int line, std::string field)
    : InvalidInputError([&] {
        std::string where;
        if (line > 0) where += "line " + std::to_string(line);
        if (!field.empty()) where += (where.empty() ? "" : ", ") + std::string("field ") + field;
        return where.empty() ? message : where + ": " + message;
      }()),
      line_(line),
      field_(std::move(field)) {}

namespace {

constexpr const char* kInstanceFormat = "roster-instance/1";
constexpr const char* kSlots[] = {"M", "A", "N"};
constexpr const char* kDays[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

[[noreturn]] void bad(const std::string& path, const std::string& message) { throw FormatError(message, 0, path); }

// Strict view of a JSON object: every key must be consumed.
class ObjectReader {
 public:
  ObjectReader(const Json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) bad(path_.empty() ? "/" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return doc_.contains(key); }

  const Json& at(const std::string& key) {
    const auto it = doc_.find(key);
    if (it == doc_.end()) bad(child(key), "missing");
    used_.insert(key);
    return *it;
  }

  std::string child(const std::string& key) const { return path_ + "/" + key; }

  int integer(const std::string& key) { return as_int(at(key), child(key)); }
  double number(const std::string& key) { return as_double(at(key), child(key)); }
  bool boolean(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_boolean()) bad(child(key), "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_string()) bad(child(key), "expected a string");
    return v.get<std::string>();
  }

  template <typename T, typename Read>
  void optional(const std::string& key, T& into, Read read) {
    if (has(key)) into = read(key);
  }

  void finish() const {
    for (const auto& [key, _] : doc_.items()) {
      if (!used_.count(key)) bad(child(key), "unknown field");
    }
  }

  static int as_int(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) bad(path, "expected an integer");
    const auto value = v.get<long long>();
    if (value < INT32_MIN || value > INT32_MAX) bad(path, "integer out of range");
    return static_cast<int>(value);
  }
  static double as_double(const Json& v, const std::string& path) {
    if (!v.is_number()) bad(path, "expected a number");
    const double value = v.get<double>();
    if (!std::isfinite(value)) bad(path, "expected a finite number");
    return value;
  }

 private:
  const Json& doc_;
  std::string path_;
  std::set<std::string> used_;
};

const Json& array_of(const Json& v, const std::string& path, std::optional<int> size = std::nullopt) {
  if (!v.is_array()) bad(path, "expected an array");
  if (size && static_cast<int>(v.size()) != *size) {
    bad(path, "expected " + std::to_string(*size) + " entries, found " + std::to_string(v.size()));
  }
  return v;
}

template <typename T, typename Cell>
Matrix<T> read_matrix(const Json& v, const std::string& path, int rows, int cols, Cell cell) {
  array_of(v, path, rows);
  Matrix<T> m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    const Json& row = array_of(v[static_cast<std::size_t>(r)], rp, cols);
    for (int c = 0; c < cols; ++c) m(r, c) = cell(row[static_cast<std::size_t>(c)], rp + "/" + std::to_string(c));
  }
  return m;
}

template <typename T, typename Cell>
Json write_matrix(const Matrix<T>& m, Cell cell) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(cell(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<int> read_int_list(const Json& v, const std::string& path) {
  array_of(v, path);
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(ObjectReader::as_int(v[i], path + "/" + std::to_string(i)));
  return out;
}

std::uint8_t read_flag(const Json& v, const std::string& path) {
  const int x = ObjectReader::as_int(v, path);
  if (x != 0 && x != 1) bad(path, "expected 0 or 1");
  return static_cast<std::uint8_t>(x);
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_or(const Json& v, const std::string& path, double fallback) {
  return v.is_null() ? fallback : ObjectReader::as_double(v, path);
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line x, column y: " prefix.
    const auto colon = what.find(": ", what.find("parse error"));
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw FormatError(what, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), "");
  }
}

Json instance_to_json(const RosterInstance& in) {
  Json doc;
  doc["format"] = kInstanceFormat;
  doc["weeks"] = in.weeks;
  doc["employees"] = in.employees;
  doc["blocks"] = in.blocks;
  Json types = Json::array();
  for (const ShiftType& t : in.shift_types) {
    types.push_back({{"label", t.label}, {"kind", t.kind == ShiftKind::kAllDay ? "all_day" : "eight_hour"}});
  }
  doc["shift_types"] = std::move(types);
  doc["max_shifts_per_week"] = in.max_shifts_per_week;
  doc["min_shifts_per_week"] = in.min_shifts_per_week;
  doc["min_rest_days"] = in.min_rest_days;
  doc["min_rest_sundays"] = in.min_rest_sundays;
  const auto flag = [](std::uint8_t v) { return Json(static_cast<int>(v)); };
  doc["availability"] = write_matrix(in.availability, flag);
  doc["vacation"] = write_matrix(in.vacation, flag);
  doc["preferences"] = write_matrix(in.preferences, [](Preference p) {
    return p == Preference::kNone ? Json(nullptr) : Json(static_cast<int>(p));
  });
  doc["cover"] = write_matrix(in.cover, [](int v) { return Json(v); });
  doc["workload_targets"] = write_matrix(in.workload_targets, [](double v) { return Json(v); });
  doc["weekend_targets"] = write_matrix(in.weekend_targets, [](double v) { return Json(v); });
  doc["no_license"] = in.no_license;
  doc["sunday_blocks"] = in.sunday_blocks;
  doc["weekend_blocks"] = in.weekend_blocks;
  Json seqs = Json::array();
  for (const ForbiddenSequence& f : in.forbidden_sequences) {
    seqs.push_back({{"previous", in.shift_types.at(static_cast<std::size_t>(f.previous)).label},
                    {"next_morning", in.shift_types.at(static_cast<std::size_t>(f.next_morning)).label}});
  }
  doc["forbidden_sequences"] = std::move(seqs);
  return doc;
}

RosterInstance instance_from_json(const Json& doc) {
  ObjectReader r(doc, "");
  if (r.has("format") && r.string("format") != kInstanceFormat) {
    bad("/format", std::string("expected \"") + kInstanceFormat + "\"");
  }
  RosterInstance in;
  in.weeks = r.integer("weeks");
  in.employees = r.integer("employees");
  in.blocks = r.integer("blocks");
  if (in.weeks < 1) bad("/weeks", "must be at least 1");
  if (in.employees < 1) bad("/employees", "must be at least 1");
  if (in.blocks != kBlocksPerWeek * in.weeks) bad("/blocks", "must equal 21 * weeks");

  const Json& types = array_of(r.at("shift_types"), "/shift_types");
  if (types.empty()) bad("/shift_types", "at least one shift type is required");
  for (std::size_t k = 0; k < types.size(); ++k) {
    const std::string path = "/shift_types/" + std::to_string(k);
    ObjectReader t(types[k], path);
    ShiftType st;
    st.label = t.string("label");
    if (st.label.empty() || st.label.find_first_of(",\n\r\"") != std::string::npos) {
      bad(path + "/label", "labels must be nonempty and free of commas, quotes and newlines");
    }
    const std::string kind = t.string("kind");
    if (kind == "all_day") {
      st.kind = ShiftKind::kAllDay;
    } else if (kind != "eight_hour") {
      bad(path + "/kind", "expected \"eight_hour\" or \"all_day\"");
    }
    t.finish();
    if (in.shift_index(st.label) >= 0) bad(path + "/label", "duplicate label " + st.label);
    in.shift_types.push_back(st);
  }
  const int n = in.employees;
  const int m = in.blocks;
  const int s = in.num_shift_types();

  in.max_shifts_per_week = r.integer("max_shifts_per_week");
  in.min_shifts_per_week = r.integer("min_shifts_per_week");
  in.min_rest_days = r.integer("min_rest_days");
  in.min_rest_sundays = r.integer("min_rest_sundays");

  in.availability = read_matrix<std::uint8_t>(r.at("availability"), "/availability", n, m, read_flag);
  in.vacation = read_matrix<std::uint8_t>(r.at("vacation"), "/vacation", n, m, read_flag);
  in.preferences = read_matrix<Preference>(r.at("preferences"), "/preferences", n, m,
                                           [](const Json& v, const std::string& p) {
                                             if (v.is_null()) return Preference::kNone;
                                             return static_cast<Preference>(read_flag(v, p));
                                           });
  in.cover = read_matrix<int>(r.at("cover"), "/cover", m, s, [](const Json& v, const std::string& p) {
    const int c = ObjectReader::as_int(v, p);
    if (c < 0) bad(p, "cover must be nonnegative");
    return c;
  });
  in.workload_targets = read_matrix<double>(r.at("workload_targets"), "/workload_targets", n, s, ObjectReader::as_double);
  in.weekend_targets = read_matrix<double>(r.at("weekend_targets"), "/weekend_targets", n, s, ObjectReader::as_double);

  const Json& nl = array_of(r.at("no_license"), "/no_license", s);
  for (int k = 0; k < s; ++k) {
    const std::string path = "/no_license/" + std::to_string(k);
    in.no_license.push_back(read_int_list(nl[static_cast<std::size_t>(k)], path));
    for (int e : in.no_license.back()) {
      if (e < 0 || e >= n) bad(path, "employee " + std::to_string(e) + " out of range");
    }
  }
  in.sunday_blocks = read_int_list(r.at("sunday_blocks"), "/sunday_blocks");
  in.weekend_blocks = read_int_list(r.at("weekend_blocks"), "/weekend_blocks");

  const Json& seqs = array_of(r.at("forbidden_sequences"), "/forbidden_sequences");
  for (std::size_t f = 0; f < seqs.size(); ++f) {
    const std::string path = "/forbidden_sequences/" + std::to_string(f);
    ObjectReader q(seqs[f], path);
    ForbiddenSequence seq;
    const auto lookup = [&](const char* key) {
      const int k = in.shift_index(q.string(key));
      if (k < 0) bad(path + "/" + key, "unknown shift label");
      return k;
    };
    seq.previous = lookup("previous");
    seq.next_morning = lookup("next_morning");
    q.finish();
    in.forbidden_sequences.push_back(seq);
  }
  r.finish();
  return in;
}

std::string write_instance(const RosterInstance& instance) { return instance_to_json(instance).dump(1) + "\n"; }

RosterInstance read_instance(const std::string& text) { return instance_from_json(parse_json(text)); }

std::string write_roster_csv(const RosterInstance& in, const Roster& x) {
  if (!x.matches(in)) throw InvalidInputError("roster dimensions do not match the instance");
  std::ostringstream os;
  os << "employee,week,day,slot,shift\n";
  for (int e = 0; e < in.employees; ++e) {
    for (int j = 0; j < in.blocks; ++j) {
      for (int k = 0; k < in.num_shift_types(); ++k) {
        if (!x(e, j, k)) continue;
        const int day = day_of_block(j);
        os << e << ',' << day / kDaysPerWeek + 1 << ',' << kDays[weekday(day)] << ',' << kSlots[j % kBlocksPerDay]
           << ',' << in.shift_types[static_cast<std::size_t>(k)].label << '\n';
      }
    }
  }

  const RosterStatistics stats = compute_statistics(in, x);
  os << "\nemployee,shifts,weekend_shifts";
  for (const ShiftType& t : in.shift_types) os << ",duties_" << t.label;
  for (const ShiftType& t : in.shift_types) os << ",weekend_" << t.label;
  os << ",rest_days,preferences_met,preference_slots,preference_rate\n";
  for (int e = 0; e < in.employees; ++e) {
    const EmployeeStatistics& es = stats.employees[static_cast<std::size_t>(e)];
    os << e << ',' << es.shifts << ',' << es.weekend_shifts;
    for (double d : es.duties) os << ',' << d;
    for (double d : es.weekend_duties) os << ',' << d;
    os << ',' << es.rest_days << ',' << es.preferences_met << ',' << es.preference_slots << ',' << std::fixed
       << std::setprecision(4) << es.preference_rate() << std::defaultfloat << std::setprecision(6) << '\n';
  }
  os << "# " << preference_summary(stats) << '\n';
  return os.str();
}

Roster read_roster_csv(const std::string& text, const RosterInstance& in) {
  Roster x = Roster::empty_for(in);
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line != "employee,week,day,slot,shift") {
        throw FormatError("expected header employee,week,day,slot,shift", line_no, "");
      }
      header = true;
      continue;
    }
    if (line.empty()) break;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (cells.size() != 5) throw FormatError("expected 5 columns, found " + std::to_string(cells.size()), line_no, "");

    const auto integer = [&](std::size_t col, const char* name) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(cells[col], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cells[col].size()) throw FormatError("not an integer: '" + cells[col] + "'", line_no, name);
      return v;
    };
    const int e = integer(0, "employee");
    if (e < 0 || e >= in.employees) throw FormatError("employee out of range", line_no, "employee");
    const int week = integer(1, "week");
    if (week < 1 || week > in.weeks) throw FormatError("week out of range", line_no, "week");
    const auto day = std::find(std::begin(kDays), std::end(kDays), cells[2]);
    if (day == std::end(kDays)) throw FormatError("unknown day '" + cells[2] + "'", line_no, "day");
    const auto slot = std::find(std::begin(kSlots), std::end(kSlots), cells[3]);
    if (slot == std::end(kSlots)) throw FormatError("unknown slot '" + cells[3] + "'", line_no, "slot");
    const int k = in.shift_index(cells[4]);
    if (k < 0) throw FormatError("unknown shift label '" + cells[4] + "'", line_no, "shift");
    const int j = ((week - 1) * kDaysPerWeek + static_cast<int>(day - std::begin(kDays))) * kBlocksPerDay +
                  static_cast<int>(slot - std::begin(kSlots));
    if (x(e, j, k)) throw FormatError("duplicate assignment", line_no, "");
    x.set(e, j, k, true);
  }
  if (!header) throw FormatError("empty roster file", 1, "");
  return x;
}

Json roster_to_json(const RosterInstance& in, const Roster& x) {
  if (!x.matches(in)) throw InvalidInputError("roster dimensions do not match the instance");
  Json grid = Json::array();
  for (int e = 0; e < in.employees; ++e) {
    Json row = Json::array();
    for (int j = 0; j < in.blocks; ++j) {
      Json labels = Json::array();
      for (int k = 0; k < in.num_shift_types(); ++k) {
        if (x(e, j, k)) labels.push_back(in.shift_types[static_cast<std::size_t>(k)].label);
      }
      row.push_back(labels.empty() ? Json(nullptr) : labels.size() == 1 ? labels[0] : labels);
    }
    grid.push_back(std::move(row));
  }
  return {{"shifts", std::move(grid)}};
}

Roster roster_from_json(const Json& doc, const RosterInstance& in) {
  ObjectReader r(doc, "");
  Roster x = Roster::empty_for(in);
  const Json& grid = array_of(r.at("shifts"), "/shifts", in.employees);
  for (int e = 0; e < in.employees; ++e) {
    const std::string rp = "/shifts/" + std::to_string(e);
    const Json& row = array_of(grid[static_cast<std::size_t>(e)], rp, in.blocks);
    for (int j = 0; j < in.blocks; ++j) {
      const std::string path = rp + "/" + std::to_string(j);
      const Json& cell = row[static_cast<std::size_t>(j)];
      if (cell.is_null()) continue;
      const Json labels = cell.is_array() ? cell : Json::array({cell});
      for (const Json& l : labels) {
        if (!l.is_string()) bad(path, "expected a shift label or null");
        const int k = in.shift_index(l.get<std::string>());
        if (k < 0) bad(path, "unknown shift label");
        x.set(e, j, k, true);
      }
    }
  }
  r.finish();
  return x;
}

std::string preference_summary(const RosterStatistics& stats) {
  int slots = 0, met = 0;
  for (const EmployeeStatistics& e : stats.employees) {
    slots += e.preference_slots;
    met += e.preferences_met;
  }
  if (slots == 0) return "no employee preferences were stated";
  const int pct = static_cast<int>(std::lround(100.0 * met / slots));
  return std::to_string(pct) + "% of the employee preferences are satisfied";
}

Json statistics_to_json(const RosterInstance& in, const RosterStatistics& stats) {
  Json employees = Json::array();
  for (std::size_t e = 0; e < stats.employees.size(); ++e) {
    const EmployeeStatistics& es = stats.employees[e];
    Json duties = Json::object();
    Json weekend = Json::object();
    for (int k = 0; k < in.num_shift_types(); ++k) {
      const std::string& label = in.shift_types[static_cast<std::size_t>(k)].label;
      duties[label] = es.duties[static_cast<std::size_t>(k)];
      weekend[label] = es.weekend_duties[static_cast<std::size_t>(k)];
    }
    employees.push_back({{"employee", e},
                         {"shifts", es.shifts},
                         {"weekend_shifts", es.weekend_shifts},
                         {"duties", std::move(duties)},
                         {"weekend_duties", std::move(weekend)},
                         {"rest_days", es.rest_days},
                         {"preferences_met", es.preferences_met},
                         {"preference_slots", es.preference_slots},
                         {"preference_rate", es.preference_rate()}});
  }
  return {{"employees", std::move(employees)},
          {"mean_preference_rate", stats.mean_preference_rate},
          {"min_preference_rate", stats.min_preference_rate},
          {"min_preference_employee", stats.min_preference_employee},
          {"summary", preference_summary(stats)}};
}

Json weights_to_json(const ObjectiveWeights& w) {
  return {{"lambda", w.lambda}, {"theta", w.theta}, {"gamma", w.gamma}, {"deviation_weight", w.deviation_weight}};
}

ObjectiveWeights weights_from_json(const Json& doc) {
  ObjectReader r(doc, "/weights");
  ObjectiveWeights w;
  const auto triple = [&](const char* key, std::array<double, 3>& into) {
    if (!r.has(key)) return;
    const Json& v = array_of(r.at(key), r.child(key), 3);
    for (std::size_t i = 0; i < 3; ++i) into[i] = ObjectReader::as_double(v[i], r.child(key) + "/" + std::to_string(i));
  };
  triple("lambda", w.lambda);
  triple("theta", w.theta);
  r.optional("gamma", w.gamma, [&](const std::string& k) { return r.number(k); });
  r.optional("deviation_weight", w.deviation_weight, [&](const std::string& k) { return r.number(k); });
  r.finish();
  if (!w.valid()) bad("/weights", "lambda, theta and gamma must lie in [0, 1] and deviation_weight must be nonnegative");
  return w;
}

Json config_to_json(const HybridConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"gap_target", c.gap_target},
          {"phase1_time_budget", c.phase1_time_budget},
          {"total_time_limit", c.total_time_limit},
          {"use_relax_and_fix", c.use_relax_and_fix},
          {"seed", c.seed},
          {"pool_size", c.pool_size},
          {"refset_size", c.refset_size},
          {"close_bound", c.close_bound}};
}

HybridConfig config_from_json(const Json& doc, HybridConfig c) {
  ObjectReader r(doc, "/config");
  if (r.has("mode")) {
    const auto mode = parse_solve_mode(r.string("mode"));
    if (!mode) bad("/config/mode", "expected \"hybrid\" or \"milp\"");
    c.mode = *mode;
  }
  const auto num = [&](const std::string& k) { return r.number(k); };
  const auto integer = [&](const std::string& k) { return r.integer(k); };
  const auto flag = [&](const std::string& k) { return r.boolean(k); };
  r.optional("gap_target", c.gap_target, num);
  r.optional("phase1_time_budget", c.phase1_time_budget, num);
  r.optional("total_time_limit", c.total_time_limit, num);
  r.optional("use_relax_and_fix", c.use_relax_and_fix, flag);
  r.optional("pool_size", c.pool_size, integer);
  r.optional("refset_size", c.refset_size, integer);
  r.optional("close_bound", c.close_bound, flag);
  if (r.has("seed")) {
    const Json& v = r.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      bad("/config/seed", "expected a nonnegative integer");
    }
    c.seed = v.get<std::uint64_t>();
  }
  r.finish();
  try {
    c.validate();
  } catch (const InvalidInputError& e) {
    bad("/config", e.what());
  }
  return c;
}

Json progress_to_json(const ProgressEvent& ev) {
  Json out{{"elapsed", ev.elapsed},
           {"phase", to_string(ev.phase)},
           {"incumbent", number_or_null(ev.incumbent)},
           {"bound", number_or_null(ev.bound)},
           {"gap", number_or_null(ev.gap)}};
  if (!ev.detail.empty()) out["detail"] = ev.detail;
  return out;
}

ProgressEvent progress_from_json(const Json& doc) {
  ObjectReader r(doc, "");
  ProgressEvent ev;
  ev.elapsed = r.number("elapsed");
  const std::string phase = r.string("phase");
  if (phase == "relax_fix") {
    ev.phase = Phase::kRelaxFix;
  } else if (phase == "bnb") {
    ev.phase = Phase::kBnb;
  } else if (phase == "scatter") {
    ev.phase = Phase::kScatter;
  } else {
    bad("/phase", "unknown phase");
  }
  ev.incumbent = number_or(r.at("incumbent"), "/incumbent", kInf);
  ev.bound = number_or(r.at("bound"), "/bound", -kInf);
  ev.gap = number_or(r.at("gap"), "/gap", kInf);
  if (r.has("detail")) ev.detail = r.string("detail");
  if (r.has("series")) r.string("series");
  r.finish();
  return ev;
}

std::string write_trace(const std::vector<ProgressEvent>& trace) {
  std::string out;
  for (const ProgressEvent& ev : trace) out += progress_line(ev);
  return out;
}

std::vector<ProgressEvent> read_trace(const std::string& ndjson) {
  std::vector<ProgressEvent> out;
  std::istringstream is(ndjson);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(progress_from_json(parse_json(line)));
    } catch (const FormatError& e) {
      throw FormatError(e.what(), line_no, e.field());
    }
  }
  return out;
}

Json bench_config_to_json(const BenchConfig& c) {
  Json modes = Json::array();
  for (SolveMode m : c.modes) modes.push_back(to_string(m));
  return {{"employees", c.instance.employees},
          {"weeks", c.instance.weeks},
          {"shift_types", c.instance.shift_types},
          {"trials", c.trials},
          {"modes", modes},
          {"gaps", c.gaps},
          {"time_limit", c.time_limit},
          {"phase1_time_budget", c.phase1_time_budget},
          {"seed", c.seed},
          {"max_seed_attempts", c.max_seed_attempts}};
}

BenchConfig bench_config_from_json(const Json& doc) {
  ObjectReader r(doc, "/bench");
  BenchConfig c;
  const auto integer = [&](const std::string& k) { return r.integer(k); };
  const auto num = [&](const std::string& k) { return r.number(k); };
  r.optional("employees", c.instance.employees, integer);
  r.optional("weeks", c.instance.weeks, integer);
  r.optional("shift_types", c.instance.shift_types, integer);
  r.optional("trials", c.trials, integer);
  r.optional("time_limit", c.time_limit, num);
  r.optional("phase1_time_budget", c.phase1_time_budget, num);
  r.optional("max_seed_attempts", c.max_seed_attempts, integer);
  if (r.has("seed")) {
    const int seed = r.integer("seed");
    if (seed < 0) bad("/bench/seed", "expected a nonnegative integer");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  if (r.has("modes")) {
    const Json& modes = array_of(r.at("modes"), "/bench/modes");
    c.modes.clear();
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const auto m = modes[i].is_string() ? parse_solve_mode(modes[i].get<std::string>()) : std::nullopt;
      if (!m) bad("/bench/modes/" + std::to_string(i), "expected \"hybrid\" or \"milp\"");
      c.modes.push_back(*m);
    }
  }
  if (r.has("gaps")) {
    const Json& gaps = array_of(r.at("gaps"), "/bench/gaps");
    c.gaps.clear();
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      c.gaps.push_back(ObjectReader::as_double(gaps[i], "/bench/gaps/" + std::to_string(i)));
    }
  }
  r.finish();
  if (c.instance.employees < 1 || c.instance.weeks < 1 || c.instance.shift_types < 1 || c.instance.shift_types > 3) {
    bad("/bench", "employees and weeks must be positive and shift_types in 1..3");
  }
  try {
    c.validate();
  } catch (const InvalidInputError& e) {
    bad("/bench", e.what());
  }
  return c;
}

Json bench_report_to_json(const BenchReport& report, const std::function<std::string(const BenchRun&)>& trace_name) {
  Json rows = Json::array();
  for (const BenchRow& row : report.rows) {
    Json cells = Json::array();
    for (std::size_t m = 0; m < row.cells.size(); ++m) {
      const BenchCell& c = row.cells[m];
      cells.push_back({{"mode", to_string(report.config.modes[m])},
                       {"mean_time", c.mean_time ? Json(*c.mean_time) : Json(nullptr)},
                       {"reached", c.reached},
                       {"runs", c.runs}});
    }
    rows.push_back({{"gap", row.gap}, {"cells", std::move(cells)}});
  }
  Json runs = Json::array();
  for (const BenchRun& run : report.runs) {
    Json j{{"mode", to_string(run.mode)},
           {"trial", run.trial},
           {"seed", run.seed},
           {"status", to_string(run.status)},
           {"objective", number_or_null(run.objective)},
           {"gap", number_or_null(run.gap)},
           {"elapsed", run.elapsed}};
    if (trace_name) j["trace"] = trace_name(run);
    runs.push_back(std::move(j));
  }
  return {{"config", bench_config_to_json(report.config)},
          {"rows", std::move(rows)},
          {"runs", std::move(runs)},
          {"skipped_seeds", report.skipped_seeds},
          {"table", format_table(report)}};
}

std::vector<BenchRow> bench_rows_from_json(const Json& rows) {
  std::vector<BenchRow> out;
  for (const Json& r : rows) {
    BenchRow row;
    row.gap = r.at("gap").get<double>();
    for (const Json& c : r.at("cells")) {
      BenchCell cell;
      if (!c.at("mean_time").is_null()) cell.mean_time = c.at("mean_time").get<double>();
      cell.reached = c.at("reached").get<int>();
      cell.runs = c.at("runs").get<int>();
      row.cells.push_back(cell);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string progress_line(const ProgressEvent& event) { return progress_to_json(event).dump() + "\n"; }

Json change_to_json(const ChangeRequest& c) {
  return {{"employee", c.employee},
          {"kind", to_string(c.kind)},
          {"blocks", c.blocks},
          {"values", c.values},
          {"effective_from", c.effective_from}};
}

std::vector<ChangeRequest> changes_from_json(const Json& doc) {
  const Json* list = &doc;
  std::string base = "";
  if (doc.is_object() && doc.contains("changes")) {
    ObjectReader r(doc, "");
    list = &array_of(r.at("changes"), "/changes");
    r.finish();
    base = "/changes";
  }
  const Json items = list->is_array() ? *list : Json::array({*list});
  std::vector<ChangeRequest> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string path = list->is_array() ? base + "/" + std::to_string(i) : base;
    ObjectReader r(items[i], path);
    ChangeRequest c;
    c.employee = r.integer("employee");
    const auto kind = parse_change_kind(r.string("kind"));
    if (!kind) bad(path + "/kind", "expected availability, vacation or preference");
    c.kind = *kind;
    c.blocks = read_int_list(r.at("blocks"), path + "/blocks");
    const Json& values = array_of(r.at("values"), path + "/values", static_cast<int>(c.blocks.size()));
    for (std::size_t v = 0; v < values.size(); ++v) {
      const std::string vp = path + "/values/" + std::to_string(v);
      c.values.push_back(c.kind == ChangeKind::kPreference && values[v].is_null() ? -1
                                                                                  : ObjectReader::as_int(values[v], vp));
    }
    c.effective_from = r.integer("effective_from");
    r.finish();
    out.push_back(std::move(c));
  }
  return out;
}

std::string write_pattern(const WorkPattern& pattern) {
  std::ostringstream os;
  for (const auto& week : pattern.grid) {
    for (int d = 0; d < kDaysPerWeek; ++d) {
      os << (d ? " " : "") << to_string(week[static_cast<std::size_t>(d)]);
    }
    os << '\n';
  }
  return os.str();
}

WorkPattern read_pattern(const std::string& text) {
  WorkPattern p;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<std::string> cells;
    for (std::string cell; ls >> cell;) cells.push_back(cell);
    if (cells.empty()) continue;
    if (cells.size() != kDaysPerWeek) {
      throw FormatError("expected 7 day labels, found " + std::to_string(cells.size()), line_no, "");
    }
    std::array<DayLabel, kDaysPerWeek> week{};
    for (int d = 0; d < kDaysPerWeek; ++d) {
      const std::string& cell = cells[static_cast<std::size_t>(d)];
      // The typographic minus is accepted for rest days.
      if (cell == "\xE2\x88\x92") {
        week[static_cast<std::size_t>(d)] = DayLabel::kRest;
        continue;
      }
      try {
        week[static_cast<std::size_t>(d)] = parse_day_label(cell);
      } catch (const InvalidInputError& e) {
        throw FormatError(e.what(), line_no, kDays[d]);
      }
    }
    p.grid.push_back(week);
  }
  if (p.grid.empty()) throw FormatError("pattern has no weeks", line_no, "");
  return p;
}

Json result_to_json(const RosterInstance& in, const OptimizationResult& r) {
  Json breakdown{{"total", number_or_null(r.breakdown.total)},
                 {"f1", r.breakdown.f1},
                 {"f1_max", r.breakdown.f1_max},
                 {"f2", r.breakdown.f2},
                 {"f2_max", r.breakdown.f2_max},
                 {"f3", r.breakdown.f3}};
  if (r.breakdown.f4) breakdown["f4"] = *r.breakdown.f4;
  if (r.breakdown.deviation) breakdown["deviation"] = *r.breakdown.deviation;
  Json out{{"status", to_string(r.status)},
           {"objective", number_or_null(r.objective)},
           {"lower_bound", number_or_null(r.lower_bound)},
           {"gap", number_or_null(r.gap)},
           {"breakdown", std::move(breakdown)},
           {"timings",
            {{"relax_fix", r.timings.relax_fix},
             {"bnb", r.timings.bnb},
             {"scatter", r.timings.scatter},
             {"total", r.timings.total}}},
           {"nodes", r.nodes},
           {"reduced_model", r.reduced_model},
           {"fell_back", r.fell_back},
           {"fixed_columns", r.fixed_columns},
           {"generations", r.scatter_trace.size()},
           {"message", r.message}};
  if (r.roster) {
    out["roster"] = roster_to_json(in, *r.roster);
    out["statistics"] = statistics_to_json(in, compute_statistics(in, *r.roster));
    out["feasible"] = check_feasibility(in, *r.roster).feasible();
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInputError("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw RosterError("cannot write " + path);
    f << content;
    f.flush();
    if (!f) throw RosterError("cannot write " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw RosterError("cannot rename " + tmp + " to " + path);
}

}  // namespace roster
