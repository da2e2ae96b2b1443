#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "roster/bench.hpp"
#include "roster/extensions.hpp"
#include "roster/hybrid.hpp"
#include "roster/instance.hpp"
#include "roster/pattern.hpp"

namespace roster {

using Json = nlohmann::json;

// A document that does not parse or does not fit the expected layout. `line`
// is 1-based (0 when unknown); `field` is a JSON pointer or CSV column name.
class FormatError : public InvalidInputError {
 public:
  FormatError(const std::string& message, int line, std::string field);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

// Parses JSON text; syntax errors become FormatError with a line number.
Json parse_json(const std::string& text);

Json instance_to_json(const RosterInstance& instance);
// Strict: missing or unknown fields and wrong shapes are rejected. The result
// is not checked with validate_instance.
RosterInstance instance_from_json(const Json& doc);
std::string write_instance(const RosterInstance& instance);
RosterInstance read_instance(const std::string& text);

// One row per worked block: employee, week (1-based), day (Mon..Sun), slot
// (M/A/N), shift label. A statistics table follows after a blank line.
std::string write_roster_csv(const RosterInstance& instance, const Roster& roster);
// Reads the assignment table and ignores everything after the first blank line.
Roster read_roster_csv(const std::string& text, const RosterInstance& instance);

Json roster_to_json(const RosterInstance& instance, const Roster& roster);
Roster roster_from_json(const Json& doc, const RosterInstance& instance);

Json statistics_to_json(const RosterInstance& instance, const RosterStatistics& stats);
// "85% of the employee preferences are satisfied"
std::string preference_summary(const RosterStatistics& stats);

Json weights_to_json(const ObjectiveWeights& weights);
ObjectiveWeights weights_from_json(const Json& doc);
// Fields absent from `doc` keep their values from `defaults`.
Json config_to_json(const HybridConfig& config);
HybridConfig config_from_json(const Json& doc, HybridConfig defaults = {});

// Infinite values are written as null. A "series" key (added by the service
// for jobs with several solves) is accepted and ignored.
Json progress_to_json(const ProgressEvent& event);
ProgressEvent progress_from_json(const Json& doc);
std::string progress_line(const ProgressEvent& event);  // newline-terminated
std::string write_trace(const std::vector<ProgressEvent>& trace);
std::vector<ProgressEvent> read_trace(const std::string& ndjson);

Json bench_config_to_json(const BenchConfig& config);
BenchConfig bench_config_from_json(const Json& doc);
// Rows and run summaries; `trace_name(run)` names each run's stored trace.
Json bench_report_to_json(const BenchReport& report, const std::function<std::string(const BenchRun&)>& trace_name);
std::vector<BenchRow> bench_rows_from_json(const Json& rows);

Json change_to_json(const ChangeRequest& change);
// Accepts a single request, an array, or {"changes": [...]}.
std::vector<ChangeRequest> changes_from_json(const Json& doc);

// Whitespace- or comma-separated day labels, seven per line; '#' starts a
// comment.
std::string write_pattern(const WorkPattern& pattern);
WorkPattern read_pattern(const std::string& text);

Json result_to_json(const RosterInstance& instance, const OptimizationResult& result);

std::string read_file(const std::string& path);
// Writes via a temporary file and rename.
void write_file(const std::string& path, const std::string& content);

}  // namespace roster
