#include <chrono>
#include <ctime>
#include <fstream>
#include <set>

#include "roster/service.hpp"

namespace roster {

namespace fs = std::filesystem;

const char* to_string(JobKind kind) {
  switch (kind) {
    case JobKind::kOptimize: return "optimize";
    case JobKind::kEventReoptimize: return "event_reoptimize";
    case JobKind::kRollingHorizon: return "rolling_horizon";
    case JobKind::kPatterns: return "patterns";
    case JobKind::kBenchmark: return "benchmark";
  }
  return "unknown";
}

const char* to_string(JobState state) {
  switch (state) {
    case JobState::kQueued: return "queued";
    case JobState::kRunning: return "running";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
    case JobState::kCancelled: return "cancelled";
  }
  return "unknown";
}

std::optional<JobKind> parse_job_kind(const std::string& text) {
  for (JobKind k : {JobKind::kOptimize, JobKind::kEventReoptimize, JobKind::kRollingHorizon, JobKind::kPatterns,
                    JobKind::kBenchmark}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<JobState> parse_job_state(const std::string& text) {
  for (JobState s : {JobState::kQueued, JobState::kRunning, JobState::kDone, JobState::kFailed, JobState::kCancelled}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

bool is_terminal(JobState state) {
  return state == JobState::kDone || state == JobState::kFailed || state == JobState::kCancelled;
}

bool can_transition(JobState from, JobState to) {
  switch (from) {
    case JobState::kQueued: return to == JobState::kRunning || to == JobState::kCancelled;
    case JobState::kRunning: return is_terminal(to);
    default: return false;
  }
}

Json job_to_json(const JobRecord& job) {
  Json out{{"id", job.id},
           {"kind", to_string(job.kind)},
           {"state", to_string(job.state)},
           {"created", job.created},
           {"started", job.started},
           {"finished", job.finished}};
  if (!job.parent.empty()) out["parent"] = job.parent;
  if (!job.error.empty()) out["error"] = job.error;
  return out;
}

JobRecord job_from_json(const Json& doc) {
  JobRecord job;
  job.id = doc.at("id").get<std::string>();
  const auto kind = parse_job_kind(doc.at("kind").get<std::string>());
  const auto state = parse_job_state(doc.at("state").get<std::string>());
  if (!kind || !state) throw InvalidInputError("corrupt job record " + job.id);
  job.kind = *kind;
  job.state = *state;
  job.created = doc.value("created", "");
  job.started = doc.value("started", "");
  job.finished = doc.value("finished", "");
  job.parent = doc.value("parent", "");
  job.error = doc.value("error", "");
  return job;
}

namespace {

std::string now_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

bool valid_id(const std::string& id, char prefix) {
  if (id.size() < 2 || id[0] != prefix) return false;
  return std::all_of(id.begin() + 1, id.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

JobStore::JobStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "jobs");
  fs::create_directories(root_ / "instances");
}

fs::path JobStore::job_dir(const std::string& id) const {
  if (!valid_id(id, 'j')) throw NotFoundError("no job " + id);
  return root_ / "jobs" / id;
}

std::string JobStore::next_id(const fs::path& dir, char prefix) {
  long highest = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().stem().string();
    if (valid_id(name, prefix)) highest = std::max(highest, std::stol(name.substr(1)));
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%06ld", prefix, highest + 1);
  return buf;
}

void JobStore::save(const JobRecord& job) const {
  write_file((job_dir(job.id) / "job.json").string(), job_to_json(job).dump(1) + "\n");
}

JobRecord JobStore::create(JobKind kind, const Json& config, const std::optional<RosterInstance>& instance,
                           const std::string& parent) {
  std::lock_guard lock(mutex_);
  JobRecord job;
  job.id = next_id(root_ / "jobs", 'j');
  job.kind = kind;
  job.parent = parent;
  job.created = now_utc();
  const fs::path dir = job_dir(job.id);
  fs::create_directories(dir);
  write_file((dir / "config.json").string(), config.dump(1) + "\n");
  if (instance) write_file((dir / "instance.json").string(), write_instance(*instance));
  write_file((dir / "trace.ndjson").string(), "");
  save(job);
  return job;
}

JobRecord JobStore::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const fs::path file = job_dir(id) / "job.json";
  if (!fs::exists(file)) throw NotFoundError("no job " + id);
  return job_from_json(parse_json(read_file(file.string())));
}

std::vector<JobRecord> JobStore::list() const {
  std::vector<std::string> ids;
  {
    std::lock_guard lock(mutex_);
    for (const auto& entry : fs::directory_iterator(root_ / "jobs")) {
      const std::string name = entry.path().filename().string();
      if (valid_id(name, 'j') && fs::exists(entry.path() / "job.json")) ids.push_back(name);
    }
  }
  std::sort(ids.begin(), ids.end());
  std::vector<JobRecord> out;
  for (const auto& id : ids) out.push_back(get(id));
  return out;
}

JobRecord JobStore::transition(const std::string& id, JobState to, const std::string& error) {
  JobRecord job = get(id);
  std::lock_guard lock(mutex_);
  if (!can_transition(job.state, to)) {
    throw ConflictError(std::string("job ") + id + " cannot move from " + to_string(job.state) + " to " + to_string(to));
  }
  job.state = to;
  if (to == JobState::kRunning) job.started = now_utc();
  if (is_terminal(to)) job.finished = now_utc();
  job.error = error;
  save(job);
  return job;
}

Json JobStore::config(const std::string& id) const {
  return parse_json(read_file((job_dir(id) / "config.json").string()));
}

RosterInstance JobStore::instance(const std::string& id) const {
  const fs::path file = job_dir(id) / "instance.json";
  if (!fs::exists(file)) throw NotFoundError("job " + id + " has no instance");
  return read_instance(read_file(file.string()));
}

void JobStore::set_instance(const std::string& id, const RosterInstance& instance) {
  write_file((job_dir(id) / "instance.json").string(), write_instance(instance));
}

void JobStore::append_trace(const std::string& id, const std::string& line) {
  std::lock_guard lock(mutex_);
  std::ofstream f(job_dir(id) / "trace.ndjson", std::ios::app | std::ios::binary);
  f << line;
  f.flush();
}

std::string JobStore::trace(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const fs::path file = job_dir(id) / "trace.ndjson";
  return fs::exists(file) ? read_file(file.string()) : std::string();
}

void JobStore::write_result(const std::string& id, const Json& result) {
  write_file((job_dir(id) / "result.json").string(), result.dump(1) + "\n");
}

std::optional<Json> JobStore::result(const std::string& id) const {
  const fs::path file = job_dir(id) / "result.json";
  if (!fs::exists(file)) return std::nullopt;
  return parse_json(read_file(file.string()));
}

void JobStore::write_artifact(const std::string& id, const std::string& name, const std::string& content) {
  const fs::path file = job_dir(id) / name;
  fs::create_directories(file.parent_path());
  write_file(file.string(), content);
}

std::optional<std::string> JobStore::artifact(const std::string& id, const std::string& name) const {
  if (name.find("..") != std::string::npos) return std::nullopt;
  const fs::path file = job_dir(id) / name;
  if (!fs::is_regular_file(file)) return std::nullopt;
  return read_file(file.string());
}

std::string JobStore::put_instance(const RosterInstance& instance) {
  std::lock_guard lock(mutex_);
  const std::string id = next_id(root_ / "instances", 'i');
  write_file((root_ / "instances" / (id + ".json")).string(), write_instance(instance));
  return id;
}

RosterInstance JobStore::stored_instance(const std::string& id) const {
  const fs::path file = root_ / "instances" / (id + ".json");
  if (!valid_id(id, 'i') || !fs::exists(file)) throw NotFoundError("no instance " + id);
  return read_instance(read_file(file.string()));
}

std::vector<std::string> JobStore::instance_ids() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_ / "instances")) {
    const std::string name = entry.path().stem().string();
    if (entry.path().extension() == ".json" && valid_id(name, 'i')) ids.push_back(name);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace roster
