#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "roster/io.hpp"

namespace httplib {
class Server;
}

namespace roster {

enum class JobKind : std::uint8_t { kOptimize, kEventReoptimize, kRollingHorizon, kPatterns, kBenchmark };
enum class JobState : std::uint8_t { kQueued, kRunning, kDone, kFailed, kCancelled };

const char* to_string(JobKind kind);
const char* to_string(JobState state);
std::optional<JobKind> parse_job_kind(const std::string& text);
std::optional<JobState> parse_job_state(const std::string& text);

bool is_terminal(JobState state);
// queued -> running | cancelled, running -> done | failed | cancelled.
bool can_transition(JobState from, JobState to);

class NotFoundError : public RosterError {
 public:
  using RosterError::RosterError;
};

// A request that is well formed but not allowed in the job's current state.
class ConflictError : public RosterError {
 public:
  using RosterError::RosterError;
};

struct JobRecord {
  std::string id;
  JobKind kind = JobKind::kOptimize;
  JobState state = JobState::kQueued;
  std::string parent;  // event jobs: the job whose roster is re-optimized
  std::string created;
  std::string started;
  std::string finished;
  std::string error;
};

Json job_to_json(const JobRecord& job);
JobRecord job_from_json(const Json& doc);

// One directory per job under <root>/jobs: job.json (state), config.json
// (immutable), instance.json, trace.ndjson, result.json and roster.csv.
// Uploaded instances live in <root>/instances. Safe for concurrent use within
// one process.
class JobStore {
 public:
  explicit JobStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path job_dir(const std::string& id) const;

  JobRecord create(JobKind kind, const Json& config, const std::optional<RosterInstance>& instance,
                   const std::string& parent = {});
  JobRecord get(const std::string& id) const;  // throws NotFoundError
  std::vector<JobRecord> list() const;
  // Throws ConflictError for an illegal transition.
  JobRecord transition(const std::string& id, JobState to, const std::string& error = {});

  Json config(const std::string& id) const;
  RosterInstance instance(const std::string& id) const;
  void set_instance(const std::string& id, const RosterInstance& instance);
  void append_trace(const std::string& id, const std::string& line);
  std::string trace(const std::string& id) const;
  void write_result(const std::string& id, const Json& result);
  std::optional<Json> result(const std::string& id) const;
  void write_artifact(const std::string& id, const std::string& name, const std::string& content);
  std::optional<std::string> artifact(const std::string& id, const std::string& name) const;

  std::string put_instance(const RosterInstance& instance);
  RosterInstance stored_instance(const std::string& id) const;
  std::vector<std::string> instance_ids() const;

 private:
  std::string next_id(const std::filesystem::path& dir, char prefix);
  void save(const JobRecord& job) const;

  std::filesystem::path root_;
  mutable std::mutex mutex_;
};

// FIFO queue executed by a fixed number of worker threads.
class JobManager {
 public:
  JobManager(std::shared_ptr<JobStore> store, int workers = 1);
  ~JobManager();
  JobManager(const JobManager&) = delete;
  JobManager& operator=(const JobManager&) = delete;

  JobStore& store() { return *store_; }

  // Validates and normalizes the request, then queues the job. Throws
  // InvalidInputError (bad payload), NotFoundError or ConflictError.
  JobRecord submit(const Json& request);
  // Event job against a finished job's roster.
  JobRecord submit_changes(const std::string& parent, const Json& request);
  JobRecord cancel(const std::string& id);

  // Blocks until the job is terminal or the timeout expires.
  JobRecord wait(const std::string& id, double timeout_seconds);

 private:
  void worker_loop();
  void execute(const JobRecord& job);
  JobRecord enqueue(JobKind kind, const Json& config, const std::optional<RosterInstance>& instance,
                    const std::string& parent);

  std::shared_ptr<JobStore> store_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  std::deque<std::string> queue_;
  std::map<std::string, std::shared_ptr<std::atomic<bool>>> cancel_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

struct ServiceOptions {
  std::filesystem::path data_dir = "roster-data";
  int port = 8080;
  std::string host = "127.0.0.1";
  int workers = 1;

  // ROSTER_DATA_DIR, ROSTER_PORT, ROSTER_HOST, ROSTER_WORKERS override the defaults.
  static ServiceOptions from_env();
};

// The /v1 HTTP API over a JobManager.
class Service {
 public:
  explicit Service(const ServiceOptions& options);
  ~Service();

  JobManager& jobs() { return *manager_; }
  // Binds and serves until stop(); returns false if the port cannot be bound.
  bool listen();
  // Binds to a free port and serves on a background thread; returns the port.
  int start_background();
  void stop();

 private:
  void routes();

  ServiceOptions options_;
  std::shared_ptr<JobStore> store_;
  std::unique_ptr<JobManager> manager_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace roster
