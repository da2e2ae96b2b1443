#include <chrono>
#include <set>

#include "roster/service.hpp"

namespace roster {

namespace {

void only_keys(const Json& doc, const std::set<std::string>& allowed) {
  if (!doc.is_object()) throw FormatError("expected an object", 0, "/");
  for (const auto& [key, _] : doc.items()) {
    if (!allowed.count(key)) throw FormatError("unknown field", 0, "/" + key);
  }
}

int int_field(const Json& doc, const std::string& key, int fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer()) throw FormatError("expected an integer", 0, "/" + key);
  return doc[key].get<int>();
}

bool bool_field(const Json& doc, const std::string& key, bool fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_boolean()) throw FormatError("expected true or false", 0, "/" + key);
  return doc[key].get<bool>();
}

WorkPattern pattern_field(const Json& v) {
  if (v.is_string()) return read_pattern(v.get<std::string>());
  if (v.is_array()) {
    std::string text;
    for (const Json& line : v) {
      if (!line.is_string()) throw FormatError("expected pattern lines as strings", 0, "/pattern");
      text += line.get<std::string>() + "\n";
    }
    return read_pattern(text);
  }
  throw FormatError("expected the pattern as text or an array of lines", 0, "/pattern");
}

Json pattern_lines(const WorkPattern& p) {
  Json lines = Json::array();
  std::istringstream is(write_pattern(p));
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  return lines;
}

// Events of one job are grouped into series (one per solve); incumbent and
// bound are monotone within a series.
class TraceWriter {
 public:
  TraceWriter(JobStore& store, std::string id) : store_(store), id_(std::move(id)) {}
  ProgressSink sink(const std::string& series) {
    return [this, series](const ProgressEvent& ev) {
      Json j = progress_to_json(ev);
      if (!series.empty()) j["series"] = series;
      store_.append_trace(id_, j.dump() + "\n");
    };
  }

 private:
  JobStore& store_;
  std::string id_;
};

Json optimization_json(const RosterInstance& in, const OptimizationResult& r) { return result_to_json(in, r); }

}  // namespace

JobManager::JobManager(std::shared_ptr<JobStore> store, int workers) : store_(std::move(store)) {
  if (workers < 1) throw InvalidInputError("at least one worker is required");
  // Recover from a restart: queued jobs run again, running ones were lost.
  for (const JobRecord& job : store_->list()) {
    if (job.state == JobState::kQueued) {
      queue_.push_back(job.id);
      cancel_[job.id] = std::make_shared<std::atomic<bool>>(false);
    } else if (job.state == JobState::kRunning) {
      store_->transition(job.id, JobState::kFailed, "interrupted by a service restart");
    }
  }
  for (int i = 0; i < workers; ++i) workers_.emplace_back([this] { worker_loop(); });
}

JobManager::~JobManager() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
    for (auto& [_, token] : cancel_) token->store(true);
  }
  cv_.notify_all();
  for (auto& t : workers_) t.join();
}

JobRecord JobManager::enqueue(JobKind kind, const Json& config, const std::optional<RosterInstance>& instance,
                              const std::string& parent) {
  const JobRecord job = store_->create(kind, config, instance, parent);
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(job.id);
    cancel_[job.id] = std::make_shared<std::atomic<bool>>(false);
  }
  cv_.notify_one();
  return job;
}

JobRecord JobManager::submit(const Json& request) {
  only_keys(request, {"kind", "instance", "instance_id", "config", "weights", "periods", "adaptive", "pattern",
                      "parent", "changes", "bench"});
  if (!request.contains("kind") || !request["kind"].is_string()) throw FormatError("missing job kind", 0, "/kind");
  const auto kind = parse_job_kind(request["kind"].get<std::string>());
  if (!kind) throw FormatError("unknown job kind", 0, "/kind");
  if (*kind == JobKind::kEventReoptimize) {
    if (!request.contains("parent") || !request["parent"].is_string()) {
      throw FormatError("event jobs need the parent job id", 0, "/parent");
    }
    Json rest = request;
    rest.erase("kind");
    const std::string parent = rest["parent"].get<std::string>();
    rest.erase("parent");
    return submit_changes(parent, rest);
  }
  const auto allowed_for = [&](std::set<std::string> extra) {
    extra.insert({"kind", "instance", "instance_id", "config", "weights"});
    only_keys(request, extra);
  };

  Json config;
  config["kind"] = to_string(*kind);
  config["config"] = config_to_json(config_from_json(request.value("config", Json::object())));
  config["weights"] = weights_to_json(weights_from_json(request.value("weights", Json::object())));

  if (*kind == JobKind::kBenchmark) {
    allowed_for({"bench"});
    config["bench"] = bench_config_to_json(bench_config_from_json(request.value("bench", Json::object())));
    return enqueue(*kind, config, std::nullopt, {});
  }

  std::optional<RosterInstance> instance;
  if (request.contains("instance")) {
    instance = instance_from_json(request["instance"]);
  } else if (request.contains("instance_id")) {
    if (!request["instance_id"].is_string()) throw FormatError("expected a string", 0, "/instance_id");
    config["instance_id"] = request["instance_id"];
    instance = store_->stored_instance(request["instance_id"].get<std::string>());
  } else {
    throw FormatError("an instance or instance_id is required", 0, "/instance");
  }
  const ValidationReport report = validate_instance(*instance);
  if (!report.ok()) throw FormatError(report.issues.front(), 0, "/instance");

  switch (*kind) {
    case JobKind::kOptimize: allowed_for({}); break;
    case JobKind::kRollingHorizon: {
      allowed_for({"periods", "adaptive"});
      const int periods = int_field(request, "periods", 1);
      if (periods < 1 || instance->weeks % periods != 0) {
        throw FormatError("periods must divide the number of weeks", 0, "/periods");
      }
      config["periods"] = periods;
      config["adaptive"] = bool_field(request, "adaptive", true);
      break;
    }
    case JobKind::kPatterns: {
      allowed_for({"pattern"});
      if (!request.contains("pattern")) throw FormatError("a pattern is required", 0, "/pattern");
      config["pattern"] = pattern_lines(pattern_field(request["pattern"]));
      break;
    }
    default: break;
  }
  return enqueue(*kind, config, instance, {});
}

JobRecord JobManager::submit_changes(const std::string& parent_id, const Json& request) {
  const JobRecord parent = store_->get(parent_id);
  if (parent.state != JobState::kDone) {
    throw ConflictError("job " + parent_id + " is " + to_string(parent.state) + "; change requests need a finished job");
  }
  const auto result = store_->result(parent_id);
  if (!result || !result->contains("roster")) {
    throw ConflictError("job " + parent_id + " has no roster to re-optimize");
  }
  Json body = request;
  if (body.is_object() && !body.contains("changes")) {
    throw FormatError("a list of changes is required", 0, "/changes");
  }
  only_keys(body, {"changes", "config", "weights"});
  const RosterInstance instance = store_->instance(parent_id);
  const std::vector<ChangeRequest> changes = changes_from_json(body["changes"]);
  apply_changes(instance, changes);  // rejects conflicts before queueing

  const Json parent_config = store_->config(parent_id);
  Json config;
  config["kind"] = to_string(JobKind::kEventReoptimize);
  config["parent"] = parent_id;
  config["config"] = config_to_json(
      config_from_json(body.value("config", Json::object()), config_from_json(parent_config.at("config"))));
  config["weights"] = weights_to_json(
      body.contains("weights") ? weights_from_json(body["weights"]) : weights_from_json(parent_config.at("weights")));
  Json list = Json::array();
  for (const ChangeRequest& c : changes) list.push_back(change_to_json(c));
  config["changes"] = std::move(list);
  return enqueue(JobKind::kEventReoptimize, config, instance, parent_id);
}

JobRecord JobManager::cancel(const std::string& id) {
  JobRecord job = store_->get(id);
  std::lock_guard lock(mutex_);
  job = store_->get(id);
  if (is_terminal(job.state)) throw ConflictError("job " + id + " is already " + to_string(job.state));
  if (auto it = cancel_.find(id); it != cancel_.end()) it->second->store(true);
  if (job.state == JobState::kQueued) {
    queue_.erase(std::remove(queue_.begin(), queue_.end(), id), queue_.end());
    job = store_->transition(id, JobState::kCancelled, "cancelled before it started");
    done_cv_.notify_all();
  }
  return job;
}

JobRecord JobManager::wait(const std::string& id, double timeout_seconds) {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
  std::unique_lock lock(mutex_);
  while (true) {
    JobRecord job = store_->get(id);
    if (is_terminal(job.state)) return job;
    if (done_cv_.wait_until(lock, deadline) == std::cv_status::timeout) return store_->get(id);
  }
}

void JobManager::worker_loop() {
  while (true) {
    std::string id;
    {
      std::unique_lock lock(mutex_);
      cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      store_->transition(id, JobState::kRunning);
    }
    execute(store_->get(id));
    {
      std::lock_guard lock(mutex_);
      cancel_.erase(id);
    }
    done_cv_.notify_all();
  }
}

void JobManager::execute(const JobRecord& job) {
  std::shared_ptr<std::atomic<bool>> token;
  {
    std::lock_guard lock(mutex_);
    token = cancel_[job.id];
    if (!token) token = cancel_[job.id] = std::make_shared<std::atomic<bool>>(false);
  }
  const std::atomic<bool>* cancel = token.get();
  TraceWriter trace(*store_, job.id);
  try {
    const Json config = store_->config(job.id);
    const HybridConfig hc = config_from_json(config.at("config"));
    const ObjectiveWeights weights = weights_from_json(config.at("weights"));
    Json result;

    switch (job.kind) {
      case JobKind::kOptimize: {
        const RosterInstance in = store_->instance(job.id);
        const OptimizationResult r = optimize(in, weights, hc, trace.sink(""), cancel);
        result = optimization_json(in, r);
        if (r.roster) store_->write_artifact(job.id, "roster.csv", write_roster_csv(in, *r.roster));
        break;
      }
      case JobKind::kEventReoptimize: {
        const RosterInstance in = store_->instance(job.id);
        const Json parent_result = *store_->result(job.parent);
        const Roster original = roster_from_json(parent_result.at("roster"), in);
        const std::vector<ChangeRequest> changes = changes_from_json(config.at("changes"));
        const EventResult ev = reoptimize_event(in, original, changes, weights, hc, trace.sink(""), cancel);
        store_->set_instance(job.id, ev.updated);
        result = optimization_json(ev.updated, ev.result);
        result["deviation"] = ev.deviation;
        result["lock_until"] = ev.lock_until;
        result["parent"] = job.parent;
        if (ev.result.roster) store_->write_artifact(job.id, "roster.csv", write_roster_csv(ev.updated, *ev.result.roster));
        break;
      }
      case JobKind::kRollingHorizon: {
        const RosterInstance in = store_->instance(job.id);
        const int periods = config.at("periods").get<int>();
        const bool adaptive = config.at("adaptive").get<bool>();
        const RollingPlan plan = plan_rolling_horizon(
            in, periods, weights, hc, adaptive,
            [&](int period, const ProgressEvent& ev) { trace.sink("period " + std::to_string(period))(ev); }, cancel);
        Json ps = Json::array();
        for (const PeriodPlan& p : plan.periods) {
          ps.push_back({{"period", p.period},
                        {"objective", p.objective},
                        {"gap", p.gap},
                        {"status", to_string(p.status)},
                        {"roster", roster_to_json(p.instance, p.roster)},
                        {"statistics", statistics_to_json(p.instance, compute_statistics(p.instance, p.roster))}});
          store_->write_artifact(job.id, "period-" + std::to_string(p.period) + ".csv",
                                 write_roster_csv(p.instance, p.roster));
        }
        const auto annual = plan.annual_workload();
        const auto weekend = plan.annual_weekend_workload();
        result = {{"status", plan.complete() ? "complete" : "failed"},
                  {"periods", std::move(ps)},
                  {"annual_workload", annual},
                  {"annual_weekend_workload", weekend},
                  {"workload_std", standard_deviation(annual)},
                  {"weekend_workload_std", standard_deviation(weekend)},
                  {"error", plan.error}};
        break;
      }
      case JobKind::kPatterns: {
        const RosterInstance in = store_->instance(job.id);
        std::string text;
        for (const Json& line : config.at("pattern")) text += line.get<std::string>() + "\n";
        const PatternResult pr = optimize_with_patterns(in, read_pattern(text), weights, hc, trace.sink(""), cancel);
        result = optimization_json(in, pr.result);
        result["variants"] = pr.variants;
        result["stage1_objective"] = pr.stage1_objective;
        result["company_roster"] = roster_to_json(in, pr.company);
        result["f4"] = pr.f4;
        if (pr.result.roster) store_->write_artifact(job.id, "roster.csv", write_roster_csv(in, *pr.result.roster));
        break;
      }
      case JobKind::kBenchmark: {
        const BenchConfig bc = bench_config_from_json(config.at("bench"));
        const auto name = [](const BenchRun& run) {
          return std::string("bench/") + to_string(run.mode) + "-trial" + std::to_string(run.trial) + ".ndjson";
        };
        const BenchReport report = run_benchmark(
            bc,
            [&](const BenchRun& run) {
              store_->write_artifact(job.id, name(run), write_trace(run.trace));
              const ProgressSink s = trace.sink(std::string(to_string(run.mode)) + " trial " + std::to_string(run.trial));
              for (const ProgressEvent& ev : run.trace) s(ev);
            },
            cancel);
        result = bench_report_to_json(report, name);
        store_->write_artifact(job.id, "table.txt", format_table(report));
        break;
      }
    }
    store_->write_result(job.id, result);
    store_->transition(job.id, cancel->load() ? JobState::kCancelled : JobState::kDone);
  } catch (const std::exception& e) {
    store_->transition(job.id, cancel->load() ? JobState::kCancelled : JobState::kFailed, e.what());
  }
}

}  // namespace roster
