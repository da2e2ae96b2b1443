#include <chrono>
#include <cstdlib>
#include <fstream>

#include "httplib.h"
#include "roster/generator.hpp"
#include "roster/service.hpp"

namespace roster {

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(1) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message, const Json& extra = Json::object()) {
  Json body{{"error", message}};
  for (const auto& [k, v] : extra.items()) body[k] = v;
  send_json(res, status, body);
}

// Maps library exceptions onto status codes.
template <typename F>
void guarded(httplib::Response& res, F&& handler) {
  try {
    handler();
  } catch (const NotFoundError& e) {
    send_error(res, 404, e.what());
  } catch (const ConflictError& e) {
    send_error(res, 409, e.what());
  } catch (const ChangeConflictError& e) {
    Json coords = Json::array();
    for (const auto& c : e.coordinates()) coords.push_back({{"employee", c[0]}, {"block", c[1]}});
    send_error(res, 400, e.what(), {{"coordinates", coords}});
  } catch (const FormatError& e) {
    Json extra = Json::object();
    if (!e.field().empty()) extra["field"] = e.field();
    if (e.line() > 0) extra["line"] = e.line();
    send_error(res, 400, e.what(), extra);
  } catch (const InvalidInputError& e) {
    send_error(res, 400, e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

std::size_t bytes_in(const std::filesystem::path& p) {
  std::error_code ec;
  const auto n = std::filesystem::file_size(p, ec);
  return ec ? 0 : static_cast<std::size_t>(n);
}

}  // namespace

ServiceOptions ServiceOptions::from_env() {
  ServiceOptions o;
  if (const char* v = std::getenv("ROSTER_DATA_DIR"); v && *v) o.data_dir = v;
  if (const char* v = std::getenv("ROSTER_HOST"); v && *v) o.host = v;
  const auto integer = [](const char* name, int& into) {
    const char* v = std::getenv(name);
    if (!v || !*v) return;
    try {
      into = std::stoi(v);
    } catch (const std::exception&) {
      throw InvalidInputError(std::string(name) + " must be an integer, got '" + v + "'");
    }
  };
  integer("ROSTER_PORT", o.port);
  integer("ROSTER_WORKERS", o.workers);
  return o;
}

Service::Service(const ServiceOptions& options)
    : options_(options),
      store_(std::make_shared<JobStore>(options.data_dir)),
      manager_(std::make_unique<JobManager>(store_, options.workers)),
      server_(std::make_unique<httplib::Server>()) {
  routes();
}

Service::~Service() { stop(); }

bool Service::listen() { return server_->listen(options_.host, options_.port); }

int Service::start_background() {
  const int port = server_->bind_to_any_port(options_.host);
  if (port < 0) throw RosterError("cannot bind a port on " + options_.host);
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void Service::routes() {
  httplib::Server& s = *server_;
  JobManager& jobs = *manager_;
  JobStore& store = *store_;

  s.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"status", "ok"}}); });

  s.Post("/v1/instances", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const RosterInstance in = read_instance(req.body);
      const ValidationReport report = validate_instance(in);
      if (!report.ok()) throw FormatError(report.issues.front(), 0, "");
      const std::string id = store.put_instance(in);
      res.set_header("Location", "/v1/instances/" + id);
      send_json(res, 201, {{"id", id}, {"employees", in.employees}, {"weeks", in.weeks}});
    });
  });

  s.Post("/v1/instances/generate", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Json body = req.body.empty() ? Json::object() : parse_json(req.body);
      if (!body.is_object()) throw FormatError("expected an object", 0, "/");
      GeneratorConfig cfg;
      std::uint64_t seed = 1;
      for (const auto& [key, v] : body.items()) {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw FormatError("expected a nonnegative integer", 0, "/" + key);
        const int x = v.get<int>();
        if (key == "employees") {
          cfg.employees = x;
        } else if (key == "weeks") {
          cfg.weeks = x;
        } else if (key == "shift_types") {
          cfg.shift_types = x;
        } else if (key == "seed") {
          seed = v.get<std::uint64_t>();
        } else {
          throw FormatError("unknown field", 0, "/" + key);
        }
      }
      const RosterInstance in = generate_instance(cfg, seed);
      const std::string id = store.put_instance(in);
      res.set_header("Location", "/v1/instances/" + id);
      send_json(res, 201, {{"id", id}, {"employees", in.employees}, {"weeks", in.weeks}});
    });
  });

  s.Get("/v1/instances", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, {{"instances", store.instance_ids()}}); });
  });

  s.Get(R"(/v1/instances/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      res.set_content(write_instance(store.stored_instance(req.matches[1])), "application/json");
    });
  });

  s.Post("/v1/jobs", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const JobRecord job = jobs.submit(parse_json(req.body));
      res.set_header("Location", "/v1/jobs/" + job.id);
      send_json(res, 201, job_to_json(job));
    });
  });

  s.Get("/v1/jobs", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::optional<JobState> only;
      if (req.has_param("state")) {
        only = parse_job_state(req.get_param_value("state"));
        if (!only) throw FormatError("unknown state", 0, "state");
      }
      Json list = Json::array();
      for (const JobRecord& job : store.list()) {
        if (!only || job.state == *only) list.push_back(job_to_json(job));
      }
      send_json(res, 200, {{"jobs", list}});
    });
  });

  s.Get(R"(/v1/jobs/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      Json body = job_to_json(store.get(req.matches[1]));
      body["config"] = store.config(req.matches[1]);
      send_json(res, 200, body);
    });
  });

  s.Post(R"(/v1/jobs/([^/]+)/cancel)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, job_to_json(jobs.cancel(req.matches[1]))); });
  });

  s.Get(R"(/v1/jobs/([^/]+)/instance)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { res.set_content(write_instance(store.instance(req.matches[1])), "application/json"); });
  });

  s.Get(R"(/v1/jobs/([^/]+)/result)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const JobRecord job = store.get(req.matches[1]);
      const auto result = store.result(job.id);
      if (!result) {
        if (job.state == JobState::kFailed) throw ConflictError("job " + job.id + " failed: " + job.error);
        throw ConflictError("job " + job.id + " is " + to_string(job.state) + " and has no result yet");
      }
      Json body = *result;
      body["job"] = job_to_json(job);
      send_json(res, 200, body);
    });
  });

  s.Get(R"(/v1/jobs/([^/]+)/roster\.csv)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto csv = store.artifact(req.matches[1], "roster.csv");
      if (!csv) throw NotFoundError("job " + std::string(req.matches[1]) + " has no roster");
      res.set_content(*csv, "text/csv");
    });
  });

  s.Get(R"(/v1/jobs/([^/]+)/artifacts/(.+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto content = store.artifact(req.matches[1], req.matches[2]);
      if (!content) throw NotFoundError("no artifact " + std::string(req.matches[2]));
      res.set_content(*content, "application/octet-stream");
    });
  });

  s.Post(R"(/v1/jobs/([^/]+)/changes)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const JobRecord job = jobs.submit_changes(req.matches[1], parse_json(req.body));
      res.set_header("Location", "/v1/jobs/" + job.id);
      send_json(res, 201, job_to_json(job));
    });
  });

  // Newline-delimited progress records, streamed until the job is terminal.
  s.Get(R"(/v1/jobs/([^/]+)/events)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      store.get(id);
      const std::filesystem::path file = store.job_dir(id) / "trace.ndjson";
      auto offset = std::make_shared<std::size_t>(0);
      res.set_chunked_content_provider("application/x-ndjson", [&store, id, file, offset](std::size_t,
                                                                                          httplib::DataSink& sink) {
        while (sink.is_writable()) {
          // Read the state first so that lines written before a terminal
          // transition are never missed.
          const bool terminal = is_terminal(store.get(id).state);
          const std::size_t size = bytes_in(file);
          if (size > *offset) {
            std::ifstream f(file, std::ios::binary);
            f.seekg(static_cast<std::streamoff>(*offset));
            std::string chunk(size - *offset, '\0');
            f.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
            chunk.resize(static_cast<std::size_t>(f.gcount()));
            const auto last = chunk.rfind('\n');
            if (last != std::string::npos) {
              chunk.resize(last + 1);
              *offset += chunk.size();
              if (!sink.write(chunk.data(), chunk.size())) return false;
              continue;
            }
          }
          if (terminal) {
            sink.done();
            return true;
          }
          std::this_thread::sleep_for(std::chrono::milliseconds(50));
        }
        return false;
      });
    });
  });
}

}  // namespace roster
