#include "testrisk/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "testrisk/io.hpp"
#include "testrisk/version.hpp"

namespace testrisk::service {
namespace {

using Json = nlohmann::ordered_json;

ApiResponse json_response(int status, const Json& body) {
  return {status, body.dump(2) + "\n"};
}

ApiResponse error_response(int status, const std::string& code,
                           const std::string& message,
                           const std::string& location = {}) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  if (!location.empty()) j["location"] = location;
  return json_response(status, j);
}

ApiResponse error_response(const Error& e) {
  const int status = e.code() == ErrorCode::kParseError ? 400 : 422;
  return {status, io::render_error(e)};
}

std::string new_session_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream out;
  out << std::hex;
  for (int i = 0; i < 2; ++i) {
    out.width(16);
    out.fill('0');
    out << rng();
  }
  return out.str();
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(path);
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::vector<std::string> split_names(const std::string& names) {
  std::vector<std::string> out;
  std::string name;
  std::istringstream in(names);
  while (std::getline(in, name, ',')) {
    if (!name.empty()) out.push_back(name);
  }
  return out;
}

}  // namespace

std::string version() { return TESTRISK_VERSION; }

// ---------------------------------------------------------------------------

SessionStore::SessionStore(std::chrono::seconds ttl, Now now)
    : ttl_(ttl), now_(std::move(now)) {}

bool SessionStore::expired(const Session& s, Clock::time_point now) const {
  std::lock_guard lock(s.mutex);
  return now - s.last_touched > ttl_;
}

std::string SessionStore::create(PlanDocument base) {
  evict_expired();
  auto session = std::make_shared<Session>();
  session->base_plan = std::make_shared<const PlanDocument>(std::move(base));
  session->created_at = session->last_touched = now_();
  std::unique_lock lock(mutex_);
  do {
    session->id = new_session_id();
  } while (sessions_.count(session->id));
  sessions_.emplace(session->id, session);
  return session->id;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) {
  std::shared_ptr<Session> session;
  {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    session = it->second;
  }
  const auto now = now_();
  std::lock_guard lock(session->mutex);
  if (now - session->last_touched > ttl_) return nullptr;
  session->last_touched = now;
  return session;
}

bool SessionStore::erase(const std::string& id) {
  std::unique_lock lock(mutex_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionStore::evict_expired() {
  const auto now = now_();
  std::unique_lock lock(mutex_);
  return std::erase_if(sessions_, [&](const auto& item) {
    return expired(*item.second, now);
  });
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

// ---------------------------------------------------------------------------

Api::Api(std::chrono::seconds session_ttl, SessionStore::Now now)
    : sessions_(session_ttl, std::move(now)) {}

ApiResponse Api::handle(const ApiRequest& request) {
  const auto parts = split_path(request.path);
  const std::string& m = request.method;
  try {
    if (parts.size() < 2 || parts[0] != "api") {
      return error_response(404, "not-found", "no route " + request.path);
    }
    const std::string& root = parts[1];
    if (parts.size() == 2 && root == "health") {
      if (m != "GET") return error_response(405, "method-not-allowed", m);
      Json j;
      j["status"] = "ok";
      j["version"] = version();
      return json_response(200, j);
    }
    if (parts.size() == 2 && root == "defaults") {
      if (m != "GET") return error_response(405, "method-not-allowed", m);
      return {200, io::save_plan(default_plan_document())};
    }
    if (parts.size() == 2 && root == "estimate") {
      if (m != "POST") return error_response(405, "method-not-allowed", m);
      auto result = io::run_estimate(io::parse_estimate_request(request.body));
      return {200, io::render_estimate(result, io::Format::kJson)};
    }
    if (parts.size() == 2 && root == "matrix") {
      if (m != "POST") return error_response(405, "method-not-allowed", m);
      auto plan = evaluate_plan(io::load_plan(request.body));
      return {200, io::render_plan(plan, io::Format::kJson)};
    }
    if (root == "sessions") {
      if (parts.size() == 2) {
        if (m != "POST") return error_response(405, "method-not-allowed", m);
        return create_session(request);
      }
      const std::string& id = parts[2];
      if (parts.size() == 3) {
        if (m != "DELETE") return error_response(405, "method-not-allowed", m);
        if (!sessions_.erase(id)) {
          return error_response(404, "unknown-session", "no session " + id);
        }
        return {204, "", "application/json"};
      }
      if (parts.size() == 4 && parts[3] == "scenarios") {
        if (m != "POST") return error_response(405, "method-not-allowed", m);
        return post_scenario(id, request);
      }
      if (parts.size() == 4 && parts[3] == "compare") {
        if (m != "GET") return error_response(405, "method-not-allowed", m);
        return compare(id, request);
      }
    }
    return error_response(404, "not-found", "no route " + request.path);
  } catch (const Error& e) {
    return error_response(e);
  }
}

ApiResponse Api::create_session(const ApiRequest& request) {
  PlanDocument doc = io::load_plan(request.body);
  // Reject plans that cannot be evaluated before handing out an id.
  evaluate_plan(doc);
  Json j;
  j["session_id"] = sessions_.create(std::move(doc));
  return json_response(201, j);
}

ApiResponse Api::post_scenario(const std::string& id,
                               const ApiRequest& request) {
  auto session = sessions_.find(id);
  if (!session) {
    return error_response(404, "unknown-session",
                          "no session " + id + " (expired or deleted)");
  }
  auto parsed = io::parse_scenario_request(request.body);
  Scenario scenario{parsed.name, session->base_plan,
                    std::move(parsed.overrides)};
  ScenarioResult result = apply_scenario(scenario);
  {
    std::lock_guard lock(session->mutex);
    session->scenarios[scenario.name] = std::move(scenario);
  }
  return {200, io::render_scenario(result, io::Format::kJson)};
}

ApiResponse Api::compare(const std::string& id, const ApiRequest& request) {
  auto session = sessions_.find(id);
  if (!session) {
    return error_response(404, "unknown-session",
                          "no session " + id + " (expired or deleted)");
  }
  std::vector<Scenario> selected;
  {
    std::lock_guard lock(session->mutex);
    auto q = request.query.find("names");
    std::vector<std::string> names;
    if (q != request.query.end()) {
      names = split_names(q->second);
    } else {
      for (const auto& [name, _] : session->scenarios) names.push_back(name);
    }
    for (const auto& name : names) {
      auto it = session->scenarios.find(name);
      if (it != session->scenarios.end()) {
        selected.push_back(it->second);
      } else if (name == "base") {
        selected.push_back({"base", session->base_plan, {}});
      } else {
        return error_response(404, "unknown-scenario",
                              "no scenario named " + name, "names");
      }
    }
  }
  std::vector<ScenarioResult> results;
  for (const auto& s : selected) results.push_back(apply_scenario(s));
  return {200, io::render_comparison(compare_scenarios(results),
                                     io::Format::kJson)};
}

// ---------------------------------------------------------------------------

struct Server::Impl {
  ServerConfig config;
  Api api;
  httplib::Server http;
  int port = -1;

  explicit Impl(ServerConfig c) : config(std::move(c)), api(config.session_ttl) {}
};

Server::Server(ServerConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request{req.method, req.path, {}, req.body};
    for (const auto& [key, value] : req.params) request.query[key] = value;
    ApiResponse response = impl_->api.handle(request);
    res.status = response.status;
    if (response.status != 204) {
      res.set_content(response.body, response.content_type);
    }
  };
  auto& http = impl_->http;
  http.Get("/api/.*", forward);
  http.Post("/api/.*", forward);
  http.Delete("/api/.*", forward);
  http.Put("/api/.*", forward);
  if (impl_->config.static_dir) {
    if (!http.set_mount_point("/", *impl_->config.static_dir)) {
      throw std::runtime_error("static dir not found: " +
                               *impl_->config.static_dir);
    }
  }
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& cfg = impl_->config;
  if (cfg.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(cfg.host);
  } else {
    impl_->port = impl_->http.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1;
  }
  if (impl_->port < 0) {
    throw std::runtime_error("cannot bind " + cfg.host + ":" +
                             std::to_string(cfg.port));
  }
  return impl_->port;
}

void Server::run() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

}  // namespace testrisk::service
