#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "testrisk/plan.hpp"
#include "testrisk/planning.hpp"

namespace testrisk::service {

using Clock = std::chrono::steady_clock;

/// One planning meeting: an immutable base plan plus named what-ifs.
struct Session {
  std::string id;
  std::shared_ptr<const PlanDocument> base_plan;
  std::map<std::string, Scenario> scenarios;
  Clock::time_point created_at;
  Clock::time_point last_touched;
  mutable std::mutex mutex;  ///< guards scenarios and last_touched
};

/// In-memory sessions with idle expiry. Lookups take a shared lock on the
/// index; mutations of one session lock only that session.
class SessionStore {
 public:
  using Now = std::function<Clock::time_point()>;

  explicit SessionStore(std::chrono::seconds ttl = std::chrono::hours(24),
                        Now now = [] { return Clock::now(); });

  std::string create(PlanDocument base);
  /// nullptr for unknown or idle-expired ids. Refreshes last_touched.
  std::shared_ptr<Session> find(const std::string& id);
  bool erase(const std::string& id);
  std::size_t evict_expired();
  std::size_t size() const;

 private:
  bool expired(const Session& s, Clock::time_point now) const;

  std::chrono::seconds ttl_;
  Now now_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// The HTTP contract without the socket: routes a request to the core
/// modules and renders their JSON. Thread-safe.
class Api {
 public:
  explicit Api(std::chrono::seconds session_ttl = std::chrono::hours(24),
               SessionStore::Now now = [] { return Clock::now(); });

  ApiResponse handle(const ApiRequest& request);
  SessionStore& sessions() { return sessions_; }

 private:
  ApiResponse create_session(const ApiRequest& request);
  ApiResponse post_scenario(const std::string& id, const ApiRequest& request);
  ApiResponse compare(const std::string& id, const ApiRequest& request);

  SessionStore sessions_;
};

struct ServerConfig {
  std::string host = "0.0.0.0";
  int port = 8080;  ///< 0 binds an ephemeral port
  std::chrono::seconds session_ttl = std::chrono::hours(24);
  std::optional<std::string> static_dir;
};

/// cpp-httplib front for Api.
class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the socket; returns the bound port. Throws std::runtime_error.
  int bind();
  /// Serves until stop(). Call bind() first.
  void run();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string version();

}  // namespace testrisk::service
