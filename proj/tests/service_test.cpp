#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "testrisk/io.hpp"
#include "testrisk/service.hpp"

using namespace testrisk;
using namespace testrisk::service;
using nlohmann::json;

namespace {

ApiResponse call(Api& api, std::string method, std::string path, std::string body = {},
                 std::map<std::string, std::string> query = {}) {
  return api.handle({std::move(method), std::move(path), std::move(query), std::move(body)});
}

std::string example_plan() { return io::save_plan(default_plan_document()); }

std::string new_session(Api& api) {
  const auto r = call(api, "POST", "/api/sessions", example_plan());
  EXPECT_EQ(r.status, 201) << r.body;
  return json::parse(r.body)["session_id"];
}

struct FakeClock {
  Clock::time_point t{};
  SessionStore::Now fn() {
    return [this] { return t; };
  }
};

}  // namespace

TEST(ApiTest, Health) {
  Api api;
  const auto r = call(api, "GET", "/api/health");
  EXPECT_EQ(r.status, 200);
  const json j = json::parse(r.body);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["version"], version());
}

TEST(ApiTest, Defaults) {
  Api api;
  const auto r = call(api, "GET", "/api/defaults");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, example_plan());
}

TEST(ApiTest, Estimate) {
  Api api;
  const auto r = call(api, "POST", "/api/estimate",
                      R"({"loc": 100000, "loc_per_fp": 125, "defects_per_fp": 1.0})");
  ASSERT_EQ(r.status, 200) << r.body;
  const json j = json::parse(r.body);
  EXPECT_EQ(j["nominal"], 800.0);
  EXPECT_EQ(j["low"], 650.0);
  EXPECT_EQ(j["high"], 1400.0);
  EXPECT_EQ(j["method"], "fp");

  EXPECT_EQ(call(api, "POST", "/api/estimate", "{oops").status, 400);
  EXPECT_EQ(call(api, "POST", "/api/estimate", R"({"loc": -1, "defects_per_fp": 1})").status, 422);
}

TEST(ApiTest, Matrix) {
  Api api;
  const auto r = call(api, "POST", "/api/matrix", example_plan());
  ASSERT_EQ(r.status, 200) << r.body;
  const json j = json::parse(r.body);
  std::vector<long long> delivered;
  for (const auto& level : j["levels"]) delivered.push_back(level["delivered_defects_display"]);
  EXPECT_EQ(delivered, (std::vector<long long>{720, 560, 320, 120, 40}));
  EXPECT_EQ(r.body, io::render_plan(evaluate_plan(default_plan_document()), io::Format::kJson));
}

TEST(ApiTest, MatrixInvariantViolation) {
  Api api;
  json plan = json::parse(example_plan());
  plan["levels"][3]["dre"] = 1.0;
  const auto r = call(api, "POST", "/api/matrix", plan.dump());
  EXPECT_EQ(r.status, 422);
  const json j = json::parse(r.body);
  EXPECT_EQ(j["error"], "invariant-violation");
  EXPECT_EQ(j["location"], "levels.HIGH.dre");
}

TEST(ApiTest, StrictValidationFailureListsFindings) {
  Api api;
  json plan = json::parse(example_plan());
  plan["levels"][3]["dre"] = 0.5;
  plan["options"]["strict_validation"] = true;
  const auto r = call(api, "POST", "/api/matrix", plan.dump());
  EXPECT_EQ(r.status, 422);
  const json j = json::parse(r.body);
  EXPECT_EQ(j["error"], "validation-error");
  ASSERT_FALSE(j["findings"].empty());
  EXPECT_EQ(j["findings"][0]["code"], "dre-non-monotone");
}

TEST(ApiTest, RoutingErrors) {
  Api api;
  EXPECT_EQ(call(api, "GET", "/nope").status, 404);
  EXPECT_EQ(call(api, "GET", "/api/nope").status, 404);
  EXPECT_EQ(call(api, "POST", "/api/health").status, 405);
  EXPECT_EQ(call(api, "GET", "/api/matrix").status, 405);
  EXPECT_EQ(call(api, "GET", "/api/sessions").status, 405);
}

TEST(ApiTest, SessionScenarioAndCompare) {
  Api api;
  const std::string id = new_session(api);
  const std::string base = "/api/sessions/" + id;

  auto r = call(api, "POST", base + "/scenarios",
                R"({"name": "go-high", "overrides": {"selected_level": "D"}})");
  ASSERT_EQ(r.status, 200) << r.body;
  json j = json::parse(r.body);
  EXPECT_EQ(j["name"], "go-high");
  EXPECT_EQ(j["selection"]["delivered_defects_display"], 120);
  EXPECT_EQ(j["base_selection"]["delivered_defects_display"], 320);
  EXPECT_EQ(j["selection_delta"]["delivered_defects_display"], -200);

  r = call(api, "POST", base + "/scenarios",
           R"({"name": "weak-high", "overrides": {"levels.HIGH.dre": 0.8}})");
  ASSERT_EQ(r.status, 200) << r.body;

  r = call(api, "GET", base + "/compare", {}, {{"names", "base,go-high,weak-high"}});
  ASSERT_EQ(r.status, 200) << r.body;
  j = json::parse(r.body);
  ASSERT_EQ(j["columns"].size(), 3u);
  EXPECT_EQ(j["columns"][0]["scenario"], "base");
  EXPECT_EQ(j["columns"][0]["selection"]["delivered_defects_display"], 320);
  EXPECT_EQ(j["columns"][1]["selection"]["delivered_defects_display"], 120);
  EXPECT_EQ(j["columns"][2]["delivered_defects_display"][3], 160);

  r = call(api, "GET", base + "/compare");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["columns"].size(), 2u);

  EXPECT_EQ(call(api, "GET", base + "/compare", {}, {{"names", "ghost"}}).status, 404);
}

TEST(ApiTest, ScenarioErrors) {
  Api api;
  const std::string id = new_session(api);
  const std::string path = "/api/sessions/" + id + "/scenarios";
  auto r = call(api, "POST", path, R"({"name": "x", "overrides": {"levels.NOPE.dre": 0.5}})");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(json::parse(r.body)["error"], "bad-override-path");
  r = call(api, "POST", path, R"({"name": "x", "overrides": {"levels.HIGH.dre": 1.0}})");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(json::parse(r.body)["error"], "invariant-violation");
  EXPECT_EQ(call(api, "POST", path, "not json").status, 400);
  EXPECT_EQ(call(api, "POST", "/api/sessions/unknown/scenarios", R"({"name": "x", "overrides": {}})")
                .status,
            404);
  EXPECT_EQ(call(api, "POST", "/api/sessions", "{}").status, 422);
}

TEST(ApiTest, DeleteSession) {
  Api api;
  const std::string id = new_session(api);
  const auto r = call(api, "DELETE", "/api/sessions/" + id);
  EXPECT_EQ(r.status, 204);
  EXPECT_TRUE(r.body.empty());
  EXPECT_EQ(call(api, "DELETE", "/api/sessions/" + id).status, 404);
  EXPECT_EQ(call(api, "GET", "/api/sessions/" + id + "/compare").status, 404);
}

TEST(SessionStoreTest, IdleSessionsExpire) {
  FakeClock clock;
  Api api(std::chrono::hours(1), clock.fn());
  const std::string id = new_session(api);
  const std::string path = "/api/sessions/" + id + "/compare";

  clock.t += std::chrono::minutes(50);
  EXPECT_EQ(call(api, "GET", path).status, 200);  // touches
  clock.t += std::chrono::minutes(50);
  EXPECT_EQ(call(api, "GET", path).status, 200);
  clock.t += std::chrono::minutes(61);
  EXPECT_EQ(call(api, "GET", path).status, 404);
  EXPECT_EQ(api.sessions().evict_expired(), 1u);
  EXPECT_EQ(api.sessions().size(), 0u);
}

TEST(SessionStoreTest, CreateEvictsExpired) {
  FakeClock clock;
  SessionStore store(std::chrono::seconds(10), clock.fn());
  store.create(default_plan_document());
  store.create(default_plan_document());
  clock.t += std::chrono::seconds(11);
  const std::string fresh = store.create(default_plan_document());
  EXPECT_EQ(store.size(), 1u);
  EXPECT_NE(store.find(fresh), nullptr);
}

TEST(SessionStoreTest, IdsAreUnique) {
  SessionStore store;
  std::set<std::string> ids;
  for (int i = 0; i < 200; ++i) ids.insert(store.create(default_plan_document()));
  EXPECT_EQ(ids.size(), 200u);
}

TEST(ApiConcurrencyTest, ParallelSessionsStayIsolated) {
  Api api;
  constexpr int kThreads = 8;
  std::vector<std::string> ids;
  for (int i = 0; i < kThreads; ++i) ids.push_back(new_session(api));
  std::atomic<int> failures{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      const std::string base = "/api/sessions/" + ids[t];
      for (int k = 0; k < 20; ++k) {
        const double dre = 0.61 + 0.01 * ((t + k) % 20);
        json body = {{"name", "s" + std::to_string(k)},
                     {"overrides", {{"levels.HIGH.dre", dre}}}};
        if (call(api, "POST", base + "/scenarios", body.dump()).status != 200) ++failures;
        if (call(api, "POST", "/api/matrix", example_plan()).status != 200) ++failures;
      }
      const auto r = call(api, "GET", base + "/compare");
      if (r.status != 200 || json::parse(r.body)["columns"].size() != 20u) ++failures;
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(api.sessions().size(), static_cast<std::size_t>(kThreads));
}

TEST(ServerTest, ServesOverHttp) {
  ServerConfig config;
  config.host = "127.0.0.1";
  config.port = 0;
  Server server(config);
  const int port = server.bind();
  ASSERT_GT(port, 0);
  std::thread runner([&] { server.run(); });
  for (int i = 0; i < 200 && !server.running(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);

  auto matrix = client.Post("/api/matrix", example_plan(), "application/json");
  ASSERT_TRUE(matrix);
  EXPECT_EQ(matrix->status, 200);
  EXPECT_EQ(matrix->body,
            io::render_plan(evaluate_plan(default_plan_document()), io::Format::kJson));

  auto session = client.Post("/api/sessions", example_plan(), "application/json");
  ASSERT_TRUE(session);
  ASSERT_EQ(session->status, 201);
  const std::string id = json::parse(session->body)["session_id"];
  auto scenario = client.Post("/api/sessions/" + id + "/scenarios",
                              R"({"name": "d", "overrides": {"selected_level": "D"}})",
                              "application/json");
  ASSERT_TRUE(scenario);
  EXPECT_EQ(scenario->status, 200);
  auto compare = client.Get("/api/sessions/" + id + "/compare?names=base,d");
  ASSERT_TRUE(compare);
  EXPECT_EQ(compare->status, 200);
  EXPECT_EQ(json::parse(compare->body)["columns"].size(), 2u);
  auto del = client.Delete("/api/sessions/" + id);
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 204);

  server.stop();
  runner.join();
}
