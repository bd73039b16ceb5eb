// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "testrisk/calibration.hpp"
#include "testrisk/estimation.hpp"
#include "testrisk/io.hpp"
#include "testrisk/matrix.hpp"
#include "testrisk/planning.hpp"
#include "testrisk/service.hpp"

using namespace testrisk;

namespace {

struct Check {
  std::string detail;
  bool ok = true;

  void expect(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

template <typename Fn>
void criterion(const std::string& name, Fn&& body) {
  Check check;
  try {
    body(check);
  } catch (const std::exception& e) {
    check.ok = false;
    check.detail = std::string("exception: ") + e.what();
  }
  if (check.ok) {
    std::cout << "PASS  " << name << "\n";
  } else {
    ++failures;
    std::cout << "FAIL  " << name << " -- " << check.detail << "\n";
  }
}

}  // namespace

int main() {
  criterion("example risk matrix reproduced exactly", [](Check& c) {
    const auto start = std::chrono::steady_clock::now();
    const RiskMatrix m = build_risk_matrix(default_level_plans(), make_direct_prediction(800),
                                           default_scope_matrix());
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double staff_weeks[] = {6, 12, 32, 60, 80};
    const std::int64_t delivered[] = {720, 560, 320, 120, 40};
    c.expect(m.rows.size() == 5, "expected five levels");
    for (std::size_t i = 0; i < m.rows.size() && i < 5; ++i) {
      c.expect(m.rows[i].staff_weeks == staff_weeks[i], "staff-weeks row");
      c.expect(m.rows[i].delivered.display == delivered[i], "delivered row");
    }
    c.expect(elapsed < 1.0, "runtime over 1 s");
  });

  criterion("example scope matrix reproduced and round-trips", [](Check& c) {
    const ScopeMatrix scope = default_scope_matrix();
    const std::vector<std::vector<std::string>> grid = {
        {"Sanity", "Yes", "Yes", "Yes", "Yes", "Yes"},
        {"Features", "Subset", "Changed/New", "Most", "All", "All"},
        {"Regression", "No", "No", "Minimal", "Good", "Complete"},
        {"Stress", "No", "No", "No", "Good", "Complete"},
        {"Load", "No", "No", "Minimal", "Good", "Complete"}};
    c.expect(scope.levels == std::vector<std::string>{"A", "B", "C", "D", "E"}, "scope labels");
    c.expect(scope.rows.size() == grid.size(), "activity count");
    for (std::size_t r = 0; r < scope.rows.size() && r < grid.size(); ++r) {
      std::vector<std::string> row{scope.rows[r].activity};
      row.insert(row.end(), scope.rows[r].grades.begin(), scope.rows[r].grades.end());
      c.expect(row == grid[r], "row " + grid[r][0]);
    }
    const auto parsed = io::parse_csv(io::render_scope(scope, io::Format::kCsv));
    c.expect(parsed.size() == grid.size() + 1, "rendered row count");
    for (std::size_t r = 0; r < grid.size() && r + 1 < parsed.size(); ++r) {
      c.expect(parsed[r + 1] == grid[r], "rendered row " + grid[r][0]);
    }
    PlanDocument doc = default_plan_document();
    c.expect(io::load_plan(io::save_plan(doc)).scope_matrix == scope, "plan round trip");
  });

  criterion("backfiring and defect prediction", [](Check& c) {
    const SizeEstimate size{100000, 125, 1.0};
    c.expect(backfire_function_points(size) == 800.0, "800 function points");
    const DefectPrediction p = predict_defects_from_fp(backfire_function_points(size), {1.0, 8.0, 1.0}, {0.8125, 1.75});
    c.expect(p.low == 650.0 && p.nominal == 800.0 && p.high == 1400.0, "(650, 800, 1400)");
  });

  criterion("effectiveness formula properties", [](Check& c) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long long> count(0, 100000);
    std::uniform_int_distribution<long long> scale(2, 50);
    auto efficiency = [](long long n, long long s) {
      const ReleaseHistory h{"r", std::nullopt, {{"test", 1, n}, {"field", 2, s}}};
      return dre_of_phase(h, "test").efficiency;
    };
    int pairs = 0;
    while (pairs < 1000) {
      const long long n = count(rng), s = count(rng);
      if (n + s == 0) continue;
      ++pairs;
      const double e = efficiency(n, s);
      c.expect(std::abs(e - oracle::effectiveness(n, s)) < 1e-15, "matches N/(N+S)");
      if (s == 0) c.expect(e == 1.0, "E(N,0) = 1");
      if (n == 0) c.expect(e == 0.0, "E(0,S) = 0");
      if (n > 0) c.expect(efficiency(n, 0) == 1.0, "E(N,0) = 1");
      if (s > 0) {
        c.expect(efficiency(0, s) == 0.0, "E(0,S) = 0");
        c.expect(efficiency(n + 1, s) > e, "strictly increasing in N");
      }
      const long long k = scale(rng);
      c.expect(std::abs(efficiency(n * k, s * k) - e) < 1e-12, "ratio invariance");
    }
  });

  criterion("delivered defects match the reference evaluation", [](Check& c) {
    for (int pi = 0; pi <= 20; ++pi) {
      const double p = 50.0 * pi;
      for (int di = 0; di < 20; ++di) {
        const double d = 0.05 * di;
        const DeliveredDefects got = delivered_defects(p, d);
        c.expect(std::abs(got.exact - oracle::delivered_exact(p, d)) <= 1e-12,
                 "exact at p=" + std::to_string(p) + " d=" + std::to_string(d));
        c.expect(got.display == oracle::delivered_display(p, d),
                 "display at p=" + std::to_string(p) + " d=" + std::to_string(d));
      }
    }
  });

  criterion("validation flags each injected ordering violation once", [](Check& c) {
    const auto scope0 = default_scope_matrix();
    const auto plans0 = default_level_plans();
    const auto predicted = make_direct_prediction(800);
    c.expect(build_risk_matrix(plans0, predicted, scope0).report.empty(),
             "defaults produce findings");

    auto expect_one = [&](const std::vector<LevelPlan>& plans, const ScopeMatrix& scope,
                          const std::string& location) {
      const auto report = build_risk_matrix(plans, predicted, scope).report;
      c.expect(report.findings.size() == 1, location + ": expected one finding, got " +
                                                std::to_string(report.findings.size()));
      if (report.findings.size() == 1) {
        c.expect(report.findings[0].location == location,
                 location + ": reported at " + report.findings[0].location);
      }
    };
    for (int i = 1; i <= 4; ++i) {
      auto plans = plans0;
      plans[i].dre = plans[i - 1].dre - 0.01;
      expect_one(plans, scope0, "levels." + plans[i].level.name + ".dre");
    }
    const std::vector<std::tuple<std::string, std::string, std::string>> drops = {
        {"Features", "C", "Subset"}, {"Features", "E", "Most"}, {"Regression", "D", "No"},
        {"Sanity", "C", "No"},       {"Stress", "E", "No"},     {"Load", "D", "No"}};
    for (const auto& [activity, label, grade] : drops) {
      ScopeMatrix scope = scope0;
      for (auto& row : scope.rows) {
        if (row.activity == activity) row.grades[scope.level_index(label).value()] = grade;
      }
      expect_one(plans0, scope, "scope." + activity + "." + label);
    }
  });

  criterion("plan save/load canonical and CLI matches service", [](Check& c) {
    const PlanDocument doc = default_plan_document();
    const std::string first = io::save_plan(doc);
    c.expect(io::save_plan(doc) == first, "two saves differ");
    const PlanDocument loaded = io::load_plan(first);
    c.expect(loaded == doc, "load(save(doc)) != doc");
    c.expect(io::save_plan(loaded) == first, "save(load(save(doc))) differs");

    std::istringstream in(first);
    std::ostringstream out, err;
    const int code = cli::run({"testrisk", "matrix", "--config", "-", "--format", "json"}, in,
                              out, err);
    c.expect(code == cli::kExitOk, "CLI exit " + std::to_string(code) + ": " + err.str());
    service::Api api;
    const auto response = api.handle({"POST", "/api/matrix", {}, first});
    c.expect(response.status == 200, "API status " + std::to_string(response.status));
    c.expect(out.str() == response.body, "CLI JSON differs from API body");

    std::istringstream in2;
    std::ostringstream out2, err2;
    cli::run({"testrisk", "estimate", "--loc", "100000", "--loc-per-fp", "125",
              "--defects-per-fp", "1.0", "--json"},
             in2, out2, err2);
    const auto estimate = api.handle(
        {"POST", "/api/estimate", {}, R"({"loc": 100000, "loc_per_fp": 125, "defects_per_fp": 1.0})"});
    c.expect(out2.str() == estimate.body, "estimate JSON differs from API body");
  });

  criterion("worst-case scaling reproduces the staff-weeks row", [](Check& c) {
    const auto plans = worst_case_scaling(default_level_plans().back());
    const double expected[] = {6, 12, 32, 60, 80};
    c.expect(plans.size() == 5, "expected five levels");
    for (std::size_t i = 0; i < plans.size() && i < 5; ++i) {
      c.expect(plans[i].staff * plans[i].calendar_weeks == expected[i],
               "level " + plans[i].level.name);
    }
  });

  std::cout << (failures == 0 ? "all acceptance criteria passed" : "acceptance FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}
