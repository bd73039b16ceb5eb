#include "testrisk/planning.hpp"

#include <algorithm>
#include <cmath>

#include "number_format.hpp"
#include "testrisk/error.hpp"

namespace testrisk {
namespace {

using detail::format_number;

constexpr double kFractionTolerance = 1e-12;

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

void check_fractions(const std::vector<double>& f, std::size_t levels,
                     const std::string& what) {
  if (f.size() != levels) {
    throw Error(ErrorCode::kInvalidProfile,
                what + " has " + std::to_string(f.size()) +
                    " entries for " + std::to_string(levels) + " levels",
                what);
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i]) || f[i] < 0.0 || f[i] > 1.0) {
      throw Error(ErrorCode::kInvalidProfile,
                  what + " entries must lie in [0, 1]",
                  what + "[" + std::to_string(i) + "]");
    }
    if (i > 0 && f[i] < f[i - 1]) {
      throw Error(ErrorCode::kInvalidProfile,
                  what + " must be nondecreasing",
                  what + "[" + std::to_string(i) + "]");
    }
  }
  if (std::abs(f.back() - 1.0) > kFractionTolerance) {
    throw Error(ErrorCode::kInvalidProfile, what + " must end at 1",
                what + "[" + std::to_string(f.size() - 1) + "]");
  }
}

// --- override value coercion ----------------------------------------------

[[noreturn]] void type_error(const std::string& path, const char* expected) {
  throw Error(ErrorCode::kInvariantViolation,
              path + " expects " + std::string(expected), path);
}

double as_number(const OverrideValue& v, const std::string& path) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (auto d = detail::parse_number(*s)) return *d;
  }
  type_error(path, "a number");
}

bool as_bool(const OverrideValue& v, const std::string& path) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (*s == "true") return true;
    if (*s == "false") return false;
  }
  type_error(path, "true or false");
}

std::string as_string(const OverrideValue& v, const std::string& path) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  type_error(path, "a label");
}

[[noreturn]] void bad_path(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::kBadOverridePath,
              "cannot apply override '" + path + "': " + why, path);
}

LevelPlan& find_level(PlanDocument& doc, const std::string& key,
                      const std::string& path) {
  auto name = resolve_level_name(doc, key);
  if (!name) bad_path(path, "no level or scope named " + key);
  for (auto& plan : doc.levels) {
    if (plan.level.name == *name) return plan;
  }
  bad_path(path, "no level named " + key);
}

void apply_level_override(PlanDocument& doc, const std::string& path,
                          const std::vector<std::string>& parts,
                          const OverrideValue& value) {
  if (parts.size() != 3) bad_path(path, "expected levels.<LEVEL>.<field>");
  LevelPlan& plan = find_level(doc, parts[1], path);
  const std::string& field = parts[2];
  if (field == "dre") {
    const double dre = as_number(value, path);
    if (!std::isfinite(dre) || dre < 0.0 || dre >= 1.0) {
      throw Error(ErrorCode::kInvariantViolation,
                  "dre < 1 required (and >= 0), got " + format_number(dre),
                  path);
    }
    plan.dre = dre;
  } else if (field == "staff") {
    const double staff = as_number(value, path);
    if (!(staff >= 0.0) || staff != std::floor(staff) || staff > 1e9) {
      throw Error(ErrorCode::kInvariantViolation,
                  "staff must be a whole number >= 0", path);
    }
    plan.staff = static_cast<int>(staff);
  } else if (field == "calendar_weeks") {
    const double weeks = as_number(value, path);
    if (!std::isfinite(weeks) || weeks < 0.0) {
      throw Error(ErrorCode::kInvariantViolation,
                  "calendar_weeks must be >= 0", path);
    }
    plan.calendar_weeks = weeks;
  } else if (field == "scope") {
    auto label = as_string(value, path);
    if (!doc.scope_matrix.level_index(label)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "scope '" + label + "' is not a scope matrix column", path);
    }
    plan.scope_label = std::move(label);
  } else if (field == "intensity") {
    plan.intensity = as_string(value, path);
  } else if (field == "environment") {
    plan.environment = as_string(value, path);
  } else {
    bad_path(path, "unknown level field " + field);
  }
}

void apply_scope_override(PlanDocument& doc, const std::string& path,
                          const std::vector<std::string>& parts,
                          const OverrideValue& value) {
  if (parts.size() != 3) bad_path(path, "expected scope.<ACTIVITY>.<LEVEL>");
  auto& scope = doc.scope_matrix;
  auto row = std::find_if(scope.rows.begin(), scope.rows.end(),
                          [&](const auto& r) { return r.activity == parts[1]; });
  if (row == scope.rows.end()) bad_path(path, "no activity " + parts[1]);
  auto index = scope.level_index(parts[2]);
  if (!index) bad_path(path, "no scope level " + parts[2]);
  auto grade = as_string(value, path);
  if (!row->scale.rank_of(grade)) {
    throw Error(ErrorCode::kInvariantViolation,
                "grade '" + grade + "' is not on the " + row->scale.name +
                    " scale",
                path);
  }
  row->grades[*index] = std::move(grade);
}

void apply_option_override(PlanDocument& doc, const std::string& path,
                           const OverrideValue& value) {
  if (path == "options.strict_validation") {
    doc.options.strict_validation = as_bool(value, path);
  } else if (path == "options.never_zero_clamp") {
    doc.options.never_zero_clamp = as_bool(value, path);
  } else if (path == "options.composition.enabled") {
    doc.options.composition.enabled = as_bool(value, path);
  } else {
    bad_path(path, "unknown option");
  }
}

Selection make_selection(const RiskMatrix& matrix, const std::string& level) {
  const LevelRow* row = matrix.find(level);
  return {row->plan.level.name, row->plan.scope_label, row->delivered,
          row->staff_weeks, row->plan.calendar_weeks};
}

std::optional<Selection> selection_of(const EvaluatedPlan& plan) {
  if (!plan.selected_level) return std::nullopt;
  return make_selection(plan.matrix, *plan.selected_level);
}

}  // namespace

// ---------------------------------------------------------------------------

StaffingEstimate estimate_staffing(const CaseLoad& load, const TestLevel& level,
                                   StaffingConstraint constraint) {
  if (!std::isfinite(load.execution_rate) || load.execution_rate <= 0.0) {
    throw Error(ErrorCode::kZeroRate, "execution rate must be > 0",
                "execution_rate");
  }
  if (!std::isfinite(constraint.value) || constraint.value <= 0.0) {
    throw Error(ErrorCode::kZeroConstraint,
                "staffing constraint must be > 0", "constraint");
  }
  auto it = load.cases_per_level.find(level.name);
  if (it == load.cases_per_level.end()) {
    throw Error(ErrorCode::kInvalidParams,
                "no case count for level " + level.name,
                "cases_per_level." + level.name);
  }
  if (it->second < 0) {
    throw Error(ErrorCode::kInvalidParams, "case count must be >= 0",
                "cases_per_level." + level.name);
  }
  StaffingEstimate out;
  out.staff_weeks = static_cast<double>(it->second) / load.execution_rate;
  if (out.staff_weeks == 0.0) return {};

  if (constraint.kind == StaffingConstraint::Kind::kStaff) {
    if (constraint.value != std::floor(constraint.value)) {
      throw Error(ErrorCode::kZeroConstraint,
                  "staff constraint must be a whole head count", "constraint");
    }
    out.staff = static_cast<int>(constraint.value);
  } else {
    out.staff = static_cast<int>(std::ceil(out.staff_weeks / constraint.value));
  }
  out.calendar_weeks = out.staff_weeks / out.staff;
  return out;
}

ScalingProfile default_scaling_profile() {
  return {{6.0 / 80.0, 12.0 / 80.0, 32.0 / 80.0, 60.0 / 80.0, 1.0},
          std::vector<double>{2.0 / 5.0, 2.0 / 5.0, 4.0 / 5.0, 1.0, 1.0}};
}

std::vector<LevelPlan> worst_case_scaling(const LevelPlan& worst,
                                          const std::vector<LevelPlan>& ladder,
                                          const ScalingProfile& profile) {
  validate(worst);
  if (ladder.empty()) {
    throw Error(ErrorCode::kInvalidProfile, "level ladder is empty", "ladder");
  }
  check_fractions(profile.staff_weeks_fractions, ladder.size(),
                  "staff_weeks_fractions");
  if (profile.staff_fractions) {
    check_fractions(*profile.staff_fractions, ladder.size(),
                    "staff_fractions");
  }

  const double worst_staff_weeks = worst.staff * worst.calendar_weeks;
  std::vector<LevelPlan> out;
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    LevelPlan plan = ladder[i];
    const double staff_weeks =
        worst_staff_weeks * profile.staff_weeks_fractions[i];
    if (staff_weeks == 0.0) {
      plan.staff = 0;
      plan.calendar_weeks = 0.0;
    } else {
      const double share =
          profile.staff_fractions ? (*profile.staff_fractions)[i] : 1.0;
      plan.staff = std::max<int>(
          1, static_cast<int>(std::llround(worst.staff * share)));
      plan.calendar_weeks = staff_weeks / plan.staff;
    }
    out.push_back(std::move(plan));
  }
  LevelPlan top = worst;
  top.level = ladder.back().level;
  out.push_back(std::move(top));
  return out;
}

// ---------------------------------------------------------------------------

double composed_dre(const ScopeMatrix& scope, std::string_view scope_label,
                    const CompositionOptions& composition) {
  auto index = scope.level_index(scope_label);
  if (!index) {
    throw Error(ErrorCode::kInvalidPlan,
                "scope '" + std::string(scope_label) + "' is not a column",
                "scope_matrix.levels");
  }
  double escape = 1.0;
  for (const auto& row : scope.rows) {
    auto e = composition.effectiveness.find(row.activity);
    if (e == composition.effectiveness.end()) continue;
    const auto& grade = row.grades.at(*index);
    auto w = composition.grade_weights.find(grade);
    if (w == composition.grade_weights.end()) {
      throw Error(ErrorCode::kInvalidPlan,
                  "no composition weight for grade '" + grade + "'",
                  "options.composition.grade_weights");
    }
    escape *= 1.0 - e->second * w->second;
  }
  return 1.0 - escape;
}

EvaluatedPlan evaluate_plan(const PlanDocument& doc) {
  validate_structure(doc.scope_matrix);
  const DefectPrediction predicted = resolve_prediction(doc.prediction);
  std::vector<LevelPlan> plans = doc.levels;
  if (doc.options.composition.enabled) {
    for (const auto& [activity, e] : doc.options.composition.effectiveness) {
      if (!(e >= 0.0 && e < 1.0)) {
        throw Error(ErrorCode::kInvalidPlan,
                    "composition effectiveness must lie in [0, 1)",
                    "options.composition.effectiveness." + activity);
      }
    }
    for (const auto& [grade, w] : doc.options.composition.grade_weights) {
      if (!(w >= 0.0 && w <= 1.0)) {
        throw Error(ErrorCode::kInvalidPlan,
                    "composition weight must lie in [0, 1]",
                    "options.composition.grade_weights." + grade);
      }
    }
    for (auto& plan : plans) {
      if (doc.scope_matrix.level_index(plan.scope_label)) {
        plan.dre = composed_dre(doc.scope_matrix, plan.scope_label,
                                doc.options.composition);
      }
    }
  }
  EvaluatedPlan out;
  if (doc.selected_level) {
    out.selected_level = resolve_level_name(doc, *doc.selected_level);
    if (!out.selected_level) {
      throw Error(ErrorCode::kInvalidPlan,
                  "selected level '" + *doc.selected_level + "' not found",
                  "selected_level");
    }
  }
  out.matrix = build_risk_matrix(std::move(plans), predicted,
                                 doc.scope_matrix, matrix_options(doc.options));
  out.scope = doc.scope_matrix;
  return out;
}

OverrideValue parse_override_value(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  if (auto d = detail::parse_number(text)) return *d;
  return std::string(text);
}

PlanDocument apply_overrides(const PlanDocument& base,
                             const Overrides& overrides) {
  PlanDocument doc = base;
  std::optional<double> nominal, low, high;

  for (const auto& [path, value] : overrides) {
    const auto parts = split(path, '.');
    const std::string& head = parts.front();
    if (path == "selected_level") {
      auto key = as_string(value, path);
      auto name = resolve_level_name(doc, key);
      if (!name) {
        throw Error(ErrorCode::kInvariantViolation,
                    "no level or scope named '" + key + "'", path);
      }
      doc.selected_level = *name;
    } else if (head == "levels") {
      apply_level_override(doc, path, parts, value);
    } else if (head == "scope") {
      apply_scope_override(doc, path, parts, value);
    } else if (head == "options") {
      apply_option_override(doc, path, value);
    } else if (head == "predicted" && parts.size() == 2) {
      const double v = as_number(value, path);
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorCode::kInvariantViolation,
                    "predicted defects must be >= 0", path);
      }
      if (parts[1] == "nominal") nominal = v;
      else if (parts[1] == "low") low = v;
      else if (parts[1] == "high") high = v;
      else bad_path(path, "unknown prediction field " + parts[1]);
    } else {
      bad_path(path, "unknown root '" + head + "'");
    }
  }

  if (nominal || low || high) {
    const DefectPrediction current = resolve_prediction(base.prediction);
    const RangeFactors& range = base.prediction.range;
    PredictionSpec spec = base.prediction;
    spec.method = PredictionMethod::kDirect;
    spec.function_points.reset();
    spec.nominal = nominal.value_or(current.nominal);
    spec.low = low ? *low : nominal ? *nominal * range.low : current.low;
    spec.high = high ? *high : nominal ? *nominal * range.high : current.high;
    if (!(*spec.low <= spec.nominal && spec.nominal <= *spec.high)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "prediction must satisfy low <= nominal <= high",
                  "predicted");
    }
    doc.prediction = spec;
  }
  return doc;
}

ScenarioResult apply_scenario(const Scenario& scenario) {
  if (!scenario.base) {
    throw Error(ErrorCode::kInvalidPlan, "scenario has no base plan", "base");
  }
  const EvaluatedPlan base = evaluate_plan(*scenario.base);
  const EvaluatedPlan what_if =
      evaluate_plan(apply_overrides(*scenario.base, scenario.overrides));

  ScenarioResult result;
  result.name = scenario.name;
  result.selection = selection_of(what_if);
  result.base_selection = selection_of(base);
  for (const auto& row : what_if.matrix.rows) {
    const LevelRow* before = base.matrix.find(row.plan.level.name);
    LevelDelta delta;
    delta.level = row.plan.level.name;
    delta.delivered_exact = row.delivered.exact - before->delivered.exact;
    delta.delivered_display = row.delivered.display - before->delivered.display;
    delta.staff_weeks = row.staff_weeks - before->staff_weeks;
    delta.calendar_weeks = row.plan.calendar_weeks - before->plan.calendar_weeks;
    result.deltas.push_back(delta);
  }
  result.matrix = what_if.matrix;
  result.scope = what_if.scope;
  return result;
}

ComparisonTable compare_scenarios(const std::vector<ScenarioResult>& results) {
  ComparisonTable table;
  if (results.empty()) return table;
  for (const auto& row : results.front().matrix.rows) {
    table.levels.push_back(row.plan.level.name);
  }
  for (const auto& result : results) {
    const auto& rows = result.matrix.rows;
    const bool same = rows.size() == table.levels.size() &&
                      std::equal(rows.begin(), rows.end(), table.levels.begin(),
                                 [](const LevelRow& r, const std::string& n) {
                                   return r.plan.level.name == n;
                                 });
    if (!same) {
      throw Error(ErrorCode::kMismatchedLadders,
                  "scenario '" + result.name +
                      "' uses a different level ladder",
                  result.name);
    }
    ComparisonColumn column;
    column.scenario = result.name;
    column.selection = result.selection;
    for (const auto& row : rows) {
      column.delivered.push_back(row.delivered);
      column.staff_weeks.push_back(row.staff_weeks);
      column.calendar_weeks.push_back(row.plan.calendar_weeks);
    }
    table.columns.push_back(std::move(column));
  }
  return table;
}

}  // namespace testrisk
