#include "testrisk/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "number_format.hpp"

namespace testrisk {
namespace {

using detail::format_number;

constexpr double kStaffWeeksTolerance = 1e-9;

bool contains(const std::vector<std::string>& labels, std::string_view label) {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

void check_row_grades(const ScopeRow& row, std::size_t level_count) {
  if (row.grades.size() != level_count) {
    throw Error(ErrorCode::kInvalidPlan,
                "activity " + row.activity + " has " +
                    std::to_string(row.grades.size()) + " grades, expected " +
                    std::to_string(level_count),
                "scope." + row.activity);
  }
  for (const auto& grade : row.grades) {
    if (!row.scale.rank_of(grade)) {
      throw Error(ErrorCode::kInvalidPlan,
                  "grade '" + grade + "' is not on scale " + row.scale.name,
                  "scope." + row.activity);
    }
  }
}

// Index of the first level whose grade ranks below its left neighbour.
std::optional<std::size_t> first_regression(const ScopeRow& row) {
  for (std::size_t i = 1; i < row.grades.size(); ++i) {
    if (*row.scale.rank_of(row.grades[i]) <
        *row.scale.rank_of(row.grades[i - 1])) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<TestLevel> default_level_ladder() {
  return {{"MINIMAL", 0}, {"LOW", 1}, {"MEDIUM", 2}, {"HIGH", 3},
          {"EXTENSIVE", 4}};
}

std::optional<int> GradeScale::rank_of(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<int>(it - labels.begin());
}

const GradeScale& binary_scale() {
  static const GradeScale scale{"binary", {"No", "Yes"}};
  return scale;
}

const GradeScale& coverage_scale() {
  static const GradeScale scale{"coverage",
                                {"No", "Minimal", "Good", "Complete"}};
  return scale;
}

const GradeScale& feature_scale() {
  static const GradeScale scale{
      "feature", {"No", "Subset", "Changed/New", "Most", "All"}};
  return scale;
}

std::optional<GradeScale> builtin_scale(std::string_view name) {
  for (const GradeScale* s : {&binary_scale(), &coverage_scale(),
                              &feature_scale()}) {
    if (s->name == name) return *s;
  }
  return std::nullopt;
}

std::optional<GradeScale> infer_scale(const std::vector<std::string>& labels) {
  for (const GradeScale* s : {&binary_scale(), &coverage_scale(),
                              &feature_scale()}) {
    bool all = std::all_of(labels.begin(), labels.end(), [&](const auto& l) {
      return s->rank_of(l).has_value();
    });
    if (all) return *s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> ScopeMatrix::level_index(
    std::string_view label) const {
  auto it = std::find(levels.begin(), levels.end(), label);
  if (it == levels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - levels.begin());
}

const ScopeRow* ScopeMatrix::find_row(std::string_view activity) const {
  for (const auto& row : rows) {
    if (row.activity == activity) return &row;
  }
  return nullptr;
}

InclusionGrade ScopeMatrix::grade(std::string_view activity,
                                  std::string_view level) const {
  const ScopeRow* row = find_row(activity);
  if (!row) {
    throw Error(ErrorCode::kInvalidPlan,
                "unknown activity '" + std::string(activity) + "'",
                "scope." + std::string(activity));
  }
  auto index = level_index(level);
  if (!index || *index >= row->grades.size()) {
    throw Error(ErrorCode::kInvalidPlan,
                "unknown scope level '" + std::string(level) + "'",
                "scope." + std::string(activity) + "." + std::string(level));
  }
  const auto& label = row->grades[*index];
  return {label, row->scale.rank_of(label).value_or(-1)};
}

ScopeMatrix default_scope_matrix() {
  return {{"A", "B", "C", "D", "E"},
          {
              {"Sanity", binary_scale(), {"Yes", "Yes", "Yes", "Yes", "Yes"}},
              {"Features", feature_scale(),
               {"Subset", "Changed/New", "Most", "All", "All"}},
              {"Regression", coverage_scale(),
               {"No", "No", "Minimal", "Good", "Complete"}},
              {"Stress", coverage_scale(),
               {"No", "No", "No", "Good", "Complete"}},
              {"Load", coverage_scale(),
               {"No", "No", "Minimal", "Good", "Complete"}},
          }};
}

void validate_structure(const ScopeMatrix& scope) {
  std::set<std::string> seen;
  for (const auto& label : scope.levels) {
    if (label.empty() || !seen.insert(label).second) {
      throw Error(ErrorCode::kInvalidPlan,
                  "scope level labels must be unique and non-empty",
                  "scope_matrix.levels");
    }
  }
  seen.clear();
  for (const auto& row : scope.rows) {
    if (row.activity.empty() || !seen.insert(row.activity).second) {
      throw Error(ErrorCode::kInvalidPlan,
                  "activity names must be unique and non-empty",
                  "scope." + row.activity);
    }
    check_row_grades(row, scope.levels.size());
  }
}

ScopeMatrix extend_scope_matrix(const ScopeMatrix& scope,
                                const std::optional<NewActivity>& activity,
                                const std::optional<NewLevel>& level) {
  validate_structure(scope);
  ScopeMatrix out = scope;

  if (level) {
    if (out.level_index(level->label)) {
      throw Error(ErrorCode::kDuplicateName,
                  "scope level '" + level->label + "' already exists",
                  "scope_matrix.levels");
    }
    if (level->label.empty()) {
      throw Error(ErrorCode::kInvalidPlan, "scope level label is empty",
                  "scope_matrix.levels");
    }
    if (level->position > out.levels.size()) {
      throw Error(ErrorCode::kInvalidPlan,
                  "insert position " + std::to_string(level->position) +
                      " is past the end",
                  "scope_matrix.levels");
    }
    if (level->grades.size() != out.rows.size()) {
      throw Error(ErrorCode::kInvalidPlan,
                  "new level needs one grade per activity",
                  "scope_matrix.levels." + level->label);
    }
    const auto at = static_cast<std::ptrdiff_t>(level->position);
    out.levels.insert(out.levels.begin() + at, level->label);
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
      auto& row = out.rows[r];
      row.grades.insert(row.grades.begin() + at, level->grades[r]);
      check_row_grades(row, out.levels.size());
      if (first_regression(row)) {
        throw Error(ErrorCode::kMonotonicityViolation,
                    "grade '" + level->grades[r] + "' for " + row.activity +
                        " at new level " + level->label +
                        " breaks the ordering",
                    "scope." + row.activity + "." + level->label);
      }
    }
  }

  if (activity) {
    if (activity->name.empty()) {
      throw Error(ErrorCode::kInvalidPlan, "activity name is empty",
                  "scope_matrix.activities");
    }
    if (out.find_row(activity->name)) {
      throw Error(ErrorCode::kDuplicateName,
                  "activity '" + activity->name + "' already exists",
                  "scope." + activity->name);
    }
    auto scale = activity->scale ? activity->scale : infer_scale(activity->grades);
    if (!scale) {
      throw Error(ErrorCode::kInvalidPlan,
                  "grades of '" + activity->name + "' fit no known scale",
                  "scope." + activity->name);
    }
    ScopeRow row{activity->name, *scale, activity->grades};
    check_row_grades(row, out.levels.size());
    if (auto bad = first_regression(row)) {
      throw Error(ErrorCode::kMonotonicityViolation,
                  "grades of '" + activity->name + "' decrease at level " +
                      out.levels[*bad],
                  "scope." + activity->name + "." + out.levels[*bad]);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------

void validate(const LevelPlan& plan) {
  const std::string where = "levels." + plan.level.name;
  if (plan.level.name.empty()) {
    throw Error(ErrorCode::kInvalidPlan, "level name is empty", "levels");
  }
  if (plan.staff < 0) {
    throw Error(ErrorCode::kInvalidPlan, "staff must be >= 0",
                where + ".staff");
  }
  if (!std::isfinite(plan.calendar_weeks) || plan.calendar_weeks < 0.0) {
    throw Error(ErrorCode::kInvalidPlan, "calendar_weeks must be >= 0",
                where + ".calendar_weeks");
  }
  if (!std::isfinite(plan.dre) || plan.dre < 0.0 || plan.dre >= 1.0) {
    throw Error(ErrorCode::kInvalidPlan,
                "dre < 1 required (and >= 0), got " + format_number(plan.dre),
                where + ".dre");
  }
}

std::vector<std::pair<TestLevel, double>> default_dre_ladder() {
  const auto ladder = default_level_ladder();
  const double dre[] = {0.10, 0.30, 0.60, 0.85, 0.95};
  std::vector<std::pair<TestLevel, double>> out;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    out.emplace_back(ladder[i], dre[i]);
  }
  return out;
}

std::vector<LevelPlan> default_level_plans() {
  const auto ladder = default_dre_ladder();
  const char* scope[] = {"A", "B", "C", "D", "E"};
  const char* intensity[] = {"LIGHT", "LIGHT", "MEDIUM", "STRONG", "STRONG"};
  const char* environment[] = {"Existing", "Existing", "Existing", "Enhanced",
                               "Enhanced"};
  const int staff[] = {2, 2, 4, 5, 5};
  const double calendar[] = {3, 6, 8, 12, 16};
  std::vector<LevelPlan> plans;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    plans.push_back({ladder[i].first, scope[i], intensity[i], environment[i],
                     staff[i], calendar[i], ladder[i].second});
  }
  return plans;
}

std::string_view to_string(Rounding rounding) noexcept {
  return rounding == Rounding::kHalfToEven ? "half_to_even"
                                           : "half_away_from_zero";
}

std::optional<Rounding> parse_rounding(std::string_view text) noexcept {
  if (text == "half_away_from_zero") return Rounding::kHalfAwayFromZero;
  if (text == "half_to_even") return Rounding::kHalfToEven;
  return std::nullopt;
}

std::int64_t round_for_display(double value, Rounding rounding) {
  if (rounding == Rounding::kHalfToEven) {
    return static_cast<std::int64_t>(std::nearbyint(value));
  }
  return static_cast<std::int64_t>(std::llround(value));
}

DeliveredDefects delivered_defects(double predicted, double dre,
                                   Rounding rounding, bool never_zero_clamp) {
  if (!std::isfinite(dre) || dre < 0.0 || dre >= 1.0) {
    throw Error(ErrorCode::kDreOutOfRange,
                "dre must satisfy 0 <= dre < 1, got " + format_number(dre),
                "dre");
  }
  if (!std::isfinite(predicted) || predicted < 0.0) {
    throw Error(ErrorCode::kInvalidParams, "predicted defects must be >= 0",
                "predicted");
  }
  DeliveredDefects out;
  out.exact = predicted * (1.0 - dre);
  out.display = round_for_display(out.exact, rounding);
  if (never_zero_clamp && predicted >= 1.0 && out.display < 1) {
    out.display = 1;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Severity severity) noexcept {
  return severity == Severity::kError ? "error" : "warning";
}

bool ValidationReport::has_errors() const {
  return std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::kError;
  });
}

ValidationFailure::ValidationFailure(ValidationReport report)
    : Error(ErrorCode::kValidationError,
            report.findings.empty() ? "validation failed"
                                    : report.findings.front().message,
            report.findings.empty() ? "" : report.findings.front().location),
      report_(std::move(report)) {}

const LevelRow* RiskMatrix::find(std::string_view level_name) const {
  for (const auto& row : rows) {
    if (row.plan.level.name == level_name) return &row;
  }
  return nullptr;
}

ValidationReport validate_matrix(const RiskMatrix& matrix,
                                 const ScopeMatrix& scope,
                                 const MatrixOptions& options) {
  ValidationReport report;
  auto add = [&](Severity severity, std::string code, std::string location,
                 std::string message) {
    report.findings.push_back(
        {severity, std::move(code), std::move(location), std::move(message)});
  };

  const LevelRow* previous = nullptr;
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    const auto& row = matrix.rows[i];
    const auto& plan = row.plan;
    const std::string where = "levels." + plan.level.name;

    if (!scope.level_index(plan.scope_label)) {
      add(Severity::kError, "unknown-scope", where + ".scope",
          "scope '" + plan.scope_label + "' of level " + plan.level.name +
              " is not a column of the scope matrix");
    }
    if (!contains(options.intensity_labels, plan.intensity)) {
      add(Severity::kError, "unknown-intensity", where + ".intensity",
          "intensity '" + plan.intensity + "' is not a configured label");
    }
    if (!contains(options.environment_labels, plan.environment)) {
      add(Severity::kError, "unknown-environment", where + ".environment",
          "environment '" + plan.environment + "' is not a configured label");
    }
    const double product = plan.staff * plan.calendar_weeks;
    if (std::abs(row.staff_weeks - product) >
        kStaffWeeksTolerance * std::max(1.0, std::abs(product))) {
      add(Severity::kError, "staff-weeks-mismatch", where + ".staff_weeks",
          "staff weeks " + format_number(row.staff_weeks) + " != staff " +
              std::to_string(plan.staff) + " x calendar weeks " +
              format_number(plan.calendar_weeks));
    }
    if (previous && plan.dre < previous->plan.dre) {
      add(options.strict ? Severity::kError : Severity::kWarning,
          "dre-non-monotone", where + ".dre",
          "DRE non-monotone at level " + std::to_string(i + 1) + " (" +
              plan.level.name + "): " + format_number(plan.dre) + " < " +
              format_number(previous->plan.dre));
    }
    if (plan.level.ordinal > 0 && plan.dre == 0.0) {
      add(Severity::kWarning, "dre-zero", where + ".dre",
          "DRE is 0 at non-minimal level " + plan.level.name);
    }
    previous = &row;
  }

  for (const auto& row : scope.rows) {
    const std::size_t n = std::min(row.grades.size(), scope.levels.size());
    for (std::size_t i = 1; i < n; ++i) {
      auto rank = row.scale.rank_of(row.grades[i]);
      auto prev = row.scale.rank_of(row.grades[i - 1]);
      if (rank && prev && *rank < *prev) {
        add(Severity::kError, "grade-regression",
            "scope." + row.activity + "." + scope.levels[i],
            "grade regression in " + row.activity + " at " + scope.levels[i] +
                ": " + row.grades[i] + " < " + row.grades[i - 1]);
      }
    }
  }
  return report;
}

RiskMatrix build_risk_matrix(std::vector<LevelPlan> plans,
                             const DefectPrediction& predicted,
                             const ScopeMatrix& scope,
                             const MatrixOptions& options) {
  if (plans.empty()) {
    throw Error(ErrorCode::kInvalidPlan, "at least one level is required",
                "levels");
  }
  std::sort(plans.begin(), plans.end(), [](const auto& a, const auto& b) {
    return a.level.ordinal < b.level.ordinal;
  });
  std::set<std::string> names;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    validate(plans[i]);
    if (plans[i].level.ordinal != static_cast<int>(i)) {
      throw Error(ErrorCode::kInvalidPlan,
                  "level ordinals must form 0.." +
                      std::to_string(plans.size() - 1),
                  "levels." + plans[i].level.name);
    }
    if (!names.insert(plans[i].level.name).second) {
      throw Error(ErrorCode::kInvalidPlan,
                  "duplicate level name " + plans[i].level.name,
                  "levels." + plans[i].level.name);
    }
  }
  if (!(predicted.low <= predicted.nominal &&
        predicted.nominal <= predicted.high) ||
      predicted.low < 0.0) {
    throw Error(ErrorCode::kInvalidParams,
                "prediction must satisfy 0 <= low <= nominal <= high",
                "predicted");
  }

  RiskMatrix matrix;
  matrix.predicted = predicted;
  matrix.predicted_display = round_for_display(predicted.nominal, options.rounding);
  for (auto& plan : plans) {
    LevelRow row;
    row.staff_weeks = plan.staff * plan.calendar_weeks;
    row.delivered = delivered_defects(predicted.nominal, plan.dre,
                                      options.rounding,
                                      options.never_zero_clamp);
    row.plan = std::move(plan);
    matrix.rows.push_back(std::move(row));
  }
  matrix.report = validate_matrix(matrix, scope, options);
  if (options.strict && matrix.report.has_errors()) {
    throw ValidationFailure(matrix.report);
  }
  return matrix;
}

}  // namespace testrisk
