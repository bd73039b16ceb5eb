#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "testrisk/matrix.hpp"
#include "testrisk/plan.hpp"

namespace testrisk {

// ---------------------------------------------------------------------------
// Staffing
// ---------------------------------------------------------------------------

struct CaseLoad {
  std::map<std::string, long long> cases_per_level;
  double execution_rate = 0.0;  ///< test cases per staff-week
};

struct StaffingConstraint {
  enum class Kind { kStaff, kCalendarWeeks };
  Kind kind = Kind::kStaff;
  double value = 0.0;

  static StaffingConstraint staff(int head_count) {
    return {Kind::kStaff, static_cast<double>(head_count)};
  }
  static StaffingConstraint calendar_weeks(double weeks) {
    return {Kind::kCalendarWeeks, weeks};
  }
};

struct StaffingEstimate {
  int staff = 0;
  double staff_weeks = 0.0;
  double calendar_weeks = 0.0;

  bool operator==(const StaffingEstimate&) const = default;
};

/// staff_weeks = cases / rate. A calendar constraint is an upper bound:
/// staff = ceil(staff_weeks / weeks), then calendar = staff_weeks / staff.
/// Throws zero-rate, zero-constraint, or invalid-params for an unknown level.
StaffingEstimate estimate_staffing(const CaseLoad& load, const TestLevel& level,
                                   StaffingConstraint constraint);

/// Fractions of the worst-case column, lowest level first. staff_fractions
/// is optional; without it every level keeps the worst-case head count.
struct ScalingProfile {
  std::vector<double> staff_weeks_fractions;
  std::optional<std::vector<double>> staff_fractions;
};

/// 6/80, 12/80, 32/80, 60/80, 1 for staff-weeks and 2/5, 2/5, 4/5, 1, 1 for
/// head count; together they rebuild the example columns from the top one.
ScalingProfile default_scaling_profile();

/// Scales a worst-case top-level plan down the ladder. Scope, intensity,
/// environment and DRE come from `ladder`; the top entry is `worst` itself.
/// Throws invalid-profile.
std::vector<LevelPlan> worst_case_scaling(
    const LevelPlan& worst,
    const std::vector<LevelPlan>& ladder = default_level_plans(),
    const ScalingProfile& profile = default_scaling_profile());

// ---------------------------------------------------------------------------
// Plan evaluation and what-if scenarios
// ---------------------------------------------------------------------------

struct EvaluatedPlan {
  RiskMatrix matrix;
  ScopeMatrix scope;
  std::optional<std::string> selected_level;
};

/// DRE of one scope column under the composition model.
double composed_dre(const ScopeMatrix& scope, std::string_view scope_label,
                    const CompositionOptions& composition);

/// Resolves the prediction, applies the composition model when enabled and
/// builds the risk matrix with the plan's options.
EvaluatedPlan evaluate_plan(const PlanDocument& doc);

using OverrideValue = std::variant<double, bool, std::string>;
using Overrides = std::map<std::string, OverrideValue>;

/// Parses CLI text: true/false, then numbers, otherwise a string.
OverrideValue parse_override_value(std::string_view text);

struct Scenario {
  std::string name;
  std::shared_ptr<const PlanDocument> base;
  Overrides overrides;
};

/// Applies dotted-path overrides to a copy of `base`:
///   selected_level                         level name or scope label
///   levels.<LEVEL>.{dre,staff,calendar_weeks,scope,intensity,environment}
///   predicted.{nominal,low,high}
///   scope.<ACTIVITY>.<SCOPE_LABEL>         grade label
///   options.{strict_validation,never_zero_clamp,composition.enabled}
/// <LEVEL> is a level name or its scope label. Throws bad-override-path or
/// invariant-violation, with the path as location.
PlanDocument apply_overrides(const PlanDocument& base,
                             const Overrides& overrides);

struct LevelDelta {
  std::string level;
  double delivered_exact = 0.0;
  std::int64_t delivered_display = 0;
  double staff_weeks = 0.0;
  double calendar_weeks = 0.0;

  bool operator==(const LevelDelta&) const = default;
};

struct Selection {
  std::string level;
  std::string scope_label;
  DeliveredDefects delivered;
  double staff_weeks = 0.0;
  double calendar_weeks = 0.0;

  bool operator==(const Selection&) const = default;
};

struct ScenarioResult {
  std::string name;
  RiskMatrix matrix;
  ScopeMatrix scope;
  std::optional<Selection> selection;
  std::optional<Selection> base_selection;
  std::vector<LevelDelta> deltas;  ///< scenario minus base, per level
};

ScenarioResult apply_scenario(const Scenario& scenario);

struct ComparisonColumn {
  std::string scenario;
  std::optional<Selection> selection;
  std::vector<DeliveredDefects> delivered;
  std::vector<double> staff_weeks;
  std::vector<double> calendar_weeks;
};

struct ComparisonTable {
  std::vector<std::string> levels;
  std::vector<ComparisonColumn> columns;  ///< input order
};

/// Throws mismatched-ladders when results disagree on the level ladder.
ComparisonTable compare_scenarios(const std::vector<ScenarioResult>& results);

}  // namespace testrisk
