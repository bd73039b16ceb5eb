#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "testrisk/error.hpp"
#include "testrisk/estimation.hpp"

namespace testrisk {

// ---------------------------------------------------------------------------
// Levels and grades
// ---------------------------------------------------------------------------

struct TestLevel {
  std::string name;
  int ordinal = 0;

  bool operator==(const TestLevel&) const = default;
};

/// MINIMAL, LOW, MEDIUM, HIGH, EXTENSIVE with ordinals 0..4.
std::vector<TestLevel> default_level_ladder();

/// An ordered list of inclusion labels, lowest first.
struct GradeScale {
  std::string name;
  std::vector<std::string> labels;

  std::optional<int> rank_of(std::string_view label) const;
  bool operator==(const GradeScale&) const = default;
};

const GradeScale& binary_scale();    ///< No < Yes
const GradeScale& coverage_scale();  ///< No < Minimal < Good < Complete
const GradeScale& feature_scale();   ///< No < Subset < Changed/New < Most < All

std::optional<GradeScale> builtin_scale(std::string_view name);

/// First built-in scale (binary, coverage, feature) containing every label.
std::optional<GradeScale> infer_scale(const std::vector<std::string>& labels);

struct InclusionGrade {
  std::string label;
  int rank = 0;

  bool operator==(const InclusionGrade&) const = default;
};

// ---------------------------------------------------------------------------
// Test Scope Matrix
// ---------------------------------------------------------------------------

struct ScopeRow {
  std::string activity;
  GradeScale scale;
  std::vector<std::string> grades;  ///< one per scope level

  bool operator==(const ScopeRow&) const = default;
};

struct ScopeMatrix {
  std::vector<std::string> levels;  ///< scope labels, e.g. A..E
  std::vector<ScopeRow> rows;

  std::optional<std::size_t> level_index(std::string_view label) const;
  const ScopeRow* find_row(std::string_view activity) const;
  /// Throws invalid-plan when either name is unknown.
  InclusionGrade grade(std::string_view activity,
                       std::string_view level) const;

  bool operator==(const ScopeMatrix&) const = default;
};

/// The five activities by five scope levels of the published grid.
ScopeMatrix default_scope_matrix();

/// Shape checks only: unique names, every cell filled, every grade on its
/// row's scale. Throws invalid-plan. Ordering is reported by validate_matrix.
void validate_structure(const ScopeMatrix& scope);

struct NewActivity {
  std::string name;
  std::vector<std::string> grades;
  std::optional<GradeScale> scale;  ///< inferred from the grades if absent
};

struct NewLevel {
  std::string label;
  std::size_t position = 0;  ///< insertion index into the level list
  std::vector<std::string> grades;  ///< one per existing activity, in order
};

/// Returns a widened copy. A new level is inserted first, so a new activity
/// must carry a grade for it too. Throws duplicate-name,
/// monotonicity-violation or invalid-plan.
ScopeMatrix extend_scope_matrix(const ScopeMatrix& scope,
                                const std::optional<NewActivity>& activity,
                                const std::optional<NewLevel>& level);

// ---------------------------------------------------------------------------
// Test Risk Matrix
// ---------------------------------------------------------------------------

struct LevelPlan {
  TestLevel level;
  std::string scope_label;
  std::string intensity;
  std::string environment;
  int staff = 0;
  double calendar_weeks = 0.0;
  double dre = 0.0;  ///< in [0, 1)

  bool operator==(const LevelPlan&) const = default;
};

/// Throws invalid-plan with the offending field as location.
void validate(const LevelPlan& plan);

/// Standard DRE per level: 10%, 30%, 60%, 85%, 95%.
std::vector<std::pair<TestLevel, double>> default_dre_ladder();

/// The worked-example columns: standard level elements with staff
/// 2,2,4,5,5 and calendar weeks 3,6,8,12,16.
std::vector<LevelPlan> default_level_plans();

enum class Rounding { kHalfAwayFromZero, kHalfToEven };

std::string_view to_string(Rounding rounding) noexcept;
std::optional<Rounding> parse_rounding(std::string_view text) noexcept;

struct MatrixOptions {
  bool strict = false;
  Rounding rounding = Rounding::kHalfAwayFromZero;
  bool never_zero_clamp = true;
  std::vector<std::string> intensity_labels{"LIGHT", "MEDIUM", "STRONG"};
  std::vector<std::string> environment_labels{"Existing", "Enhanced"};

  bool operator==(const MatrixOptions&) const = default;
};

struct DeliveredDefects {
  double exact = 0.0;
  std::int64_t display = 0;

  bool operator==(const DeliveredDefects&) const = default;
};

/// exact = predicted * (1 - dre). display rounds exact and, with the
/// never-zero clamp on, lifts 0 to 1 whenever predicted >= 1.
/// Throws dre-out-of-range unless 0 <= dre < 1.
DeliveredDefects delivered_defects(double predicted, double dre,
                                   Rounding rounding = Rounding::kHalfAwayFromZero,
                                   bool never_zero_clamp = true);

std::int64_t round_for_display(double value, Rounding rounding);

enum class Severity { kWarning, kError };

std::string_view to_string(Severity severity) noexcept;

struct Finding {
  Severity severity = Severity::kWarning;
  std::string code;      ///< e.g. dre-non-monotone, grade-regression
  std::string location;  ///< override-style path, e.g. levels.HIGH.dre
  std::string message;

  bool operator==(const Finding&) const = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool empty() const { return findings.empty(); }
  bool has_errors() const;
  bool operator==(const ValidationReport&) const = default;
};

/// validation-error raised in strict mode; carries every finding.
class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

struct LevelRow {
  LevelPlan plan;
  double staff_weeks = 0.0;
  DeliveredDefects delivered;

  bool operator==(const LevelRow&) const = default;
};

struct RiskMatrix {
  std::vector<LevelRow> rows;  ///< ordered by level ordinal
  DefectPrediction predicted;
  std::int64_t predicted_display = 0;  ///< nominal, rounded like delivered
  ValidationReport report;

  const LevelRow* find(std::string_view level_name) const;
  bool operator==(const RiskMatrix&) const = default;
};

ValidationReport validate_matrix(const RiskMatrix& matrix,
                                 const ScopeMatrix& scope,
                                 const MatrixOptions& options = {});

/// Computes staff-weeks and delivered defects for every level and attaches
/// the validation report. Plans may arrive in any order; ordinals must form
/// 0..n-1. Throws invalid-plan, or validation-error in strict mode when the
/// report holds an error.
RiskMatrix build_risk_matrix(std::vector<LevelPlan> plans,
                             const DefectPrediction& predicted,
                             const ScopeMatrix& scope,
                             const MatrixOptions& options = {});

}  // namespace testrisk
