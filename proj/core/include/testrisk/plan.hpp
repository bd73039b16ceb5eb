#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "testrisk/estimation.hpp"
#include "testrisk/matrix.hpp"

namespace testrisk {

inline constexpr int kSchemaVersion = 1;

/// How the shared predicted-defects figure is obtained.
struct PredictionSpec {
  PredictionMethod method = PredictionMethod::kDirect;
  SizeEstimate size;                      ///< fp and loc_density
  std::optional<double> function_points;  ///< fp: skips backfiring if set
  DensityParams density;
  RangeFactors range;
  double nominal = 0.0;  ///< direct
  std::optional<double> low;
  std::optional<double> high;

  bool operator==(const PredictionSpec&) const = default;
};

/// Activity-composition DRE model. Off by default; when on, each level's
/// DRE is 1 - prod(1 - effectiveness[a] * weight[grade(a, scope)]).
/// This is a modelling aid for scope edits, not a published ladder.
struct CompositionOptions {
  bool enabled = false;
  std::map<std::string, double> effectiveness;  ///< per activity, [0, 1)
  std::map<std::string, double> grade_weights;  ///< per grade label, [0, 1]

  bool operator==(const CompositionOptions&) const = default;
};

CompositionOptions default_composition_options();

struct PlanOptions {
  bool strict_validation = false;
  Rounding rounding = Rounding::kHalfAwayFromZero;
  bool never_zero_clamp = true;
  std::vector<std::string> intensity_labels{"LIGHT", "MEDIUM", "STRONG"};
  std::vector<std::string> environment_labels{"Existing", "Enhanced"};
  CompositionOptions composition = default_composition_options();

  bool operator==(const PlanOptions&) const = default;
};

/// A complete plan: prediction inputs, one column per test level, the scope
/// grid, and the level currently on the table.
struct PlanDocument {
  int schema_version = kSchemaVersion;
  PredictionSpec prediction;
  std::vector<LevelPlan> levels;
  ScopeMatrix scope_matrix;
  std::optional<std::string> selected_level;  ///< a level name
  PlanOptions options;

  bool operator==(const PlanDocument&) const = default;
};

/// The worked example: direct prediction of 800 (650..1400), the five
/// example columns, the published scope grid, MEDIUM selected.
PlanDocument default_plan_document();

DefectPrediction resolve_prediction(const PredictionSpec& spec);

MatrixOptions matrix_options(const PlanOptions& options);

/// Level name for either a level name or a scope label.
std::optional<std::string> resolve_level_name(const PlanDocument& doc,
                                              std::string_view name_or_scope);

}  // namespace testrisk
