#include "testrisk/plan.hpp"

namespace testrisk {

CompositionOptions default_composition_options() {
  CompositionOptions c;
  c.effectiveness = {{"Sanity", 0.10},
                     {"Features", 0.50},
                     {"Regression", 0.30},
                     {"Stress", 0.20},
                     {"Load", 0.20}};
  c.grade_weights = {{"No", 0.0},          {"Minimal", 0.25},
                     {"Good", 0.75},       {"Complete", 1.0},
                     {"Subset", 0.25},     {"Changed/New", 0.5},
                     {"Most", 0.75},       {"All", 1.0},
                     {"Yes", 1.0}};
  return c;
}

PlanDocument default_plan_document() {
  PlanDocument doc;
  doc.prediction.method = PredictionMethod::kDirect;
  doc.prediction.nominal = 800.0;
  doc.levels = default_level_plans();
  doc.scope_matrix = default_scope_matrix();
  doc.selected_level = "MEDIUM";
  return doc;
}

DefectPrediction resolve_prediction(const PredictionSpec& spec) {
  switch (spec.method) {
    case PredictionMethod::kFunctionPoints: {
      const double fp = spec.function_points
                            ? *spec.function_points
                            : backfire_function_points(spec.size);
      return predict_defects_from_fp(fp, spec.density, spec.range);
    }
    case PredictionMethod::kLocDensity:
      return predict_defects_from_loc(spec.size.loc, spec.density, spec.range);
    case PredictionMethod::kDirect:
      break;
  }
  if (!spec.low && !spec.high) {
    return make_direct_prediction(spec.nominal, spec.range);
  }
  validate(spec.range);
  return make_direct_prediction(
      spec.nominal, spec.low.value_or(spec.nominal * spec.range.low),
      spec.high.value_or(spec.nominal * spec.range.high));
}

MatrixOptions matrix_options(const PlanOptions& options) {
  MatrixOptions m;
  m.strict = options.strict_validation;
  m.rounding = options.rounding;
  m.never_zero_clamp = options.never_zero_clamp;
  m.intensity_labels = options.intensity_labels;
  m.environment_labels = options.environment_labels;
  return m;
}

std::optional<std::string> resolve_level_name(const PlanDocument& doc,
                                              std::string_view name_or_scope) {
  for (const auto& plan : doc.levels) {
    if (plan.level.name == name_or_scope) return plan.level.name;
  }
  for (const auto& plan : doc.levels) {
    if (plan.scope_label == name_or_scope) return plan.level.name;
  }
  return std::nullopt;
}

}  // namespace testrisk
