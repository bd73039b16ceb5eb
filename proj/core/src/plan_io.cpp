// Plan document JSON: load with defaults and validation, save in canonical
// form. Key order on save follows docs/plan-format.md.

#include <algorithm>

#include "json_support.hpp"
#include "testrisk/io.hpp"

namespace testrisk::io {
namespace {

using detail::Fields;
using detail::Json;
using detail::schema_error;

std::vector<std::string> string_list(const Json& j, const std::string& ptr) {
  if (!j.is_array()) schema_error(ptr, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) {
      schema_error(ptr + "/" + std::to_string(i), "expected a string");
    }
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

std::map<std::string, double> number_map(const Json& j,
                                         const std::string& ptr) {
  if (!j.is_object()) schema_error(ptr, "expected an object of numbers");
  std::map<std::string, double> out;
  for (const auto& item : j.items()) {
    if (!item.value().is_number()) {
      schema_error(ptr + "/" + item.key(), "expected a number");
    }
    out[item.key()] = item.value().get<double>();
  }
  return out;
}

PredictionMethod parse_method(const std::string& text,
                              const std::string& ptr) {
  if (text == "fp") return PredictionMethod::kFunctionPoints;
  if (text == "loc_density") return PredictionMethod::kLocDensity;
  if (text == "direct") return PredictionMethod::kDirect;
  schema_error(ptr, "method must be one of fp, loc_density, direct");
}

PredictionSpec parse_prediction(const Json& j) {
  Fields f(j, "/prediction");
  f.only({"method", "nominal", "low", "high", "function_points", "loc",
          "loc_per_fp", "complexity_adjustment", "defects_per_fp",
          "defects_per_kloc", "adjustment", "range_factors"});
  PredictionSpec spec;
  spec.method = parse_method(f.string("method"), f.pointer("method"));
  spec.nominal = f.opt_number("nominal").value_or(0.0);
  spec.low = f.opt_number("low");
  spec.high = f.opt_number("high");
  spec.function_points = f.opt_number("function_points");
  spec.size.loc = f.opt_number("loc").value_or(spec.size.loc);
  spec.size.loc_per_fp = f.opt_number("loc_per_fp").value_or(spec.size.loc_per_fp);
  spec.size.complexity_adjustment = f.opt_number("complexity_adjustment")
                                        .value_or(spec.size.complexity_adjustment);
  spec.density.defects_per_fp =
      f.opt_number("defects_per_fp").value_or(spec.density.defects_per_fp);
  spec.density.defects_per_kloc =
      f.opt_number("defects_per_kloc").value_or(spec.density.defects_per_kloc);
  spec.density.adjustment =
      f.opt_number("adjustment").value_or(spec.density.adjustment);
  if (f.has("range_factors")) {
    Fields r(f.raw("range_factors"), f.pointer("range_factors"));
    r.only({"low", "high"});
    spec.range.low = r.opt_number("low").value_or(spec.range.low);
    spec.range.high = r.opt_number("high").value_or(spec.range.high);
  }
  if (spec.method == PredictionMethod::kDirect && !f.has("nominal")) {
    schema_error(f.pointer("nominal"), "direct prediction needs 'nominal'");
  }
  if (spec.method == PredictionMethod::kLocDensity && !f.has("loc")) {
    schema_error(f.pointer("loc"), "loc_density prediction needs 'loc'");
  }
  if (spec.method == PredictionMethod::kFunctionPoints && !f.has("loc") &&
      !f.has("function_points")) {
    schema_error(f.pointer("loc"),
                 "fp prediction needs 'loc' or 'function_points'");
  }
  return spec;
}

std::vector<LevelPlan> parse_levels(const Json& j) {
  if (!j.is_array()) schema_error("/levels", "expected an array");
  const auto defaults = default_level_plans();
  std::vector<LevelPlan> plans;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Fields f(j[i], "/levels/" + std::to_string(i));
    f.only({"name", "ordinal", "scope", "intensity", "environment", "staff",
            "calendar_weeks", "dre"});
    LevelPlan plan;
    plan.level.name = f.string("name");
    plan.level.ordinal =
        static_cast<int>(f.opt_integer("ordinal").value_or(static_cast<long long>(i)));
    auto standard = std::find_if(
        defaults.begin(), defaults.end(),
        [&](const LevelPlan& d) { return d.level.name == plan.level.name; });
    auto standard_text = [&](const char* key, std::string LevelPlan::*member) {
      if (auto v = f.opt_string(key)) return *v;
      if (standard != defaults.end()) return (*standard).*member;
      schema_error(f.pointer(key), std::string("missing field '") + key +
                                       "' for non-default level " +
                                       plan.level.name);
    };
    plan.scope_label = standard_text("scope", &LevelPlan::scope_label);
    plan.intensity = standard_text("intensity", &LevelPlan::intensity);
    plan.environment = standard_text("environment", &LevelPlan::environment);
    if (auto dre = f.opt_number("dre")) {
      plan.dre = *dre;
    } else if (standard != defaults.end()) {
      plan.dre = standard->dre;
    } else {
      schema_error(f.pointer("dre"),
                   "missing field 'dre' for non-default level " +
                       plan.level.name);
    }
    const long long staff = f.integer("staff");
    if (staff < 0 || staff > 1000000000LL) {
      throw Error(ErrorCode::kInvariantViolation, "staff must be >= 0",
                  f.pointer("staff"));
    }
    plan.staff = static_cast<int>(staff);
    plan.calendar_weeks = f.number("calendar_weeks");
    plans.push_back(std::move(plan));
  }
  return plans;
}

ScopeMatrix parse_scope(const Json& j) {
  Fields f(j, "/scope_matrix");
  f.only({"levels", "activities", "scales"});
  ScopeMatrix scope;
  scope.levels = string_list(f.raw("levels"), f.pointer("levels"));
  std::map<std::string, GradeScale> custom;
  if (f.has("scales")) {
    const Json& scales = f.raw("scales");
    if (!scales.is_array()) schema_error(f.pointer("scales"), "expected an array");
    for (std::size_t i = 0; i < scales.size(); ++i) {
      Fields s(scales[i], f.pointer("scales") + "/" + std::to_string(i));
      s.only({"name", "labels"});
      GradeScale scale{s.string("name"),
                       string_list(s.raw("labels"), s.pointer("labels"))};
      custom[scale.name] = scale;
    }
  }
  const Json& activities = f.raw("activities");
  if (!activities.is_array()) {
    schema_error(f.pointer("activities"), "expected an array");
  }
  for (std::size_t i = 0; i < activities.size(); ++i) {
    Fields a(activities[i], f.pointer("activities") + "/" + std::to_string(i));
    a.only({"name", "scale", "grades"});
    ScopeRow row;
    row.activity = a.string("name");
    row.grades = string_list(a.raw("grades"), a.pointer("grades"));
    if (auto name = a.opt_string("scale")) {
      if (auto it = custom.find(*name); it != custom.end()) {
        row.scale = it->second;
      } else if (auto builtin = builtin_scale(*name)) {
        row.scale = *builtin;
      } else {
        schema_error(a.pointer("scale"), "unknown grade scale '" + *name + "'");
      }
    } else if (auto inferred = infer_scale(row.grades)) {
      row.scale = *inferred;
    } else {
      schema_error(a.pointer("grades"), "grades fit no known scale");
    }
    scope.rows.push_back(std::move(row));
  }
  return scope;
}

PlanOptions parse_options(const Json& j) {
  Fields f(j, "/options");
  f.only({"strict_validation", "rounding", "never_zero_clamp",
          "intensity_labels", "environment_labels", "composition"});
  PlanOptions o;
  o.strict_validation = f.opt_bool("strict_validation").value_or(false);
  if (auto r = f.opt_string("rounding")) {
    auto parsed = parse_rounding(*r);
    if (!parsed) {
      schema_error(f.pointer("rounding"),
                   "rounding must be half_away_from_zero or half_to_even");
    }
    o.rounding = *parsed;
  }
  o.never_zero_clamp = f.opt_bool("never_zero_clamp").value_or(true);
  if (f.has("intensity_labels")) {
    o.intensity_labels =
        string_list(f.raw("intensity_labels"), f.pointer("intensity_labels"));
  }
  if (f.has("environment_labels")) {
    o.environment_labels = string_list(f.raw("environment_labels"),
                                       f.pointer("environment_labels"));
  }
  if (f.has("composition")) {
    Fields c(f.raw("composition"), f.pointer("composition"));
    c.only({"enabled", "effectiveness", "grade_weights"});
    o.composition.enabled = c.opt_bool("enabled").value_or(false);
    if (c.has("effectiveness")) {
      o.composition.effectiveness =
          number_map(c.raw("effectiveness"), c.pointer("effectiveness"));
    }
    if (c.has("grade_weights")) {
      o.composition.grade_weights =
          number_map(c.raw("grade_weights"), c.pointer("grade_weights"));
    }
  }
  return o;
}

// Runs every module check; failures become invariant-violation.
void check_invariants(PlanDocument& doc) {
  try {
    PlanDocument relaxed = doc;
    relaxed.options.strict_validation = false;
    const EvaluatedPlan evaluated = evaluate_plan(relaxed);
    doc.selected_level = evaluated.selected_level;
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvariantViolation, e.what(), e.location());
  }
}

Json prediction_json(const PredictionSpec& p) {
  Json j;
  j["method"] = std::string(to_string(p.method));
  j["nominal"] = p.nominal;
  if (p.low) j["low"] = *p.low;
  if (p.high) j["high"] = *p.high;
  if (p.function_points) j["function_points"] = *p.function_points;
  j["loc"] = p.size.loc;
  j["loc_per_fp"] = p.size.loc_per_fp;
  j["complexity_adjustment"] = p.size.complexity_adjustment;
  j["defects_per_fp"] = p.density.defects_per_fp;
  j["defects_per_kloc"] = p.density.defects_per_kloc;
  j["adjustment"] = p.density.adjustment;
  j["range_factors"] = {{"low", p.range.low}, {"high", p.range.high}};
  return j;
}

Json options_json(const PlanOptions& o) {
  Json j;
  j["strict_validation"] = o.strict_validation;
  j["rounding"] = std::string(to_string(o.rounding));
  j["never_zero_clamp"] = o.never_zero_clamp;
  j["intensity_labels"] = o.intensity_labels;
  j["environment_labels"] = o.environment_labels;
  Json c;
  c["enabled"] = o.composition.enabled;
  c["effectiveness"] = Json::object();
  for (const auto& [k, v] : o.composition.effectiveness) c["effectiveness"][k] = v;
  c["grade_weights"] = Json::object();
  for (const auto& [k, v] : o.composition.grade_weights) c["grade_weights"][k] = v;
  j["composition"] = std::move(c);
  return j;
}

}  // namespace

PlanDocument load_plan(std::string_view text) {
  const Json root = detail::parse_json(text);
  Fields f(root, "");
  f.only({"schema_version", "prediction", "levels", "scope_matrix",
          "selected_level", "options"});
  PlanDocument doc;
  doc.schema_version = static_cast<int>(f.integer("schema_version"));
  if (doc.schema_version != kSchemaVersion) {
    schema_error("/schema_version", "unsupported schema_version " +
                                        std::to_string(doc.schema_version));
  }
  doc.prediction = parse_prediction(f.raw("prediction"));
  doc.levels = f.has("levels") ? parse_levels(f.raw("levels"))
                               : default_level_plans();
  doc.scope_matrix = f.has("scope_matrix") ? parse_scope(f.raw("scope_matrix"))
                                           : default_scope_matrix();
  doc.selected_level = f.opt_string("selected_level");
  if (f.has("options")) doc.options = parse_options(f.raw("options"));
  check_invariants(doc);
  return doc;
}

std::string save_plan(const PlanDocument& doc) {
  Json j;
  j["schema_version"] = doc.schema_version;
  j["prediction"] = prediction_json(doc.prediction);
  Json levels = Json::array();
  for (const auto& p : doc.levels) {
    Json l;
    l["name"] = p.level.name;
    l["ordinal"] = p.level.ordinal;
    l["scope"] = p.scope_label;
    l["intensity"] = p.intensity;
    l["environment"] = p.environment;
    l["staff"] = p.staff;
    l["calendar_weeks"] = p.calendar_weeks;
    l["dre"] = p.dre;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  j["scope_matrix"] = detail::to_json(doc.scope_matrix);
  if (doc.selected_level) j["selected_level"] = *doc.selected_level;
  j["options"] = options_json(doc.options);
  return detail::dump(j);
}

}  // namespace testrisk::io
