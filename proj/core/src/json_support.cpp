#include "json_support.hpp"

#include <algorithm>

namespace testrisk::detail {
namespace {

std::string type_name(const Json& j) { return j.type_name(); }

}  // namespace

void schema_error(const std::string& pointer, const std::string& message) {
  throw Error(ErrorCode::kSchemaError, message,
              pointer.empty() ? "/" : pointer);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points at the offending character.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(
        e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) {
      what = what.substr(pos);
    }
    throw Error(ErrorCode::kParseError, "invalid JSON: " + what,
                "line " + std::to_string(line) + ", column " +
                    std::to_string(column));
  }
}

Fields::Fields(const Json& object, std::string pointer)
    : object_(object), pointer_(std::move(pointer)) {
  if (!object_.is_object()) {
    schema_error(pointer_, "expected an object, got " + type_name(object_));
  }
}

bool Fields::has(const char* key) const {
  return object_.contains(key) && !object_.at(key).is_null();
}

void Fields::only(std::initializer_list<const char*> allowed) const {
  for (const auto& item : object_.items()) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(),
                    [&](const char* k) { return item.key() == k; });
    if (!known) {
      schema_error(pointer_ + "/" + item.key(),
                   "unknown field '" + item.key() + "'");
    }
  }
}

const Json& Fields::at(const char* key, const char* expected, bool ok) const {
  if (!ok) {
    schema_error(pointer(key), std::string("field '") + key + "' must be " +
                                   expected + ", got " +
                                   type_name(object_.at(key)));
  }
  return object_.at(key);
}

const Json& Fields::raw(const char* key) const {
  if (!has(key)) schema_error(pointer(key), std::string("missing field '") + key + "'");
  return object_.at(key);
}

double Fields::number(const char* key) const {
  const Json& j = raw(key);
  return at(key, "a number", j.is_number()).get<double>();
}

std::optional<double> Fields::opt_number(const char* key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

long long Fields::integer(const char* key) const {
  const Json& j = raw(key);
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (d == static_cast<double>(static_cast<long long>(d))) {
      return static_cast<long long>(d);
    }
  }
  at(key, "a whole number", false);
  return 0;
}

std::optional<long long> Fields::opt_integer(const char* key) const {
  if (!has(key)) return std::nullopt;
  return integer(key);
}

std::string Fields::string(const char* key) const {
  const Json& j = raw(key);
  return at(key, "a string", j.is_string()).get<std::string>();
}

std::optional<std::string> Fields::opt_string(const char* key) const {
  if (!has(key)) return std::nullopt;
  return string(key);
}

std::optional<bool> Fields::opt_bool(const char* key) const {
  if (!has(key)) return std::nullopt;
  const Json& j = raw(key);
  return at(key, "a boolean", j.is_boolean()).get<bool>();
}

// ---------------------------------------------------------------------------

Json to_json(const DefectPrediction& p) {
  Json j;
  j["method"] = std::string(to_string(p.method));
  j["nominal"] = p.nominal;
  j["low"] = p.low;
  j["high"] = p.high;
  return j;
}

Json to_json(const ScopeMatrix& scope) {
  Json j;
  j["levels"] = scope.levels;
  Json activities = Json::array();
  for (const auto& row : scope.rows) {
    Json a;
    a["name"] = row.activity;
    a["scale"] = row.scale.name;
    a["grades"] = row.grades;
    activities.push_back(std::move(a));
  }
  j["activities"] = std::move(activities);
  Json custom = Json::array();
  std::set<std::string> emitted;
  for (const auto& row : scope.rows) {
    auto builtin = builtin_scale(row.scale.name);
    if (builtin && *builtin == row.scale) continue;
    if (!emitted.insert(row.scale.name).second) continue;
    Json s;
    s["name"] = row.scale.name;
    s["labels"] = row.scale.labels;
    custom.push_back(std::move(s));
  }
  if (!custom.empty()) j["scales"] = std::move(custom);
  return j;
}

Json to_json(const Finding& f) {
  Json j;
  j["severity"] = std::string(to_string(f.severity));
  j["code"] = f.code;
  j["location"] = f.location;
  j["message"] = f.message;
  return j;
}

Json to_json(const Selection& s) {
  Json j;
  j["level"] = s.level;
  j["scope"] = s.scope_label;
  j["delivered_defects_exact"] = s.delivered.exact;
  j["delivered_defects_display"] = s.delivered.display;
  j["staff_weeks"] = s.staff_weeks;
  j["calendar_weeks"] = s.calendar_weeks;
  return j;
}

Json matrix_json(const RiskMatrix& matrix, const ScopeMatrix& scope,
                 const std::optional<std::string>& selected_level) {
  Json j;
  j["predicted"] = to_json(matrix.predicted);
  j["selected_level"] =
      selected_level ? Json(*selected_level) : Json(nullptr);
  Json levels = Json::array();
  for (const auto& row : matrix.rows) {
    const auto& p = row.plan;
    Json l;
    l["level"] = p.level.name;
    l["ordinal"] = p.level.ordinal;
    l["scope"] = p.scope_label;
    l["intensity"] = p.intensity;
    l["environment"] = p.environment;
    l["staff"] = p.staff;
    l["staff_weeks"] = row.staff_weeks;
    l["calendar_weeks"] = p.calendar_weeks;
    l["predicted_defects"] = matrix.predicted.nominal;
    l["predicted_defects_display"] = matrix.predicted_display;
    l["dre"] = p.dre;
    l["delivered_defects_exact"] = row.delivered.exact;
    l["delivered_defects_display"] = row.delivered.display;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  j["scope_matrix"] = to_json(scope);
  Json findings = Json::array();
  for (const auto& f : matrix.report.findings) findings.push_back(to_json(f));
  j["findings"] = std::move(findings);
  return j;
}

}  // namespace testrisk::detail
