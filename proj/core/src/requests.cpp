#include "json_support.hpp"
#include "number_format.hpp"
#include "testrisk/io.hpp"

namespace testrisk::io {

using detail::Fields;
using detail::Json;

EstimateRequest parse_estimate_request(std::string_view json_text) {
  const Json root = detail::parse_json(json_text);
  Fields f(root, "");
  f.only({"method", "loc", "loc_per_fp", "complexity_adjustment", "fp",
          "defects_per_fp", "defects_per_kloc", "adjustment",
          "range_factors"});
  EstimateRequest req;
  if (auto m = f.opt_string("method")) {
    if (*m == "fp") req.method = PredictionMethod::kFunctionPoints;
    else if (*m == "loc_density") req.method = PredictionMethod::kLocDensity;
    else detail::schema_error(f.pointer("method"), "method must be fp or loc_density");
  }
  if (f.has("loc")) {
    SizeEstimate size;
    size.loc = f.number("loc");
    size.loc_per_fp = f.opt_number("loc_per_fp").value_or(size.loc_per_fp);
    size.complexity_adjustment =
        f.opt_number("complexity_adjustment").value_or(1.0);
    req.size = size;
  } else if (f.has("loc_per_fp") || f.has("complexity_adjustment")) {
    detail::schema_error(f.pointer("loc"), "gearing given without 'loc'");
  }
  req.function_points = f.opt_number("fp");
  if (!req.size && !req.function_points) {
    detail::schema_error("/loc", "request needs 'loc' or 'fp'");
  }
  req.has_defects_per_fp = f.has("defects_per_fp");
  req.has_defects_per_kloc = f.has("defects_per_kloc");
  req.density.defects_per_fp =
      f.opt_number("defects_per_fp").value_or(req.density.defects_per_fp);
  req.density.defects_per_kloc =
      f.opt_number("defects_per_kloc").value_or(req.density.defects_per_kloc);
  req.density.adjustment = f.opt_number("adjustment").value_or(1.0);
  if (f.has("range_factors")) {
    Fields r(f.raw("range_factors"), f.pointer("range_factors"));
    r.only({"low", "high"});
    req.range.low = r.opt_number("low").value_or(req.range.low);
    req.range.high = r.opt_number("high").value_or(req.range.high);
  }
  return req;
}

EstimateResult run_estimate(const EstimateRequest& request) {
  PredictionMethod method = PredictionMethod::kFunctionPoints;
  if (request.method) {
    method = *request.method;
  } else if (request.has_defects_per_kloc && !request.has_defects_per_fp &&
             !request.function_points) {
    method = PredictionMethod::kLocDensity;
  }

  EstimateResult result;
  if (method == PredictionMethod::kLocDensity) {
    if (!request.size) {
      throw Error(ErrorCode::kInvalidSize, "loc_density needs loc", "loc");
    }
    result.prediction = predict_defects_from_loc(request.size->loc,
                                                 request.density, request.range);
    if (request.size->loc_per_fp > 0.0) {
      result.function_points = backfire_function_points(*request.size);
    }
    return result;
  }
  const double fp = request.function_points
                        ? *request.function_points
                        : backfire_function_points(*request.size);
  result.function_points = fp;
  result.prediction = predict_defects_from_fp(fp, request.density, request.range);
  return result;
}

std::string render_estimate(const EstimateResult& result, Format format) {
  const auto& p = result.prediction;
  if (format == Format::kJson) {
    Json j;
    j["method"] = std::string(to_string(p.method));
    j["function_points"] =
        result.function_points ? Json(*result.function_points) : Json(nullptr);
    j["nominal"] = p.nominal;
    j["low"] = p.low;
    j["high"] = p.high;
    return detail::dump(j);
  }
  using detail::format_number;
  if (format == Format::kCsv) {
    return "method,function_points,nominal,low,high\r\n" +
           std::string(to_string(p.method)) + "," +
           (result.function_points ? format_number(*result.function_points)
                                   : std::string()) +
           "," + format_number(p.nominal) + "," + format_number(p.low) + "," +
           format_number(p.high) + "\r\n";
  }
  std::string out;
  if (result.function_points) {
    out += "function points: " + format_number(*result.function_points) + "\n";
  }
  out += "predicted: " + format_number(p.nominal) + "\n";
  out += "range: " + format_number(p.low) + " - " + format_number(p.high) + "\n";
  out += "method: " + std::string(to_string(p.method)) + "\n";
  return out;
}

ScenarioRequest parse_scenario_request(std::string_view json_text) {
  const Json root = detail::parse_json(json_text);
  Fields f(root, "");
  f.only({"name", "overrides"});
  ScenarioRequest req;
  req.name = f.opt_string("name").value_or("scenario");
  if (!f.has("overrides")) return req;
  const Json& overrides = f.raw("overrides");
  if (!overrides.is_object()) {
    detail::schema_error("/overrides", "expected an object of path: value");
  }
  for (const auto& item : overrides.items()) {
    const Json& v = item.value();
    const std::string ptr = "/overrides/" + item.key();
    if (v.is_boolean()) {
      req.overrides[item.key()] = v.get<bool>();
    } else if (v.is_number()) {
      req.overrides[item.key()] = v.get<double>();
    } else if (v.is_string()) {
      req.overrides[item.key()] = v.get<std::string>();
    } else {
      detail::schema_error(ptr, "override values must be numbers, strings or booleans");
    }
  }
  return req;
}

}  // namespace testrisk::io
