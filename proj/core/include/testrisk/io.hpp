#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "testrisk/calibration.hpp"
#include "testrisk/estimation.hpp"
#include "testrisk/matrix.hpp"
#include "testrisk/plan.hpp"
#include "testrisk/planning.hpp"

namespace testrisk::io {

// ---------------------------------------------------------------------------
// Plan documents (UTF-8 JSON)
// ---------------------------------------------------------------------------

/// Parses and validates a plan. Omitted levels, scope grid and options are
/// filled with the defaults; a level may omit scope/intensity/environment/dre
/// when its name is one of the default ladder's.
/// Throws parse-error (location "line L, column C"), schema-error (location is
/// a JSON pointer) or invariant-violation.
PlanDocument load_plan(std::string_view text);

/// Canonical form: fixed key order, 2-space indent, trailing newline.
std::string save_plan(const PlanDocument& doc);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

using CsvRow = std::vector<std::string>;

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF. A trailing
/// newline does not produce an empty record. Throws parse-error.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view field);

/// Header "release,phase,order,defects". Rows group by release in order of
/// first appearance; phases are sorted by order. Throws parse-error,
/// negative-count or duplicate, with the 1-based row number as location.
std::vector<ReleaseHistory> load_history_csv(std::string_view text);

/// Header "release,loc,loc_per_fp".
std::map<std::string, SizeEstimate> load_sizes_csv(std::string_view text);

void attach_sizes(std::vector<ReleaseHistory>& histories,
                  const std::map<std::string, SizeEstimate>& sizes);

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

enum class Format { kMarkdown, kCsv, kJson };

std::optional<Format> parse_format(std::string_view name);

/// Both tables in the published row order, levels as columns. JSON carries
/// exact and display delivered defects plus the validation findings.
std::string render_matrix(const RiskMatrix& matrix, const ScopeMatrix& scope,
                          Format format,
                          const std::optional<std::string>& selected_level = {});
std::string render_plan(const EvaluatedPlan& plan, Format format);
std::string render_scope(const ScopeMatrix& scope, Format format);
std::string render_scenario(const ScenarioResult& result, Format format);
std::string render_comparison(const ComparisonTable& table, Format format);
std::string render_dre_profiles(
    const std::vector<std::pair<std::string, DreProfile>>& profiles,
    Format format);
std::string render_calibration(const Calibration& calibration, Format format);

/// "10%", "85%", "12.5%".
std::string format_percent(double fraction);

/// One "severity location: message" line per finding.
std::string render_findings_text(const ValidationReport& report);

/// {"error": code, "message": ..., "location": ...}; a validation failure
/// also lists its findings.
std::string render_error(const Error& error);

// ---------------------------------------------------------------------------
// Estimation requests
// ---------------------------------------------------------------------------

struct EstimateRequest {
  std::optional<PredictionMethod> method;  ///< inferred when absent
  std::optional<SizeEstimate> size;
  std::optional<double> function_points;
  DensityParams density;
  bool has_defects_per_fp = false;
  bool has_defects_per_kloc = false;
  RangeFactors range;
};

struct EstimateResult {
  DefectPrediction prediction;
  std::optional<double> function_points;
};

EstimateRequest parse_estimate_request(std::string_view json_text);

/// fp when a per-FP rate or an FP count is given, loc_density when only a
/// per-KLOC rate is given. Throws invalid-params / invalid-size.
EstimateResult run_estimate(const EstimateRequest& request);

std::string render_estimate(const EstimateResult& result, Format format);

/// {"name": ..., "overrides": {path: value}}.
struct ScenarioRequest {
  std::string name;
  Overrides overrides;
};

ScenarioRequest parse_scenario_request(std::string_view json_text);

}  // namespace testrisk::io
