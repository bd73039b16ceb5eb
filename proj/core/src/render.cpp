#include <cmath>
#include <cstdio>

#include "json_support.hpp"
#include "number_format.hpp"
#include "testrisk/io.hpp"

namespace testrisk::io {
namespace {

using detail::Json;
using detail::format_number;

using Table = std::vector<std::vector<std::string>>;

std::string markdown(const Table& table) {
  std::string out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    out += "|";
    for (const auto& cell : table[r]) out += " " + cell + " |";
    out += "\n";
    if (r == 0) {
      out += "|";
      for (std::size_t c = 0; c < table[r].size(); ++c) out += " --- |";
      out += "\n";
    }
  }
  return out;
}

std::string csv(const Table& table) {
  std::string out;
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += csv_field(row[c]);
    }
    out += "\r\n";
  }
  return out;
}

// Tables in the order given: blank line between markdown tables, empty
// record between CSV tables.
std::string emit(const std::vector<Table>& tables, Format format) {
  std::string out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out += format == Format::kCsv ? "\r\n" : "\n";
    out += format == Format::kCsv ? csv(tables[i]) : markdown(tables[i]);
  }
  return out;
}

std::string signed_number(double value) {
  if (value == 0.0) return "0";
  return (value > 0 ? "+" : "") + format_number(value);
}

Table risk_table(const RiskMatrix& m) {
  Table t(9);
  t[0] = {"TEST LEVEL"};
  t[1] = {"TEST SCOPE"};
  t[2] = {"INTENSITY"};
  t[3] = {"ENVIRONMENT"};
  t[4] = {"STAFF"};
  t[5] = {"STAFF WEEKS"};
  t[6] = {"CALENDAR WEEKS"};
  t[7] = {"PREDICTED DEFECTS"};
  t[8] = {"DRE"};
  t.push_back({"DELIVERED DEFECTS"});
  for (const auto& row : m.rows) {
    const auto& p = row.plan;
    t[0].push_back(p.level.name);
    t[1].push_back(p.scope_label);
    t[2].push_back(p.intensity);
    t[3].push_back(p.environment);
    t[4].push_back(std::to_string(p.staff));
    t[5].push_back(format_number(row.staff_weeks));
    t[6].push_back(format_number(p.calendar_weeks));
    t[7].push_back(std::to_string(m.predicted_display));
    t[8].push_back(format_percent(p.dre));
    t[9].push_back(std::to_string(row.delivered.display));
  }
  return t;
}

Table scope_table(const ScopeMatrix& scope) {
  Table t;
  t.push_back({"SCOPE"});
  for (const auto& l : scope.levels) t[0].push_back(l);
  for (const auto& row : scope.rows) {
    std::vector<std::string> r{row.activity};
    r.insert(r.end(), row.grades.begin(), row.grades.end());
    t.push_back(std::move(r));
  }
  return t;
}

Table selection_table(const ScenarioResult& result) {
  Table t;
  t.push_back({"SELECTION", "BASE", "SCENARIO", "DELTA"});
  const auto& b = result.base_selection;
  const auto& s = result.selection;
  auto level = [](const std::optional<Selection>& sel) {
    return sel ? sel->level + " (" + sel->scope_label + ")" : std::string("-");
  };
  auto delivered = [](const std::optional<Selection>& sel) {
    return sel ? std::to_string(sel->delivered.display) : std::string("-");
  };
  std::string delta = "-";
  if (b && s) {
    delta = signed_number(static_cast<double>(s->delivered.display -
                                              b->delivered.display));
  }
  t.push_back({"LEVEL", level(b), level(s), "-"});
  t.push_back({"DELIVERED DEFECTS", delivered(b), delivered(s), delta});
  return t;
}

Json selection_or_null(const std::optional<Selection>& s) {
  return s ? detail::to_json(*s) : Json(nullptr);
}

Json scenario_json(const ScenarioResult& r) {
  Json j;
  j["name"] = r.name;
  j["selection"] = selection_or_null(r.selection);
  j["base_selection"] = selection_or_null(r.base_selection);
  if (r.selection && r.base_selection) {
    Json d;
    d["delivered_defects_exact"] =
        r.selection->delivered.exact - r.base_selection->delivered.exact;
    d["delivered_defects_display"] =
        r.selection->delivered.display - r.base_selection->delivered.display;
    j["selection_delta"] = std::move(d);
  } else {
    j["selection_delta"] = nullptr;
  }
  Json deltas = Json::array();
  for (const auto& d : r.deltas) {
    Json e;
    e["level"] = d.level;
    e["delivered_defects_exact"] = d.delivered_exact;
    e["delivered_defects_display"] = d.delivered_display;
    e["staff_weeks"] = d.staff_weeks;
    e["calendar_weeks"] = d.calendar_weeks;
    deltas.push_back(std::move(e));
  }
  j["deltas"] = std::move(deltas);
  j["matrix"] = detail::matrix_json(
      r.matrix, r.scope,
      r.selection ? std::optional<std::string>(r.selection->level)
                  : std::nullopt);
  return j;
}

}  // namespace

std::optional<Format> parse_format(std::string_view name) {
  if (name == "md" || name == "markdown") return Format::kMarkdown;
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  return std::nullopt;
}

std::string format_percent(double fraction) {
  const double pct = fraction * 100.0;
  const double whole_pct = std::round(pct);
  if (std::abs(pct - whole_pct) < 1e-9) {
    return format_number(whole_pct == 0.0 ? 0.0 : whole_pct) + "%";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", pct);
  std::string text = buf;
  while (text.back() == '0') text.pop_back();
  if (text.back() == '.') text.pop_back();
  return text + "%";
}

std::string render_matrix(const RiskMatrix& matrix, const ScopeMatrix& scope,
                          Format format,
                          const std::optional<std::string>& selected_level) {
  if (format == Format::kJson) {
    return detail::dump(detail::matrix_json(matrix, scope, selected_level));
  }
  return emit({risk_table(matrix),
               scope_table(scope)},
              format);
}

std::string render_plan(const EvaluatedPlan& plan, Format format) {
  return render_matrix(plan.matrix, plan.scope, format, plan.selected_level);
}

std::string render_scope(const ScopeMatrix& scope, Format format) {
  if (format == Format::kJson) return detail::dump(detail::to_json(scope));
  return emit({scope_table(scope)}, format);
}

std::string render_scenario(const ScenarioResult& result, Format format) {
  if (format == Format::kJson) return detail::dump(scenario_json(result));
  Table deltas;
  deltas.push_back({"DELTA"});
  deltas.push_back({"DELIVERED DEFECTS"});
  deltas.push_back({"STAFF WEEKS"});
  deltas.push_back({"CALENDAR WEEKS"});
  for (const auto& d : result.deltas) {
    deltas[0].push_back(d.level);
    deltas[1].push_back(signed_number(static_cast<double>(d.delivered_display)));
    deltas[2].push_back(signed_number(d.staff_weeks));
    deltas[3].push_back(signed_number(d.calendar_weeks));
  }
  return emit({risk_table(result.matrix),
               scope_table(result.scope), deltas, selection_table(result)},
              format);
}

std::string render_comparison(const ComparisonTable& table, Format format) {
  if (format == Format::kJson) {
    Json j;
    j["levels"] = table.levels;
    Json columns = Json::array();
    for (const auto& c : table.columns) {
      Json col;
      col["scenario"] = c.scenario;
      col["selection"] = selection_or_null(c.selection);
      Json exact = Json::array();
      Json display = Json::array();
      for (const auto& d : c.delivered) {
        exact.push_back(d.exact);
        display.push_back(d.display);
      }
      col["delivered_defects_exact"] = std::move(exact);
      col["delivered_defects_display"] = std::move(display);
      col["staff_weeks"] = c.staff_weeks;
      col["calendar_weeks"] = c.calendar_weeks;
      columns.push_back(std::move(col));
    }
    j["columns"] = std::move(columns);
    return detail::dump(j);
  }
  Table t;
  t.push_back({"SCENARIO"});
  t.push_back({"SELECTED LEVEL"});
  t.push_back({"SELECTED DELIVERED DEFECTS"});
  for (const auto& c : table.columns) {
    t[0].push_back(c.scenario);
    t[1].push_back(c.selection ? c.selection->level : "-");
    t[2].push_back(c.selection ? std::to_string(c.selection->delivered.display)
                               : "-");
  }
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    std::vector<std::string> delivered{"DELIVERED DEFECTS " + table.levels[i]};
    std::vector<std::string> staff{"STAFF WEEKS " + table.levels[i]};
    std::vector<std::string> calendar{"CALENDAR WEEKS " + table.levels[i]};
    for (const auto& c : table.columns) {
      delivered.push_back(std::to_string(c.delivered[i].display));
      staff.push_back(format_number(c.staff_weeks[i]));
      calendar.push_back(format_number(c.calendar_weeks[i]));
    }
    t.push_back(std::move(delivered));
    t.push_back(std::move(staff));
    t.push_back(std::move(calendar));
  }
  return emit({t}, format);
}

std::string render_dre_profiles(
    const std::vector<std::pair<std::string, DreProfile>>& profiles,
    Format format) {
  if (format == Format::kJson) {
    Json j = Json::array();
    for (const auto& [release, profile] : profiles) {
      Json r;
      r["release"] = release;
      Json phases = Json::array();
      for (const auto& p : profile.phases) {
        Json e;
        e["phase"] = p.phase;
        e["efficiency"] = p.efficiency;
        e["found"] = p.found;
        e["subsequent"] = p.subsequent;
        e["caution"] = p.caution;
        phases.push_back(std::move(e));
      }
      r["phases"] = std::move(phases);
      r["notes"] = profile.notes;
      j.push_back(std::move(r));
    }
    return detail::dump(j);
  }
  Table t;
  t.push_back({"RELEASE", "PHASE", "N", "S", "DRE", "CAUTION"});
  for (const auto& [release, profile] : profiles) {
    for (const auto& p : profile.phases) {
      t.push_back({release, p.phase, std::to_string(p.found),
                   std::to_string(p.subsequent), format_percent(p.efficiency),
                   p.caution ? "dre = 1, lower below 1 before planning" : ""});
    }
  }
  return emit({t}, format);
}

std::string render_calibration(const Calibration& c, Format format) {
  if (format == Format::kJson) {
    Json j;
    j["defects_per_fp"] = c.params.defects_per_fp;
    j["defects_per_kloc"] = c.params.defects_per_kloc;
    j["adjustment"] = c.params.adjustment;
    j["histories_used"] = c.histories_used;
    j["notes"] = c.notes;
    return detail::dump(j);
  }
  Table t;
  t.push_back({"PARAMETER", "VALUE"});
  t.push_back({"defects_per_fp", format_number(c.params.defects_per_fp)});
  t.push_back({"defects_per_kloc", format_number(c.params.defects_per_kloc)});
  t.push_back({"adjustment", format_number(c.params.adjustment)});
  t.push_back({"histories_used", std::to_string(c.histories_used)});
  return emit({t}, format);
}

std::string render_findings_text(const ValidationReport& report) {
  std::string out;
  for (const auto& f : report.findings) {
    out += std::string(to_string(f.severity)) + " " + f.location + ": " +
           f.message + "\n";
  }
  return out;
}

std::string render_error(const Error& error) {
  Json j;
  j["error"] = std::string(to_string(error.code()));
  j["message"] = error.what();
  if (!error.location().empty()) j["location"] = error.location();
  if (const auto* v = dynamic_cast<const ValidationFailure*>(&error)) {
    Json findings = Json::array();
    for (const auto& f : v->report().findings) {
      findings.push_back(detail::to_json(f));
    }
    j["findings"] = std::move(findings);
  }
  return detail::dump(j);
}

}  // namespace testrisk::io
