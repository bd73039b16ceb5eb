#include "testrisk/calibration.hpp"

#include <algorithm>
#include <set>

#include "testrisk/error.hpp"

namespace testrisk {

void validate(ReleaseHistory& history) {
  std::sort(history.phases.begin(), history.phases.end(),
            [](const auto& a, const auto& b) { return a.order < b.order; });
  std::set<int> orders;
  for (const auto& phase : history.phases) {
    if (phase.defects_found < 0) {
      throw Error(ErrorCode::kNegativeCount,
                  "negative defect count for phase " + phase.phase_name,
                  history.release_name + "." + phase.phase_name);
    }
    if (!orders.insert(phase.order).second) {
      throw Error(ErrorCode::kDuplicate,
                  "order " + std::to_string(phase.order) +
                      " appears twice in release " + history.release_name,
                  history.release_name + "." + phase.phase_name);
    }
  }
  if (history.size) validate(*history.size);
}

PhaseEfficiency dre_of_phase(const ReleaseHistory& history,
                             std::string_view phase) {
  auto it = std::find_if(
      history.phases.begin(), history.phases.end(),
      [&](const PhaseRecord& p) { return p.phase_name == phase; });
  if (it == history.phases.end()) {
    throw Error(ErrorCode::kUnknownPhase,
                "phase '" + std::string(phase) + "' not in release " +
                    history.release_name,
                std::string(phase));
  }
  PhaseEfficiency out;
  out.phase = it->phase_name;
  out.found = it->defects_found;
  for (const auto& later : history.phases) {
    if (later.order > it->order) out.subsequent += later.defects_found;
  }
  const long long total = out.found + out.subsequent;
  if (total == 0) {
    throw Error(ErrorCode::kNoDefects,
                "no defects at or after phase '" + out.phase +
                    "'; efficiency is undefined",
                out.phase);
  }
  out.efficiency = static_cast<double>(out.found) / static_cast<double>(total);
  out.caution = out.subsequent == 0;
  return out;
}

DreProfile dre_profile(const ReleaseHistory& history) {
  if (history.phases.empty()) {
    throw Error(ErrorCode::kEmptyHistory,
                "release " + history.release_name + " has no phases",
                history.release_name);
  }
  DreProfile profile;
  for (const auto& phase : history.phases) {
    try {
      profile.phases.push_back(dre_of_phase(history, phase.phase_name));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoDefects) throw;
      profile.notes.push_back("phase " + phase.phase_name +
                              " omitted: no defects at or after it");
    }
  }
  return profile;
}

PlanDre dre_for_plan(double measured, double ceiling) {
  if (measured >= 1.0) return {ceiling, true};
  if (measured < 0.0) return {0.0, true};
  return {measured, false};
}

Calibration calibrate_density(const std::vector<ReleaseHistory>& histories,
                              const CalibrationOptions& options) {
  Calibration out;
  double sum_per_kloc = 0.0;
  double sum_per_fp = 0.0;
  double total_defects = 0.0;
  double total_kloc = 0.0;
  double total_fp = 0.0;

  for (const auto& history : histories) {
    if (!history.size) {
      out.notes.push_back("release " + history.release_name +
                          " skipped: no size");
      continue;
    }
    std::optional<int> entry_order;
    if (options.entry_phase) {
      for (const auto& p : history.phases) {
        if (p.phase_name == *options.entry_phase) entry_order = p.order;
      }
      if (!entry_order) {
        out.notes.push_back("release " + history.release_name +
                            " skipped: no phase " + *options.entry_phase);
        continue;
      }
    }
    long long defects = 0;
    for (const auto& p : history.phases) {
      if (!entry_order || p.order >= *entry_order) defects += p.defects_found;
    }
    const double kloc = history.size->loc / 1000.0;
    const double fp = backfire_function_points(*history.size);
    if (kloc <= 0.0 || fp <= 0.0) {
      out.notes.push_back("release " + history.release_name +
                          " skipped: zero size");
      continue;
    }
    sum_per_kloc += defects / kloc;
    sum_per_fp += defects / fp;
    total_defects += static_cast<double>(defects);
    total_kloc += kloc;
    total_fp += fp;
    ++out.histories_used;
  }

  if (out.histories_used == 0) {
    throw Error(ErrorCode::kNoUsableHistory,
                "no release has both a size and phase data", "histories");
  }
  if (options.size_weighted) {
    out.params.defects_per_kloc = total_defects / total_kloc;
    out.params.defects_per_fp = total_defects / total_fp;
  } else {
    const auto n = static_cast<double>(out.histories_used);
    out.params.defects_per_kloc = sum_per_kloc / n;
    out.params.defects_per_fp = sum_per_fp / n;
  }
  out.params.adjustment = 1.0;
  return out;
}

}  // namespace testrisk
