#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "testrisk/estimation.hpp"

namespace testrisk {

struct PhaseRecord {
  std::string phase_name;
  int order = 0;
  long long defects_found = 0;

  bool operator==(const PhaseRecord&) const = default;
};

struct ReleaseHistory {
  std::string release_name;
  std::optional<SizeEstimate> size;
  std::vector<PhaseRecord> phases;  ///< sorted by order

  bool operator==(const ReleaseHistory&) const = default;
};

/// Sorts phases and rejects negative counts or repeated orders.
void validate(ReleaseHistory& history);

/// Card's effectiveness E = N / (N + S). `caution` is set when E == 1,
/// which a level plan cannot accept as-is.
struct PhaseEfficiency {
  std::string phase;
  double efficiency = 0.0;
  long long found = 0;       ///< N
  long long subsequent = 0;  ///< S, defects found at strictly later orders
  bool caution = false;

  bool operator==(const PhaseEfficiency&) const = default;
};

/// Throws unknown-phase, or no-defects when N + S == 0.
PhaseEfficiency dre_of_phase(const ReleaseHistory& history,
                             std::string_view phase);

struct DreProfile {
  std::vector<PhaseEfficiency> phases;
  std::vector<std::string> notes;  ///< phases omitted for N + S == 0
};

/// dre_of_phase for every phase that has defects at or after it.
/// Throws empty-history when the history has no phases.
DreProfile dre_profile(const ReleaseHistory& history);

/// Brings a measured efficiency into the range a plan accepts. Values of 1
/// (or above) become `ceiling`; `adjusted` reports whether that happened.
struct PlanDre {
  double value = 0.0;
  bool adjusted = false;
};
PlanDre dre_for_plan(double measured, double ceiling = 0.999);

struct CalibrationOptions {
  /// Phase marking system-test entry. Defects at this order and later are
  /// the ones the prediction targets. Unset means every recorded phase.
  std::optional<std::string> entry_phase;
  /// Sum of defects over sum of size instead of the mean of ratios.
  bool size_weighted = false;
};

struct Calibration {
  DensityParams params;
  std::size_t histories_used = 0;
  std::vector<std::string> notes;
};

/// Derives defects-per-KLOC and defects-per-FP from past releases. Throws
/// no-usable-history when no release has both a size and defects.
Calibration calibrate_density(const std::vector<ReleaseHistory>& histories,
                              const CalibrationOptions& options = {});

}  // namespace testrisk
