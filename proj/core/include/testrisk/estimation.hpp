#pragma once

#include <string_view>

namespace testrisk {

/// System size as lines of code plus the backfiring gearing.
struct SizeEstimate {
  double loc = 0.0;
  double loc_per_fp = 125.0;  ///< source statements per function point
  double complexity_adjustment = 1.0;

  bool operator==(const SizeEstimate&) const = default;
};

/// Defect-density rates. The shipped values (1.0 per FP, 8.0 per KLOC) are
/// example defaults consistent with the 100 KLOC / 800 FP / 800 defect
/// worked example, not industry figures.
struct DensityParams {
  double defects_per_fp = 1.0;
  double defects_per_kloc = 8.0;
  double adjustment = 1.0;

  bool operator==(const DensityParams&) const = default;
};

/// Multipliers that turn a nominal prediction into its low/high bounds.
/// Defaults are 650/800 and 1400/800.
struct RangeFactors {
  double low = 0.8125;
  double high = 1.75;

  bool operator==(const RangeFactors&) const = default;
};

enum class PredictionMethod { kFunctionPoints, kLocDensity, kDirect };

std::string_view to_string(PredictionMethod method) noexcept;

/// Defects present at system-test entry. Values stay real; rounding is a
/// rendering concern.
struct DefectPrediction {
  double nominal = 0.0;
  double low = 0.0;
  double high = 0.0;
  PredictionMethod method = PredictionMethod::kDirect;

  bool operator==(const DefectPrediction&) const = default;
};

void validate(const SizeEstimate& size);
void validate(const DensityParams& params);
void validate(const RangeFactors& factors);

/// (loc / loc_per_fp) * complexity_adjustment. Throws invalid-size.
double backfire_function_points(const SizeEstimate& size);

/// nominal = fp * defects_per_fp * adjustment. Throws invalid-params.
DefectPrediction predict_defects_from_fp(double function_points,
                                         const DensityParams& params,
                                         const RangeFactors& range = {});

/// nominal = (loc / 1000) * defects_per_kloc * adjustment.
DefectPrediction predict_defects_from_loc(double loc,
                                          const DensityParams& params,
                                          const RangeFactors& range = {});

/// A prediction supplied by hand. Missing bounds come from `range`; the
/// result must satisfy low <= nominal <= high or invalid-params is thrown.
DefectPrediction make_direct_prediction(double nominal,
                                        const RangeFactors& range = {});
DefectPrediction make_direct_prediction(double nominal, double low,
                                        double high);

}  // namespace testrisk
