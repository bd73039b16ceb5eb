#include "testrisk/estimation.hpp"

#include <cmath>
#include <string>

#include "testrisk/error.hpp"

namespace testrisk {
namespace {

bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

DefectPrediction ranged(double nominal, const RangeFactors& range,
                        PredictionMethod method) {
  validate(range);
  return {nominal, nominal * range.low, nominal * range.high, method};
}

}  // namespace

std::string_view to_string(PredictionMethod method) noexcept {
  switch (method) {
    case PredictionMethod::kFunctionPoints: return "fp";
    case PredictionMethod::kLocDensity: return "loc_density";
    case PredictionMethod::kDirect: return "direct";
  }
  return "direct";
}

void validate(const SizeEstimate& size) {
  if (!finite_nonnegative(size.loc)) {
    throw Error(ErrorCode::kInvalidSize, "loc must be >= 0", "loc");
  }
  if (!finite_positive(size.loc_per_fp)) {
    throw Error(ErrorCode::kInvalidSize, "loc_per_fp must be > 0",
                "loc_per_fp");
  }
  if (!finite_positive(size.complexity_adjustment)) {
    throw Error(ErrorCode::kInvalidSize, "complexity_adjustment must be > 0",
                "complexity_adjustment");
  }
}

void validate(const DensityParams& params) {
  if (!finite_nonnegative(params.defects_per_fp)) {
    throw Error(ErrorCode::kInvalidParams, "defects_per_fp must be >= 0",
                "defects_per_fp");
  }
  if (!finite_nonnegative(params.defects_per_kloc)) {
    throw Error(ErrorCode::kInvalidParams, "defects_per_kloc must be >= 0",
                "defects_per_kloc");
  }
  if (!finite_positive(params.adjustment)) {
    throw Error(ErrorCode::kInvalidParams, "adjustment must be > 0",
                "adjustment");
  }
}

void validate(const RangeFactors& factors) {
  if (!finite_nonnegative(factors.low) || factors.low > 1.0) {
    throw Error(ErrorCode::kInvalidParams,
                "range low factor must be in [0, 1]", "range_factors.low");
  }
  if (!std::isfinite(factors.high) || factors.high < 1.0) {
    throw Error(ErrorCode::kInvalidParams, "range high factor must be >= 1",
                "range_factors.high");
  }
}

double backfire_function_points(const SizeEstimate& size) {
  validate(size);
  return size.loc / size.loc_per_fp * size.complexity_adjustment;
}

DefectPrediction predict_defects_from_fp(double function_points,
                                         const DensityParams& params,
                                         const RangeFactors& range) {
  if (!finite_nonnegative(function_points)) {
    throw Error(ErrorCode::kInvalidParams, "function points must be >= 0",
                "fp");
  }
  validate(params);
  return ranged(function_points * params.defects_per_fp * params.adjustment,
                range, PredictionMethod::kFunctionPoints);
}

DefectPrediction predict_defects_from_loc(double loc,
                                          const DensityParams& params,
                                          const RangeFactors& range) {
  if (!finite_nonnegative(loc)) {
    throw Error(ErrorCode::kInvalidSize, "loc must be >= 0", "loc");
  }
  validate(params);
  return ranged(loc / 1000.0 * params.defects_per_kloc * params.adjustment,
                range, PredictionMethod::kLocDensity);
}

DefectPrediction make_direct_prediction(double nominal,
                                        const RangeFactors& range) {
  if (!finite_nonnegative(nominal)) {
    throw Error(ErrorCode::kInvalidParams, "nominal must be >= 0", "nominal");
  }
  return ranged(nominal, range, PredictionMethod::kDirect);
}

DefectPrediction make_direct_prediction(double nominal, double low,
                                        double high) {
  if (!finite_nonnegative(low) || !finite_nonnegative(nominal) ||
      !std::isfinite(high)) {
    throw Error(ErrorCode::kInvalidParams,
                "prediction values must be finite and >= 0", "nominal");
  }
  if (low > nominal) {
    throw Error(ErrorCode::kInvalidParams,
                "low must not exceed nominal (" + std::to_string(low) + " > " +
                    std::to_string(nominal) + ")",
                "low");
  }
  if (nominal > high) {
    throw Error(ErrorCode::kInvalidParams, "nominal must not exceed high",
                "high");
  }
  return {nominal, low, high, PredictionMethod::kDirect};
}

}  // namespace testrisk
