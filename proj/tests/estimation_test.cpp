#include <gtest/gtest.h>

#include <random>

#include "testrisk/error.hpp"
#include "testrisk/estimation.hpp"

using namespace testrisk;

namespace {

void expect_error(ErrorCode code, const auto& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(BackfireTest, WorkedExampleGivesEightHundredFunctionPoints) {
  EXPECT_DOUBLE_EQ(backfire_function_points({100000, 125, 1.0}), 800.0);
}

TEST(BackfireTest, ZeroSize) {
  EXPECT_EQ(backfire_function_points({0, 125, 1.0}), 0.0);
}

TEST(BackfireTest, ComplexityAdjustmentScales) {
  EXPECT_DOUBLE_EQ(backfire_function_points({50000, 100, 1.2}), 600.0);
}

TEST(BackfireTest, RejectsNonPositiveGearingAndAdjustment) {
  expect_error(ErrorCode::kInvalidSize,
               [] { backfire_function_points({1000, 0, 1.0}); });
  expect_error(ErrorCode::kInvalidSize,
               [] { backfire_function_points({1000, 125, 0.0}); });
  expect_error(ErrorCode::kInvalidSize,
               [] { backfire_function_points({-1, 125, 1.0}); });
}

TEST(BackfireTest, LinearInLoc) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> loc(0, 1e6), gearing(10, 400),
      adj(0.5, 2.0);
  for (int i = 0; i < 500; ++i) {
    SizeEstimate s{loc(rng), gearing(rng), adj(rng)};
    SizeEstimate doubled = s;
    doubled.loc *= 2;
    EXPECT_NEAR(backfire_function_points(doubled),
                2 * backfire_function_points(s),
                1e-9 * backfire_function_points(doubled) + 1e-12);
  }
}

TEST(PredictFromFpTest, UnitRateReproducesWorkedExample) {
  const auto p = predict_defects_from_fp(800, {1.0, 8.0, 1.0});
  EXPECT_DOUBLE_EQ(p.nominal, 800.0);
  EXPECT_DOUBLE_EQ(p.low, 650.0);
  EXPECT_DOUBLE_EQ(p.high, 1400.0);
  EXPECT_EQ(p.method, PredictionMethod::kFunctionPoints);
}

TEST(PredictFromFpTest, ZeroFunctionPoints) {
  const auto p = predict_defects_from_fp(0, {3.5, 8.0, 1.7});
  EXPECT_EQ(p.nominal, 0.0);
  EXPECT_EQ(p.low, 0.0);
  EXPECT_EQ(p.high, 0.0);
}

TEST(PredictFromFpTest, CustomRangeFactors) {
  const auto p = predict_defects_from_fp(800, {1.0, 8.0, 1.0}, {0.5, 2.0});
  EXPECT_DOUBLE_EQ(p.low, 400.0);
  EXPECT_DOUBLE_EQ(p.high, 1600.0);
}

TEST(PredictFromFpTest, RejectsNegativeRates) {
  expect_error(ErrorCode::kInvalidParams,
               [] { predict_defects_from_fp(10, {-1.0, 8.0, 1.0}); });
  expect_error(ErrorCode::kInvalidParams,
               [] { predict_defects_from_fp(10, {1.0, 8.0, 0.0}); });
  expect_error(ErrorCode::kInvalidParams,
               [] { predict_defects_from_fp(-5, {1.0, 8.0, 1.0}); });
}

TEST(PredictFromLocTest, Examples) {
  EXPECT_DOUBLE_EQ(predict_defects_from_loc(100000, {1.0, 8.0, 1.0}).nominal,
                   800.0);
  EXPECT_EQ(predict_defects_from_loc(0, {1.0, 8.0, 1.0}).nominal, 0.0);
  EXPECT_DOUBLE_EQ(predict_defects_from_loc(10000, {1.0, 10.0, 0.5}).nominal,
                   50.0);
  EXPECT_EQ(predict_defects_from_loc(1, {1.0, 8.0, 1.0}).method,
            PredictionMethod::kLocDensity);
}

TEST(PredictFromLocTest, RejectsNegativeRate) {
  expect_error(ErrorCode::kInvalidParams,
               [] { predict_defects_from_loc(10, {1.0, -8.0, 1.0}); });
}

TEST(PredictionPropertyTest, BoundsAreOrdered) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> size(0, 1e5), rate(0, 20),
      adj(0.1, 3), low(0, 1), high(1, 3);
  for (int i = 0; i < 1000; ++i) {
    const RangeFactors range{low(rng), high(rng)};
    for (const auto& p :
         {predict_defects_from_fp(size(rng), {rate(rng), rate(rng), adj(rng)},
                                  range),
          predict_defects_from_loc(size(rng), {rate(rng), rate(rng), adj(rng)},
                                   range)}) {
      EXPECT_LE(p.low, p.nominal);
      EXPECT_LE(p.nominal, p.high);
    }
  }
}

TEST(PredictionPropertyTest, MonotoneInSizeAndRates) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> size(0, 1e5), rate(0, 20),
      adj(0.1, 3), bump(0, 10);
  for (int i = 0; i < 1000; ++i) {
    const DensityParams base{rate(rng), rate(rng), adj(rng)};
    const double s = size(rng);
    const double b = bump(rng);
    DensityParams more = base;
    more.defects_per_fp += b;
    more.defects_per_kloc += b;
    more.adjustment += b;
    EXPECT_LE(predict_defects_from_fp(s, base).nominal,
              predict_defects_from_fp(s + b, base).nominal);
    EXPECT_LE(predict_defects_from_fp(s, base).nominal,
              predict_defects_from_fp(s, more).nominal);
    EXPECT_LE(predict_defects_from_loc(s, base).nominal,
              predict_defects_from_loc(s + b, base).nominal);
    EXPECT_LE(predict_defects_from_loc(s, base).nominal,
              predict_defects_from_loc(s, more).nominal);
  }
}

// fp route with per_fp equals the loc route with per_kloc = 1000 per_fp / g.
TEST(PredictionPropertyTest, FunctionPointAndDensityRoutesAgree) {
  for (double loc : {0.0, 1.0, 999.0, 12345.0, 100000.0, 2.5e6}) {
    for (double gearing : {20.0, 53.0, 125.0, 320.0}) {
      for (double per_fp : {0.0, 0.25, 1.0, 4.75}) {
        const double fp = backfire_function_points({loc, gearing, 1.0});
        const double via_fp =
            predict_defects_from_fp(fp, {per_fp, 0.0, 1.0}).nominal;
        const double via_loc =
            predict_defects_from_loc(loc, {0.0, 1000.0 * per_fp / gearing, 1.0})
                .nominal;
        EXPECT_NEAR(via_fp, via_loc, 1e-9 * std::max(1.0, via_fp))
            << loc << " " << gearing << " " << per_fp;
      }
    }
  }
}

TEST(DirectPredictionTest, DerivesBoundsFromFactors) {
  const auto p = make_direct_prediction(800);
  EXPECT_EQ(p, (DefectPrediction{800, 650, 1400, PredictionMethod::kDirect}));
}

TEST(DirectPredictionTest, RejectsDisorderedBounds) {
  expect_error(ErrorCode::kInvalidParams,
               [] { make_direct_prediction(800, 900, 1000); });
  expect_error(ErrorCode::kInvalidParams,
               [] { make_direct_prediction(800, 600, 700); });
}
