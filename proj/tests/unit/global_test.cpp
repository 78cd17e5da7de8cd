// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "posthoc/error.hpp"
#include "posthoc/global.hpp"
#include "support.hpp"

namespace posthoc {
namespace {

using testing::LinearData;
using testing::LinearFunction;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// x1 ~ U(0, 1), x2 = x1 + N(0, sd), y = x2.
Dataset CorrelatedPair(std::size_t n, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> noise(0, sd);
  std::vector<double> x1(n), x2(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = u(rng);
    x2[i] = x1[i] + noise(rng);
  }
  std::vector<double> y = x2;
  return Dataset::FromColumns(
      FeatureSchema({Feature::Numeric("x1"), Feature::Numeric("x2")}, "y"), {x1, x2}, y);
}

TEST(Importance, IgnoredFeatureHasRatioExactlyOne) {
  const Dataset data = LinearData(200, {0.5, 2.0, 0.0, -1.0}, 0.5, 1);
  const auto model = LinearFunction({0.5, 2.0, 0.0, -1.0});
  ImportanceOptions options;
  options.repeats = 5;
  const auto table = PermutationImportance(*model, data, options);
  const auto it = std::find_if(table.rows.begin(), table.rows.end(),
                               [](const auto& r) { return r.name == "x2"; });
  ASSERT_NE(it, table.rows.end());
  for (double r : it->ratios) EXPECT_EQ(r, 1.0);
  EXPECT_EQ(it->sd, 0.0);
}

TEST(Importance, ZeroBaseErrorIsDegenerate) {
  const Dataset data = LinearData(50, {0.0, 1.0}, 0.0, 2);
  const auto model = LinearFunction({0.0, 1.0});
  ImportanceOptions options;
  EXPECT_EQ(CodeOf([&] { PermutationImportance(*model, data, options); }),
            ErrorCode::kDegenerate);
}

TEST(Importance, InformativeFeatureRanksFirst) {
  const Dataset data = LinearData(500, {0.0, 1.0, 0.0}, 0.3, 3);
  const FittedLinear model = FitRidge(data, 0.0);
  ImportanceOptions options;
  options.repeats = 5;
  options.seed = 9;
  const auto table = PermutationImportance(model, data, options);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[0].name, "x1");
  for (double r : table.rows[0].ratios) EXPECT_GT(r, 1.0);
  EXPECT_NEAR(table.rows[1].mean, 1.0, 0.05);
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    EXPECT_GE(table.rows[i - 1].mean, table.rows[i].mean);
  }
}

TEST(Importance, DeterministicUnderSeed) {
  const Dataset data = LinearData(300, {0.0, 1.0, 0.5, 0.2}, 0.3, 4);
  const auto model = LinearFunction({0.0, 1.0, 0.5, 0.2});
  ImportanceOptions options;
  options.seed = 17;
  const auto a = PermutationImportance(*model, data, options);
  const auto b = PermutationImportance(*model, data, options);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].name, b.rows[i].name);
    EXPECT_EQ(a.rows[i].ratios, b.rows[i].ratios);
  }
  options.seed = 18;
  const auto c = PermutationImportance(*model, data, options);
  EXPECT_NE(a.rows[0].ratios, c.rows[0].ratios);
}

TEST(Importance, GroupsAndPerModality) {
  const FeatureSchema schema({Feature::Numeric("x"), Feature::Categorical("c", {"a", "b", "c"})},
                             "y");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> level(0, 2);
  std::normal_distribution<double> noise(0, 0.1);
  std::vector<double> x(300), c(300), y(300);
  for (std::size_t i = 0; i < 300; ++i) {
    x[i] = u(rng);
    c[i] = level(rng);
    y[i] = x[i] + (c[i] == 2 ? 3.0 : 0.0) + noise(rng);
  }
  const Dataset data = Dataset::FromColumns(schema, {x, c}, y);
  const FittedLinear model = FitRidge(data, 0.0);

  ImportanceOptions grouped;
  grouped.groups = {{"everything", {"x", "c"}}, {"level", {"c"}}};
  const auto g = PermutationImportance(model, data, grouped);
  ASSERT_EQ(g.rows.size(), 2u);
  EXPECT_EQ(g.rows[0].name, "everything");

  ImportanceOptions per;
  per.per_modality = true;
  const auto pm = PermutationImportance(model, data, per);
  ASSERT_EQ(pm.rows.size(), 4u);  // x, c=a, c=b, c=c
  EXPECT_EQ(pm.rows[0].name, "c=c");
  for (const auto& row : pm.rows) EXPECT_GE(row.sd, 0.0);

  ImportanceOptions bad;
  bad.groups = {{"nothing", {}}};
  EXPECT_EQ(CodeOf([&] { PermutationImportance(model, data, bad); }),
            ErrorCode::kInvalidArgument);
}

TEST(Importance, PerModalityScoresEachLevel) {
  const FeatureSchema schema({Feature::Numeric("x"), Feature::Categorical("c", {"a", "b", "c"})},
                             "y");
  std::vector<double> x, c, y;
  for (int i = 0; i < 90; ++i) {
    x.push_back(i % 7);
    c.push_back(i % 3);
    y.push_back((i % 3 == 1 ? 1.0 : 0.0) + 0.01 * (i % 5));
  }
  const Dataset data = Dataset::FromColumns(schema, {x, c}, y);
  // Reads only 1{c = b}: that level's indicator matters most.
  const FunctionPredictor reads_b([](std::span<const double> r) { return r[1] == 1 ? 1.0 : 0.0; },
                                  "indicator b");
  ImportanceOptions per;
  per.per_modality = true;
  const auto table = PermutationImportance(reads_b, data, per);
  EXPECT_EQ(table.rows.front().name, "c=b");
  // A model that ignores c leaves every level at exactly 1.
  const FunctionPredictor ignores_c([](std::span<const double> r) { return 0.1 * r[0]; }, "x");
  for (const auto& row : PermutationImportance(ignores_c, data, per).rows) {
    if (row.name.starts_with("c=")) {
      for (double r : row.ratios) EXPECT_EQ(r, 1.0);
    }
  }
}

TEST(Grid, QuantilesOrUniqueValues) {
  const Dataset small = Dataset::FromColumns(FeatureSchema({Feature::Numeric("x")}),
                                             {{3, 1, 2, 1}});
  EXPECT_EQ(MakeGrid(small, 0, 20).values, (std::vector<double>{1, 2, 3}));
  std::vector<double> v(101);
  std::iota(v.begin(), v.end(), 0.0);
  const Dataset big = Dataset::FromColumns(FeatureSchema({Feature::Numeric("x")}), {v});
  const auto grid = MakeGrid(big, 0, 5);
  EXPECT_EQ(grid.values, (std::vector<double>{0, 25, 50, 75, 100}));
  EXPECT_EQ(CodeOf([&] { MakeGrid(big, 0, 1); }), ErrorCode::kInvalidArgument);
}

TEST(Pdp, LinearModelOracle) {
  const std::vector<double> beta{0.7, 1.5, -2.0, 0.25};
  const Dataset data = LinearData(400, beta, 0.0, 6);
  const auto model = LinearFunction(beta);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto pdp = Pdp(*model, data, "x" + std::to_string(j + 1), 20);
    for (std::size_t g = 0; g < pdp.values.size(); ++g) {
      double expected = beta[0] + beta[j + 1] * pdp.grid().values[g];
      for (std::size_t l = 0; l < 3; ++l) {
        if (l != j) expected += beta[l + 1] * testing::ColumnMean(data, l);
      }
      EXPECT_NEAR(pdp.values[g], expected, 1e-9);
    }
    EXPECT_NEAR(CurveSlope(pdp), beta[j + 1], 1e-9);
  }
}

TEST(Pdp, FittedLinearIsAffineProperty) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset data = LinearData(120, {0.1, 1.0, -3.0}, 1.0, seed);
    const FittedLinear model = FitRidge(data, 0.3);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto pdp = Pdp(model, data, "x" + std::to_string(j + 1), 15);
      const auto& g = pdp.grid().values;
      for (std::size_t k = 1; k < g.size(); ++k) {
        EXPECT_NEAR((pdp.values[k] - pdp.values[0]) / (g[k] - g[0]), model.coefficients()[j],
                    1e-9);
      }
    }
  }
}

TEST(Pdp, RuleTablePowerOnUniformCells) {
  const RuleTablePredictor model(InteractionRuleTable(), ClaimCostSchema());
  const auto pdp = Pdp(model, testing::ClaimCells(), "Power");
  ASSERT_TRUE(pdp.grid().categorical);
  EXPECT_EQ(pdp.grid().labels, (std::vector<std::string>{"High", "Low"}));
  EXPECT_EQ(pdp.values, (std::vector<double>{325, 175}));
}

TEST(Pdp, TwoWayAndErrors) {
  const RuleTablePredictor model(InteractionRuleTable(), ClaimCostSchema());
  const std::vector<std::string> both{"Age", "Power"};
  const auto pdp = Pdp(model, testing::ClaimCells(), both);
  EXPECT_EQ(pdp.values, (std::vector<double>{400, 200, 250, 150}));
  const std::vector<std::string> three{"Age", "Power", "Age"};
  EXPECT_EQ(CodeOf([&] { Pdp(model, testing::ClaimCells(), three); }),
            ErrorCode::kInvalidArgument);
  const Dataset empty = Dataset::FromColumns(ClaimCostSchema(), {{}, {}});
  EXPECT_EQ(CodeOf([&] { Pdp(model, empty, "Age"); }), ErrorCode::kDegenerate);
}

TEST(Pdp, SyntheticExampleIsFlatButGroupsAreNot) {
  const auto example = SyntheticPdpExample(1000, 0);
  const auto pdp = Pdp(*example.truth, example.data, "x2", 20);
  for (double v : pdp.values) EXPECT_LE(std::abs(v), 0.2);
  const Dataset grouped = AppendThresholdGroup(example.data, "x3", 0.0, "s", "neg", "pos");
  const auto curves = GroupedCurve(*example.truth, grouped, "x2", "s", CurveKind::kPdp, 20);
  ASSERT_EQ(curves.curves.size(), 2u);
  EXPECT_NEAR(CurveSlope(curves.curves[0].second), -5.0, 1e-9);
  EXPECT_NEAR(CurveSlope(curves.curves[1].second), 5.0, 1e-9);
}

TEST(Ice, MeanEqualsPdpAndCentering) {
  const auto example = SyntheticPdpExample(300, 1);
  IceOptions options;
  const auto ice = Ice(*example.truth, example.data, "x2", options);
  const auto pdp = Pdp(*example.truth, example.data, "x2", options.grid_size);
  ASSERT_EQ(ice.n_curves(), 300u);
  ASSERT_EQ(ice.grid.values, pdp.grid().values);
  for (std::size_t g = 0; g < pdp.values.size(); ++g) {
    double s = 0.0;
    for (std::size_t i = 0; i < ice.n_curves(); ++i) s += ice.curve(i)[g];
    EXPECT_NEAR(s / 300.0, pdp.values[g], 1e-12);
  }
  // Row i at grid g is the model at row i with the feature set to g.
  std::vector<double> row(3);
  example.data.CopyRow(ice.rows[7], row);
  row[1] = ice.grid.values[4];
  EXPECT_EQ(ice.curve(7)[4], PredictOne(*example.truth, row));

  options.center = true;
  const auto centered = Ice(*example.truth, example.data, "x2", options);
  EXPECT_TRUE(centered.centered);
  for (std::size_t i = 0; i < centered.n_curves(); ++i) EXPECT_EQ(centered.curve(i)[0], 0.0);
}

TEST(Ice, AdditiveModelCurvesAreTranslates) {
  const Dataset data = LinearData(200, {1.0, 2.0, -1.0, 0.5}, 0.0, 8);
  const auto model = LinearFunction({1.0, 2.0, -1.0, 0.5});
  const auto ice = Ice(*model, data, "x2", {});
  for (std::size_t i = 1; i < ice.n_curves(); ++i) {
    const auto a = ice.curve(0), b = ice.curve(i);
    for (std::size_t g = 1; g < a.size(); ++g) {
      EXPECT_NEAR(b[g] - a[g], b[0] - a[0], 1e-9);
    }
  }
}

TEST(Ice, SubsamplesAboveCap) {
  const Dataset data = LinearData(50, {0, 1}, 0.0, 9);
  IceOptions options;
  options.max_curves = 10;
  options.seed = 4;
  const auto ice = Ice(*LinearFunction({0, 1}), data, "x1", options);
  EXPECT_EQ(ice.n_curves(), 10u);
  EXPECT_TRUE(std::is_sorted(ice.rows.begin(), ice.rows.end()));
  EXPECT_EQ(ice.rows, Ice(*LinearFunction({0, 1}), data, "x1", options).rows);
}

TEST(Ale, LinearModelClosedForm) {
  const std::vector<double> beta{0.3, 2.5, -1.0};
  const Dataset data = LinearData(500, beta, 0.0, 10);
  const auto model = LinearFunction(beta);
  const auto ale = Ale(*model, data, "x1", 20);
  const auto& z = ale.edges;
  ASSERT_EQ(ale.values.size(), z.size());
  // Independent recount of bin membership.
  std::vector<double> counts(z.size() - 1, 0.0);
  for (double x : data.column(0)) {
    std::size_t b = 0;
    while (b + 2 < z.size() && x >= z[b + 1]) ++b;
    counts[b] += 1.0;
  }
  double weighted_edge = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) weighted_edge += counts[b] * z[b + 1];
  weighted_edge /= 500.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    EXPECT_NEAR(ale.values[k], beta[1] * (z[k] - weighted_edge), 1e-9);
  }
}

TEST(Ale, IgnoredFeatureIsZeroAndCenteringHolds) {
  const Dataset data = LinearData(300, {0, 1, 0}, 0.0, 11);
  const auto model = LinearFunction({0, 1, 0});
  const auto ale = Ale(*model, data, "x2", 10);
  for (double v : ale.values) EXPECT_EQ(v, 0.0);

  const auto example = SyntheticPdpExample(400, 2);
  const auto curve = Ale(*example.truth, example.data, "x1", 20);
  double weighted = 0.0, scale = 0.0;
  for (std::size_t b = 0; b < curve.bin_counts.size(); ++b) {
    weighted += static_cast<double>(curve.bin_counts[b]) * curve.values[b + 1];
    scale += std::abs(curve.values[b + 1]);
  }
  EXPECT_LE(std::abs(weighted), 1e-9 * (1.0 + scale));
  EXPECT_EQ(std::accumulate(curve.bin_counts.begin(), curve.bin_counts.end(), std::size_t{0}),
            400u);
}

TEST(Ale, EmptyInterpolatedBinsAreMerged) {
  const Dataset data = Dataset::FromColumns(FeatureSchema({Feature::Numeric("x")}),
                                            {{0, 1, 2, 3}});
  const auto model = LinearFunction({0, 2});
  const auto ale = Ale(*model, data, "x", 8);
  for (auto c : ale.bin_counts) EXPECT_GT(c, 0u);
  EXPECT_EQ(ale.edges.front(), 0.0);
  EXPECT_EQ(ale.edges.back(), 3.0);
  const auto mplot = MPlot(*model, data, "x", 8);
  for (auto c : mplot.bin_counts) EXPECT_GT(c, 0u);
}

TEST(Ale, CorrelatedPairAgainstMPlot) {
  const Dataset data = CorrelatedPair(2000, 0.05, 12);
  const FunctionPredictor model([](std::span<const double> r) { return r[1]; }, "x2 only");
  const auto ale = Ale(model, data, "x1", 20);
  for (double v : ale.values) EXPECT_LE(std::abs(v), 1e-12);
  const auto mplot = MPlot(model, data, "x1", 20);
  EXPECT_GT(CurveSlope(mplot), 0.8);
}

TEST(Ale, ErrorsOnCategoricalOrConstant) {
  const RuleTablePredictor model(InteractionRuleTable(), ClaimCostSchema());
  EXPECT_EQ(CodeOf([&] { Ale(model, testing::ClaimCells(), "Age"); }),
            ErrorCode::kInvalidArgument);
  const Dataset flat = Dataset::FromColumns(FeatureSchema({Feature::Numeric("x")}), {{2, 2, 2}});
  EXPECT_EQ(CodeOf([&] { Ale(*LinearFunction({0, 1}), flat, "x"); }), ErrorCode::kDegenerate);
}

TEST(Ale, AgreesWithCenteredPdpOnIndependentFeatures) {
  const Dataset data = LinearData(2000, {0.0, 1.0, 1.0}, 0.5, 13);
  const FittedLinear model = FitRidge(data, 0.0);
  const auto ale = Ale(model, data, "x1", 20);
  // PDP evaluated on the ALE edges, minus its count-weighted mean at the right edges.
  GridAxis axis;
  axis.feature = "x1";
  axis.values = ale.edges;
  const auto pdp = PdpOnGrid(model, data, {axis});
  double mean = 0.0;
  double max_bin = 0.0;
  for (std::size_t b = 0; b < ale.bin_counts.size(); ++b) {
    mean += static_cast<double>(ale.bin_counts[b]) * pdp.values[b + 1];
    max_bin = std::max(max_bin, ale.edges[b + 1] - ale.edges[b]);
  }
  mean /= 2000.0;
  const double slope = std::abs(model.coefficients()[0]);
  for (std::size_t k = 0; k < ale.values.size(); ++k) {
    EXPECT_NEAR(ale.values[k], pdp.values[k] - mean, 2.0 * slope * max_bin + 1e-9);
  }
}

TEST(MPlot, ConstantAndIndependentLinear) {
  const Dataset data = LinearData(3000, {0.0, 2.0, -1.0}, 0.0, 14);
  const FunctionPredictor constant([](std::span<const double>) { return 4.5; }, "constant");
  for (double v : MPlot(constant, data, "x1", 10).values) EXPECT_EQ(v, 4.5);
  const auto model = LinearFunction({0.0, 2.0, -1.0});
  const auto mplot = MPlot(*model, data, "x1", 10);
  EXPECT_NEAR(CurveSlope(mplot), 2.0, 0.15);
  EXPECT_EQ(mplot.grid().values.size(), mplot.values.size());
}

TEST(Grouped, TableOnePowerByAge) {
  const RuleTablePredictor model(InteractionRuleTable(), ClaimCostSchema());
  const auto grouped = GroupedCurve(model, testing::ClaimCells(), "Power", "Age",
                                    CurveKind::kPdp);
  ASSERT_EQ(grouped.curves.size(), 2u);
  EXPECT_EQ(grouped.curves[0].first, "Young");
  EXPECT_EQ(grouped.curves[0].second.values, (std::vector<double>{400, 200}));
  EXPECT_EQ(grouped.curves[1].second.values, (std::vector<double>{250, 150}));
  const double young_rise = grouped.curves[0].second.values[0] - grouped.curves[0].second.values[1];
  const double old_rise = grouped.curves[1].second.values[0] - grouped.curves[1].second.values[1];
  EXPECT_EQ(young_rise - old_rise, 100.0);
}

TEST(Grouped, AbsentLevelOmittedWithWarning) {
  const Dataset young_only = Dataset::FromColumns(ClaimCostSchema(), {{0, 0}, {0, 1}});
  const RuleTablePredictor model(InteractionRuleTable(), ClaimCostSchema());
  const auto grouped = GroupedCurve(model, young_only, "Power", "Age", CurveKind::kPdp);
  EXPECT_EQ(grouped.curves.size(), 1u);
  ASSERT_EQ(grouped.warnings.size(), 1u);
  EXPECT_NE(grouped.warnings[0].find("Old"), std::string::npos);
}

TEST(Grouped, AdditiveAleGroupsAreTranslatesAndNumericGroupRejected) {
  const auto example = SyntheticPdpExample(2000, 3);
  const Dataset grouped_data = AppendThresholdGroup(example.data, "x1", 0.0, "g");
  const auto model = LinearFunction({0.0, 1.0, 2.0, 3.0});
  const auto grouped = GroupedCurve(*model, grouped_data, "x2", "g", CurveKind::kAle, 10);
  ASSERT_EQ(grouped.curves.size(), 2u);
  EXPECT_NEAR(CurveSlope(grouped.curves[0].second), 2.0, 1e-9);
  EXPECT_NEAR(CurveSlope(grouped.curves[1].second), 2.0, 1e-9);
  EXPECT_EQ(CodeOf([&] { GroupedCurve(*model, grouped_data, "x2", "x1", CurveKind::kPdp); }),
            ErrorCode::kInvalidArgument);
}

TEST(Curves, NeverMutateData) {
  const auto example = SyntheticPdpExample(200, 4);
  const auto before = example.data.Checksum();
  Pdp(*example.truth, example.data, "x1");
  Ice(*example.truth, example.data, "x1", {});
  Ale(*example.truth, example.data, "x1");
  MPlot(*example.truth, example.data, "x1");
  ImportanceOptions options;
  PermutationImportance(*example.truth, example.data, options);
  EXPECT_EQ(example.data.Checksum(), before);
}

}  // namespace
}  // namespace posthoc
