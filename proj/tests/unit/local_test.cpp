// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "posthoc/error.hpp"
#include "posthoc/local.hpp"
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

// One numeric and one categorical feature.
Dataset MixedData(std::size_t n, std::uint64_t seed) {
  const FeatureSchema schema(
      {Feature::Numeric("x"), Feature::Categorical("c", {"a", "b", "c"})}, "y");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(2.0, 3.0);
  std::discrete_distribution<int> level({0.2, 0.5, 0.3});
  std::vector<double> x(n), c(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = normal(rng);
    c[i] = level(rng);
    y[i] = x[i] + c[i];
  }
  return Dataset::FromColumns(schema, {x, c}, y);
}

TEST(Neighborhood, LimeMomentsAndFrequencies) {
  const Dataset data = MixedData(2000, 1);
  const Instance x{{0.0, 1.0}};
  const auto hood = LimeSampleNeighborhood(data, x, 10000, 7);
  EXPECT_EQ(hood.provenance, NeighborhoodKind::kLimeGaussian);
  const Moments ref = EmpiricalMoments(data.column(0));
  std::vector<double> xs, counts(3, 0.0), ref_counts(3, 0.0);
  for (std::size_t i = 0; i < 10000; ++i) {
    xs.push_back(hood.rows.at(i, 0));
    counts[static_cast<std::size_t>(hood.rows.at(i, 1))] += 1.0 / 10000.0;
  }
  for (double v : data.column(1)) ref_counts[static_cast<std::size_t>(v)] += 1.0 / 2000.0;
  const Moments got = EmpiricalMoments(xs);
  EXPECT_NEAR(got.mean, ref.mean, 3.0 * ref.sd / 100.0);
  EXPECT_NEAR(got.sd, ref.sd, 3.0 * ref.sd / std::sqrt(2.0 * 9999.0));
  for (std::size_t l = 0; l < 3; ++l) EXPECT_NEAR(counts[l], ref_counts[l], 0.03);
  for (double w : hood.weights) EXPECT_EQ(w, 1.0);
}

TEST(Neighborhood, LimeConstantFeatureAndGuards) {
  const Dataset data = Dataset::FromColumns(
      FeatureSchema({Feature::Numeric("a"), Feature::Numeric("k")}), {{1, 2, 3, 4}, {5, 5, 5, 5}});
  const Instance x{{2.0, 5.0}};
  const auto hood = LimeSampleNeighborhood(data, x, 50, 1);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(hood.rows.at(i, 1), 5.0);
  EXPECT_EQ(CodeOf([&] { LimeSampleNeighborhood(data, x, 3, 1); }), ErrorCode::kInvalidArgument);
  const auto again = LimeSampleNeighborhood(data, x, 50, 1);
  EXPECT_TRUE(std::equal(hood.rows.values().begin(), hood.rows.values().end(),
                         again.rows.values().begin()));
}

TEST(Neighborhood, LiveProperties) {
  const Dataset data = LinearData(100, {0, 1, 1, 1, 1}, 0.0, 2);
  const Instance x{{0.5, 0.5, 0.5, 0.5}};
  const std::size_t n = 8000;
  const auto hood = LiveNeighborhood(data, x, n, 3);
  EXPECT_EQ(hood.provenance, NeighborhoodKind::kLive);
  std::vector<double> changed(4, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t diffs = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const double v = hood.rows.at(i, j);
      if (v != 0.5) {
        ++diffs;
        changed[j] += 1.0;
        const auto col = data.column(j);
        EXPECT_NE(std::find(col.begin(), col.end(), v), col.end());
      }
    }
    EXPECT_LE(diffs, 1u);
  }
  // Uniform feature choice: each count within 3 binomial sd of n/4.
  const double sd = std::sqrt(n * 0.25 * 0.75);
  for (double c : changed) EXPECT_NEAR(c, n / 4.0, 3.0 * sd);
  for (double w : hood.weights) EXPECT_EQ(w, hood.weights.front());
}

TEST(Neighborhood, GeneratorsNeverMutateData) {
  const Dataset data = MixedData(100, 4);
  const auto before = data.Checksum();
  LimeSampleNeighborhood(data, data.row(0), 100, 1);
  LiveNeighborhood(data, data.row(0), 100, 1);
  LimeExplain(*LinearFunction({0, 1, 1}), data, data.row(0), {});
  EXPECT_EQ(data.Checksum(), before);
}

TEST(Kernel, GowerHandExample) {
  // x spans [0, 2]; half range difference plus a categorical mismatch.
  const Dataset ref = Dataset::FromColumns(
      FeatureSchema({Feature::Numeric("x"), Feature::Categorical("c", {"a", "b"})}),
      {{0, 2}, {0, 1}});
  RowBatch rows(2, 2);
  rows.at(0, 0) = 1.0;
  rows.at(0, 1) = 1.0;
  rows.at(1, 0) = 0.0;
  rows.at(1, 1) = 0.0;
  const Instance x{{0.0, 0.0}};
  const auto gower = KernelWeights(ref, rows, x, KernelSpec::Parse("gower"));
  EXPECT_DOUBLE_EQ(gower[0], 0.25);
  EXPECT_EQ(gower[1], 1.0);
  const auto rbf = KernelWeights(ref, rows, x, KernelSpec::Parse("rbf:0.5"));
  EXPECT_EQ(rbf[1], 1.0);
  EXPECT_LT(rbf[0], 1.0);
}

TEST(Kernel, ParseRoundTripAndErrors) {
  EXPECT_EQ(KernelSpec::Parse("rbf:0.75").ToString(), "rbf:0.75");
  EXPECT_EQ(KernelSpec::Parse("rbf").ToString(), "rbf");
  EXPECT_EQ(KernelSpec::Parse("gower").ToString(), "gower");
  EXPECT_EQ(CodeOf([] { KernelSpec::Parse("rbf:0"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { KernelSpec::Parse("rbf:-1"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { KernelSpec::Parse("cosine"); }), ErrorCode::kInvalidArgument);
}

TEST(Kernel, RbfMonotoneInDistance) {
  const Dataset data = LinearData(200, {0, 1, 1}, 0.0, 5);
  const Instance x{{0.0, 0.0}};
  RowBatch rows(50, 2);
  for (std::size_t i = 0; i < 50; ++i) {
    rows.at(i, 0) = 0.04 * static_cast<double>(i);
    rows.at(i, 1) = -0.02 * static_cast<double>(i);
  }
  const auto w = KernelWeights(data, rows, x, KernelSpec::Parse("rbf"));
  for (std::size_t i = 1; i < w.size(); ++i) EXPECT_LT(w[i], w[i - 1]);
}

TEST(Kernel, EffectiveSampleSizeGrowsWithWidth) {
  const Dataset data = MixedData(300, 6);
  const Instance x = data.row(3);
  const auto hood = LimeSampleNeighborhood(data, x, 2000, 2);
  double last = 0.0;
  for (double width : {0.1, 0.3, 0.75, 1.5, 4.0, 20.0}) {
    KernelSpec spec;
    spec.kind = KernelSpec::Kind::kRbf;
    spec.width = width;
    const auto w = KernelWeights(data, hood.rows, x, spec);
    double sum = 0.0;
    for (double v : w) sum += v;
    const double ess = sum / *std::max_element(w.begin(), w.end());
    EXPECT_GE(ess, last);
    last = ess;
  }
}

TEST(Lime, RecoversLinearSlopesAtZeroLambda) {
  const std::vector<double> beta{1.0, 2.0, -3.0, 0.5};
  const Dataset data = LinearData(300, beta, 0.2, 7);
  const FittedLinear model = FitRidge(data, 0.0);
  for (const char* kernel : {"gower", "rbf:0.5", "rbf:1", "rbf:3"}) {
    LimeOptions options;
    options.lambda = 0.0;
    options.kernel = KernelSpec::Parse(kernel);
    options.n_sim = 1000;
    const Instance x = data.row(11);
    const auto att = LimeExplain(model, data, x, options);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(*att.Diagnostic("coefficient:x" + std::to_string(j + 1)),
                  model.coefficients()[j], 1e-6)
          << kernel;
      EXPECT_NEAR(att.contributions[j], model.coefficients()[j] * x.values[j], 1e-6);
    }
    EXPECT_NEAR(*att.Diagnostic("r2"), 1.0, 1e-9);
  }
}

TEST(Lime, ConstantModel) {
  const Dataset data = MixedData(100, 8);
  const FunctionPredictor constant([](std::span<const double>) { return 3.25; }, "constant");
  const auto att = LimeExplain(constant, data, data.row(0), {});
  for (double c : att.contributions) EXPECT_NEAR(c, 0.0, 1e-12);
  EXPECT_NEAR(*att.Diagnostic("intercept"), 3.25, 1e-12);
  EXPECT_EQ(att.prediction, 3.25);
  EXPECT_EQ(att.baseline, 3.25);
}

TEST(Lime, DeterministicSeedSensitiveAndStableTopFeature) {
  const Dataset data = LinearData(500, {0, 1, 1, 1}, 0.0, 9);
  const FunctionPredictor model(
      [](std::span<const double> r) { return 4.0 * r[0] + std::sin(2.0 * r[1]) + 0.3 * r[2] * r[2]; },
      "nonlinear");
  const Instance x = data.row(5);
  LimeOptions options;
  options.n_sim = 500;
  options.seed = 1;
  const auto a = LimeExplain(model, data, x, options);
  const auto b = LimeExplain(model, data, x, options);
  EXPECT_EQ(a.contributions, b.contributions);
  options.seed = 2;
  const auto c = LimeExplain(model, data, x, options);
  EXPECT_NE(a.contributions, c.contributions);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    options.seed = seed;
    const auto att = LimeExplain(model, data, x, options);
    const double top = *att.Diagnostic("coefficient:x1");
    EXPECT_GT(top, 0.0);
    for (std::size_t j = 1; j < 3; ++j) {
      EXPECT_GT(std::abs(top), std::abs(*att.Diagnostic("coefficient:x" + std::to_string(j + 1))));
    }
  }
}

TEST(Lime, CategoricalIndicatorAndSparsity) {
  const Dataset data = MixedData(400, 10);
  const FunctionPredictor model(
      [](std::span<const double> r) { return 2.0 * r[0] + (r[1] == 1 ? 5.0 : 0.0); }, "mixed");
  const Instance x{{1.0, 1.0}};
  LimeOptions options;
  options.lambda = 0.0;
  options.kernel = KernelSpec::Parse("rbf:2");
  const auto att = LimeExplain(model, data, x, options);
  EXPECT_NEAR(att.contributions[0], 2.0, 1e-6);
  EXPECT_NEAR(att.contributions[1], 5.0, 1e-6);
  EXPECT_TRUE(att.Diagnostic("kernel_width").has_value());

  options.k_features = 1;
  const auto sparse = LimeExplain(model, data, x, options);
  EXPECT_EQ(*sparse.Diagnostic("features_used"), 1.0);
  EXPECT_EQ(std::count(sparse.contributions.begin(), sparse.contributions.end(), 0.0), 1);
}

TEST(Lime, DegenerateWeights) {
  const Dataset data = LinearData(50, {0, 1}, 0.0, 11);
  Neighborhood hood = LimeSampleNeighborhood(data, data.row(0), 20, 1);
  std::fill(hood.weights.begin(), hood.weights.end(), 0.0);
  hood.weights[0] = 1.0;
  EXPECT_EQ(CodeOf([&] { FitLocalSurrogate(*LinearFunction({0, 1}), data, data.row(0), hood,
                                           0.0, {}); }),
            ErrorCode::kDegenerate);
}

TEST(Live, RecoversLinearSlopes) {
  const Dataset data = LinearData(200, {0.0, 1.5, -0.5}, 0.0, 12);
  const auto model = LinearFunction({0.0, 1.5, -0.5});
  LiveOptions options;
  options.lambda = 0.0;
  options.n_sim = 400;
  const auto att = LiveExplain(*model, data, data.row(2), options);
  EXPECT_EQ(att.method, AttributionMethod::kLive);
  EXPECT_NEAR(*att.Diagnostic("coefficient:x1"), 1.5, 1e-9);
  EXPECT_NEAR(*att.Diagnostic("coefficient:x2"), -0.5, 1e-9);
}

TEST(ShapMc, LinearIdentityAndIgnoredFeature) {
  const std::vector<double> beta{0.5, 2.0, 0.0, -1.0};
  const Dataset data = LinearData(300, beta, 0.0, 13);
  const auto model = LinearFunction(beta);
  const Instance x = data.row(17);
  ShapOptions options;
  options.iterations = 2000;
  options.seed = 5;
  const auto att = ShapMc(*model, data, x, options);
  for (std::size_t j = 0; j < 3; ++j) {
    const double expected = beta[j + 1] * (x.values[j] - testing::ColumnMean(data, j));
    EXPECT_LE(std::abs(att.contributions[j] - expected), 4.0 * att.standard_errors[j] + 1e-12);
  }
  EXPECT_EQ(att.contributions[1], 0.0);
  EXPECT_EQ(att.standard_errors[1], 0.0);
  double var = 0.0;
  for (double se : att.standard_errors) var += se * se;
  EXPECT_LE(std::abs(EfficiencyGap(att)), 4.0 * std::sqrt(var) + 1e-9);
  EXPECT_EQ(*att.Diagnostic("M"), 2000.0);
}

TEST(ShapMc, DeterministicAndBackgroundSubsample) {
  const Dataset data = LinearData(200, {0, 1, 1, 1}, 0.0, 14);
  const FunctionPredictor model([](std::span<const double> r) { return r[0] * r[1] + r[2]; }, "f");
  ShapOptions options;
  options.iterations = 300;
  options.seed = 7;
  const auto a = ShapMc(model, data, data.row(1), options);
  const auto b = ShapMc(model, data, data.row(1), options);
  EXPECT_EQ(a.contributions, b.contributions);
  options.background_rows = 4;
  const auto small = ShapMc(model, data, data.row(1), options);
  EXPECT_EQ(*small.Diagnostic("background_rows"), 4.0);
  options.iterations = 0;
  EXPECT_EQ(CodeOf([&] { ShapMc(model, data, data.row(1), options); }),
            ErrorCode::kInvalidArgument);
}

TEST(ShapMc, CarPriceDifferenceIsExplained) {
  // Prices around 170000 on average; the explained car is worth 150000.
  const FeatureSchema schema({Feature::Numeric("power"), Feature::Numeric("doors")});
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> power(100, 200);
  std::uniform_int_distribution<int> doors(2, 5);
  std::vector<double> pw(500), dr(500);
  for (std::size_t i = 0; i < 500; ++i) {
    pw[i] = power(rng);
    dr[i] = doors(rng);
  }
  const Dataset data = Dataset::FromColumns(schema, {pw, dr});
  const double mean_power = testing::ColumnMean(data, 0);
  const double mean_doors = testing::ColumnMean(data, 1);
  // Affine model calibrated so that the mean prediction is 170000 and the
  // car (150 hp, 4 doors) is priced at 150000.
  const double a = 1000.0;
  const double b = (-20000.0 - a * (150.0 - mean_power)) / (4.0 - mean_doors);
  const FunctionPredictor price(
      [=](std::span<const double> r) {
        return 170000.0 + a * (r[0] - mean_power) + b * (r[1] - mean_doors);
      },
      "price");
  const Instance car{{150.0, 4.0}};
  ShapOptions options;
  options.iterations = 2000;
  const auto att = ShapMc(price, data, car, options);
  EXPECT_NEAR(att.baseline, 170000.0, 1e-6);
  EXPECT_NEAR(att.prediction, 150000.0, 1e-6);
  double var = 0.0;
  for (double se : att.standard_errors) var += se * se;
  EXPECT_NEAR(att.contributions[0] + att.contributions[1], -20000.0, 4.0 * std::sqrt(var) + 1e-6);
}

TEST(ShapleyExact, AxiomsOnRandomModels) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> coef(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = LinearData(30, {0, 1, 1, 1}, 0.0, 100 + trial);
    const double a = coef(rng), b = coef(rng), c = coef(rng);
    // x3 is inert.
    const FunctionPredictor f(
        [=](std::span<const double> r) { return a * r[0] + b * std::sin(r[1]) + c * r[0] * r[1]; },
        "f");
    const FunctionPredictor g(
        [=](std::span<const double> r) { return std::exp(0.3 * r[2]) * b + a * r[1]; }, "g");
    const SumPredictor sum(std::make_shared<FunctionPredictor>(f), std::make_shared<FunctionPredictor>(g));
    const Instance x = data.row(static_cast<std::size_t>(trial));
    const auto pf = ShapleyExact(f, data, x);
    const auto pg = ShapleyExact(g, data, x);
    const auto ps = ShapleyExact(sum, data, x);
    EXPECT_LE(std::abs(EfficiencyGap(pf)), 1e-9);
    EXPECT_EQ(pf.contributions[2], 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(ps.contributions[j], pf.contributions[j] + pg.contributions[j], 1e-9);
    }
  }
}

TEST(ShapleyExact, SymmetryAndGuard) {
  // Exchangeable columns: the background holds both orders of each pair.
  std::vector<double> c1, c2;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) {
    const double s = u(rng), t = u(rng);
    c1.insert(c1.end(), {s, t});
    c2.insert(c2.end(), {t, s});
  }
  const Dataset data = Dataset::FromColumns(
      FeatureSchema({Feature::Numeric("x1"), Feature::Numeric("x2")}), {c1, c2});
  const auto model = LinearFunction({0, 1, 1});
  const auto att = ShapleyExact(*model, data, Instance{{0.4, 0.4}});
  EXPECT_NEAR(att.contributions[0], att.contributions[1], 1e-9);

  const Dataset wide = LinearData(5, std::vector<double>(14, 1.0), 0.0, 18);
  EXPECT_EQ(CodeOf([&] { ShapleyExact(*LinearFunction(std::vector<double>(14, 1.0)), wide,
                                      wide.row(0)); }),
            ErrorCode::kInvalidArgument);
}

TEST(ShapleyExact, LinearClosedFormAndMcAgreement) {
  const std::vector<double> beta{0.0, 1.0, -2.0, 0.5};
  const Dataset data = LinearData(100, beta, 0.0, 19);
  const auto model = LinearFunction(beta);
  const Instance x = data.row(3);
  const auto exact = ShapleyExact(*model, data, x);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(exact.contributions[j], beta[j + 1] * (x.values[j] - testing::ColumnMean(data, j)),
                1e-9);
  }
  const FunctionPredictor nonlinear(
      [](std::span<const double> r) { return r[0] * r[1] + std::cos(r[2]) * r[0]; }, "nl");
  const auto truth = ShapleyExact(nonlinear, data, x);
  ShapOptions options;
  options.iterations = 4000;
  const auto mc = ShapMc(nonlinear, data, x, options);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_LE(std::abs(mc.contributions[j] - truth.contributions[j]),
              4.0 * mc.standard_errors[j] + 1e-12);
  }
}

}  // namespace
}  // namespace posthoc
