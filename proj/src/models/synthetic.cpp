// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "posthoc/error.hpp"
#include "posthoc/models.hpp"

namespace posthoc {

double SyntheticTruth(double x1, double x2, double x3) {
  return 0.2 * x1 - 5.0 * x2 + (x3 >= 0.0 ? 10.0 * x2 : 0.0);
}

SyntheticExample SyntheticPdpExample(std::size_t n, std::uint64_t seed) {
  Require(n >= 1, ErrorCode::kInvalidArgument, "synthetic sample size must be >= 1");
  RandomEngine rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> columns(3, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& col : columns) col[i] = uniform(rng);
    y[i] = SyntheticTruth(columns[0][i], columns[1][i], columns[2][i]) + noise(rng);
  }
  FeatureSchema schema({Feature::Numeric("x1"), Feature::Numeric("x2"), Feature::Numeric("x3")},
                       "y");
  SyntheticExample example;
  example.data = Dataset::FromColumns(std::move(schema), std::move(columns), std::move(y));
  example.truth = std::make_shared<FunctionPredictor>(
      [](std::span<const double> row) { return SyntheticTruth(row[0], row[1], row[2]); },
      "synthetic truth 0.2*x1 - 5*x2 + 10*x2*1{x3>=0}");
  return example;
}

}  // namespace posthoc
