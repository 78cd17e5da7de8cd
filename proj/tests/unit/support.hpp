// SPDX-License-Identifier: Apache-2.0
//
// Fixtures and independent reference computations shared by the unit tests.
#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "posthoc/models.hpp"
#include "posthoc/tabular.hpp"

namespace posthoc::testing {

// n rows of p independent numeric features x1..xp ~ U(lo, hi) with target
// y = b0 + sum bj xj + noise_sd * N(0, 1).
inline Dataset LinearData(std::size_t n, const std::vector<double>& beta, double noise_sd,
                          std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  const std::size_t p = beta.size() - 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Feature> features;
  for (std::size_t j = 0; j < p; ++j) features.push_back(Feature::Numeric("x" + std::to_string(j + 1)));
  std::vector<std::vector<double>> cols(p, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = beta[0];
    for (std::size_t j = 0; j < p; ++j) {
      cols[j][i] = u(rng);
      v += beta[j + 1] * cols[j][i];
    }
    y[i] = v + noise_sd * noise(rng);
  }
  return Dataset::FromColumns(FeatureSchema(std::move(features), "y"), std::move(cols),
                              std::move(y));
}

// Reference linear model evaluated with a plain loop.
inline PredictorPtr LinearFunction(std::vector<double> beta) {
  return std::make_shared<FunctionPredictor>(
      [beta](std::span<const double> row) {
        double v = beta[0];
        for (std::size_t j = 0; j + 1 < beta.size(); ++j) v += beta[j + 1] * row[j];
        return v;
      },
      "reference linear");
}

inline double ColumnMean(const Dataset& data, std::size_t j) {
  double s = 0.0;
  for (double v : data.column(j)) s += v;
  return s / static_cast<double>(data.n_rows());
}

// Balanced 4-row cross of the claim-cost example.
inline Dataset ClaimCells() {
  return Dataset::FromColumns(ClaimCostSchema(), {{0, 0, 1, 1}, {0, 1, 0, 1}});
}

}  // namespace posthoc::testing
