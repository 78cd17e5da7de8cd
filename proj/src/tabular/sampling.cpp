// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "posthoc/error.hpp"
#include "posthoc/tabular.hpp"

namespace posthoc {
namespace {

std::span<const double> NumericColumn(const Dataset& data, std::string_view feature) {
  const std::size_t j = data.schema().IndexOf(feature);
  Require(!data.schema().feature(j).is_categorical(), ErrorCode::kInvalidArgument,
          "feature '" + std::string(feature) + "' is categorical, numeric required");
  return data.column(j);
}

}  // namespace

Moments EmpiricalMoments(std::span<const double> values) {
  Require(values.size() >= 2, ErrorCode::kDegenerate,
          "moments need at least 2 rows");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

Moments EmpiricalMoments(const Dataset& data, std::string_view feature) {
  return EmpiricalMoments(NumericColumn(data, feature));
}

double SortedQuantile(std::span<const double> sorted, double p) {
  Require(!sorted.empty(), ErrorCode::kDegenerate, "quantile of empty sequence");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double position = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(position));
  const double frac = position - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> QuantileBins(std::span<const double> values, std::size_t k) {
  Require(k >= 1, ErrorCode::kInvalidArgument, "bin count must be at least 1");
  Require(!values.empty(), ErrorCode::kDegenerate, "cannot bin an empty column");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Require(sorted.front() < sorted.back(), ErrorCode::kDegenerate,
          "feature has zero range");
  std::vector<double> edges;
  edges.reserve(k + 1);
  edges.push_back(sorted.front());
  for (std::size_t i = 1; i < k; ++i) {
    const double q = SortedQuantile(sorted, static_cast<double>(i) / static_cast<double>(k));
    if (q > edges.back() && q < sorted.back()) edges.push_back(q);
  }
  edges.push_back(sorted.back());
  return edges;
}

std::vector<double> QuantileBins(const Dataset& data, std::string_view feature,
                                 std::size_t k) {
  Require(k >= 1, ErrorCode::kInvalidArgument, "bin count must be at least 1");
  return QuantileBins(NumericColumn(data, feature), k);
}

std::size_t BinIndex(std::span<const double> edges, double value) {
  const std::size_t bins = edges.size() - 1;
  // First edge strictly greater than value; bin is the one to its left.
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  const auto pos = static_cast<std::size_t>(it - edges.begin());
  if (pos == 0) return 0;
  return std::min(pos - 1, bins - 1);
}

std::vector<std::size_t> SampleRowIndices(std::size_t n_rows, std::size_t n,
                                          std::uint64_t seed) {
  Require(n >= 1, ErrorCode::kInvalidArgument, "sample size must be at least 1");
  Require(n_rows >= 1, ErrorCode::kDegenerate, "cannot sample from an empty dataset");
  RandomEngine rng(seed);
  std::vector<std::size_t> indices;
  if (n > n_rows) {
    std::uniform_int_distribution<std::size_t> pick(0, n_rows - 1);
    indices.resize(n);
    for (auto& i : indices) i = pick(rng);
    return indices;
  }
  indices.resize(n_rows);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  // Partial Fisher-Yates: the first n slots become a uniform sample.
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n_rows - 1);
    std::swap(indices[i], indices[pick(rng)]);
  }
  indices.resize(n);
  return indices;
}

Dataset SampleRows(const Dataset& data, std::size_t n, std::uint64_t seed) {
  const auto indices = SampleRowIndices(data.n_rows(), n, seed);
  return data.SelectRows(indices);
}

Split TrainTestSplit(const Dataset& data, double train_fraction, std::uint64_t seed) {
  Require(train_fraction > 0.0 && train_fraction < 1.0, ErrorCode::kInvalidArgument,
          "train fraction must lie in (0, 1)");
  const std::size_t n = data.n_rows();
  const auto n_train =
      static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  Require(n_train >= 1 && n_train < n, ErrorCode::kDegenerate,
          "empty split: " + std::to_string(n) + " rows cannot be split at fraction " +
              std::to_string(train_fraction));
  auto order = SampleRowIndices(n, n, seed);
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<long>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<long>(n_train), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {data.SelectRows(train), data.SelectRows(test)};
}

Dataset AppendThresholdGroup(const Dataset& data, std::string_view feature,
                             double threshold, std::string name,
                             std::string below_label, std::string above_label) {
  const auto column = NumericColumn(data, feature);
  std::vector<double> ids(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) ids[i] = column[i] >= threshold ? 1.0 : 0.0;
  return data.WithAppendedFeature(
      Feature::Categorical(std::move(name), {std::move(below_label), std::move(above_label)}),
      std::move(ids));
}

}  // namespace posthoc
