// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "posthoc/detail/parallel.hpp"
#include "posthoc/error.hpp"
#include "posthoc/interactions.hpp"

namespace posthoc {
namespace {

constexpr double kRangeTolerance = 1e-9;
constexpr double kFlatTolerance = 1e-12;
constexpr std::size_t kBootstrapResamples = 3;
constexpr std::size_t kSlowSubsample = 1000;

// Subtracts the mean. A function that is constant up to rounding of the
// averages becomes exactly zero, so its variance is recognised as absent.
std::vector<double> Centered(std::vector<double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double scale = std::max({1.0, std::abs(*lo), std::abs(*hi)});
  if (*hi - *lo <= kFlatTolerance * scale) {
    std::fill(values.begin(), values.end(), 0.0);
    return values;
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  for (double& v : values) v -= mean;
  return values;
}

// Partial dependence on the columns `cols`, evaluated at every row's own
// values and centred to mean zero over the rows.
std::vector<double> CenteredPartial(const Predictor& model, const RowBatch& rows,
                                    const std::vector<std::size_t>& cols) {
  const std::size_t m = rows.n_rows();
  std::map<std::vector<double>, std::size_t> key_index;
  std::vector<std::vector<double>> keys;
  std::vector<std::size_t> key_of_row(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> key;
    key.reserve(cols.size());
    for (std::size_t c : cols) key.push_back(rows.at(i, c));
    auto [it, inserted] = key_index.emplace(key, keys.size());
    if (inserted) keys.push_back(std::move(key));
    key_of_row[i] = it->second;
  }
  std::vector<double> pd_of_key(keys.size());
  detail::ParallelFor(keys.size(), detail::CanParallelize(model), [&](std::size_t u) {
    RowBatch batch = rows;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < cols.size(); ++c) batch.at(i, cols[c]) = keys[u][c];
    }
    const auto predictions = model.Predict(batch);
    double total = 0.0;
    for (double p : predictions) total += p;
    pd_of_key[u] = total / static_cast<double>(m);
  });
  std::vector<double> pd(m);
  for (std::size_t i = 0; i < m; ++i) pd[i] = pd_of_key[key_of_row[i]];
  return Centered(std::move(pd));
}

std::vector<double> CenteredPredictions(const Predictor& model, const RowBatch& rows) {
  return Centered(model.Predict(rows));
}

HValue Ratio(std::span<const double> whole, std::span<const double> a,
             std::span<const double> b, const char* undefined) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    const double r = whole[i] - a[i] - b[i];
    num += r * r;
    den += whole[i] * whole[i];
  }
  Require(den > 0.0, ErrorCode::kDegenerate, undefined);
  HValue value;
  value.h2 = num / den;
  if (value.h2 > 1.0 + kRangeTolerance) {
    value.h2 = 1.0;
    value.clipped = true;
  }
  return value;
}

HValue PairOnRows(const Predictor& model, const RowBatch& rows, std::size_t j, std::size_t k) {
  if (j > k) std::swap(j, k);
  const auto pd_j = CenteredPartial(model, rows, {j});
  const auto pd_k = CenteredPartial(model, rows, {k});
  const auto pd_jk = CenteredPartial(model, rows, {j, k});
  return Ratio(pd_jk, pd_j, pd_k, "undefined: no joint variance");
}

HValue TotalOnRows(const Predictor& model, const RowBatch& rows, std::size_t j) {
  std::vector<std::size_t> rest;
  for (std::size_t c = 0; c < rows.n_cols(); ++c) {
    if (c != j) rest.push_back(c);
  }
  const auto f = CenteredPredictions(model, rows);
  const auto pd_j = CenteredPartial(model, rows, {j});
  const auto pd_rest = rest.empty() ? std::vector<double>(rows.n_rows(), 0.0)
                                    : CenteredPartial(model, rows, rest);
  return Ratio(f, pd_j, pd_rest, "undefined: predictor is constant on the sampled rows");
}

RowBatch Gather(const Dataset& data, std::span<const std::size_t> indices) {
  RowBatch rows(indices.size(), data.n_features());
  for (std::size_t i = 0; i < indices.size(); ++i) data.CopyRow(indices[i], rows.row(i));
  return rows;
}

std::vector<std::size_t> SampledIndices(const Dataset& data, const HOptions& options) {
  Require(options.subsample >= 2, ErrorCode::kInvalidArgument, "subsample must be >= 2");
  Require(data.n_rows() >= 2, ErrorCode::kDegenerate, "H-statistics need at least 2 rows");
  if (options.subsample >= data.n_rows()) {
    std::vector<std::size_t> all(data.n_rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  return SampleRowIndices(data.n_rows(), options.subsample, options.seed);
}

template <typename Compute>
HValue WithBootstrap(const Dataset& data, const HOptions& options, Compute compute) {
  const auto indices = SampledIndices(data, options);
  HValue value = compute(Gather(data, indices));
  if (!options.bootstrap) return value;
  std::vector<double> draws;
  for (std::size_t r = 0; r < kBootstrapResamples; ++r) {
    RandomEngine rng(detail::MixSeed(options.seed, 0xb007, r));
    std::uniform_int_distribution<std::size_t> pick(0, indices.size() - 1);
    std::vector<std::size_t> resample(indices.size());
    for (auto& i : resample) i = indices[pick(rng)];
    try {
      draws.push_back(compute(Gather(data, resample)).h2);
    } catch (const Error&) {
      // A resample without joint variance contributes no draw.
    }
  }
  if (draws.size() >= 2) {
    const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) /
                        static_cast<double>(draws.size());
    double ss = 0.0;
    for (double d : draws) ss += (d - mean) * (d - mean);
    value.bootstrap_sd = std::sqrt(ss / static_cast<double>(draws.size() - 1));
  }
  return value;
}

std::size_t LevelCount(const FeatureSchema& schema, std::size_t j) {
  return schema.feature(j).is_categorical() ? schema.feature(j).levels.size() : 0;
}

}  // namespace

HValue HPairwise(const Predictor& model, const Dataset& data, const std::string& j,
                 const std::string& k, const HOptions& options) {
  const std::size_t a = data.schema().IndexOf(j);
  const std::size_t b = data.schema().IndexOf(k);
  Require(a != b, ErrorCode::kInvalidArgument, "pairwise H needs two distinct features");
  return WithBootstrap(data, options,
                       [&](const RowBatch& rows) { return PairOnRows(model, rows, a, b); });
}

HValue HTotal(const Predictor& model, const Dataset& data, const std::string& j,
              const HOptions& options) {
  const std::size_t a = data.schema().IndexOf(j);
  return WithBootstrap(data, options,
                       [&](const RowBatch& rows) { return TotalOnRows(model, rows, a); });
}

InteractionMatrix HMatrix(const Predictor& model, const Dataset& data, const HOptions& options) {
  const FeatureSchema& schema = data.schema();
  const std::size_t p = schema.size();
  InteractionMatrix matrix;
  matrix.options = options;
  for (const auto& f : schema.features()) matrix.features.push_back(f.name);
  matrix.n_used = std::min(options.subsample, data.n_rows());
  matrix.subsampled = options.subsample < data.n_rows();
  if (matrix.subsampled && options.subsample > kSlowSubsample) {
    matrix.warnings.push_back("subsample of " + std::to_string(options.subsample) +
                              " rows: cost grows quadratically with the subsample");
  }
  if (!matrix.subsampled && data.n_rows() > kSlowSubsample) {
    matrix.warnings.push_back("using all " + std::to_string(data.n_rows()) +
                              " rows: cost grows quadratically with the row count");
  }

  const auto evaluate = [](auto compute, InteractionEntry& entry) {
    try {
      entry.value = compute();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerate) throw;
      entry.undefined_reason = e.what();
    }
  };

  matrix.pairwise.resize(p * p);
  for (std::size_t a = 0; a < p; ++a) {
    InteractionEntry& diagonal = matrix.pairwise[a * p + a];
    diagonal.undefined_reason = "diagonal";
    diagonal.level_counts = {LevelCount(schema, a)};
    for (std::size_t b = a + 1; b < p; ++b) {
      InteractionEntry entry;
      entry.level_counts = {LevelCount(schema, a), LevelCount(schema, b)};
      evaluate([&] { return HPairwise(model, data, matrix.features[a], matrix.features[b],
                                      options); },
               entry);
      matrix.pairwise[b * p + a] = entry;
      matrix.pairwise[a * p + b] = std::move(entry);
    }
  }
  matrix.total.resize(p);
  for (std::size_t a = 0; a < p; ++a) {
    InteractionEntry& entry = matrix.total[a];
    entry.level_counts = {LevelCount(schema, a)};
    evaluate([&] { return HTotal(model, data, matrix.features[a], options); }, entry);
  }
  return matrix;
}

}  // namespace posthoc
