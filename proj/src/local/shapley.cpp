// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "posthoc/detail/parallel.hpp"
#include "posthoc/error.hpp"
#include "posthoc/local.hpp"

namespace posthoc {
namespace {

constexpr std::size_t kIterationsPerBatch = 256;

double MeanOf(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

std::vector<std::string> FeatureNames(const FeatureSchema& schema) {
  std::vector<std::string> names;
  for (const auto& f : schema.features()) names.push_back(f.name);
  return names;
}

}  // namespace

std::string_view AttributionMethodName(AttributionMethod method) {
  switch (method) {
    case AttributionMethod::kLime: return "lime";
    case AttributionMethod::kLive: return "live";
    case AttributionMethod::kShapMc: return "shap-mc";
    case AttributionMethod::kShapleyExact: return "shapley-exact";
  }
  return "unknown";
}

std::optional<double> Attribution::Diagnostic(std::string_view key) const {
  for (const auto& [name, value] : diagnostics) {
    if (name == key) return value;
  }
  return std::nullopt;
}

double EfficiencyGap(const Attribution& attribution) {
  double total = 0.0;
  for (double phi : attribution.contributions) total += phi;
  return total - (attribution.prediction - attribution.baseline);
}

Attribution ShapMc(const Predictor& model, const Dataset& data, const Instance& x,
                   const ShapOptions& options) {
  ValidateInstance(data.schema(), x);
  Require(options.iterations >= 1, ErrorCode::kInvalidArgument, "M must be >= 1");
  Require(data.n_rows() > 0, ErrorCode::kDegenerate, "background data is empty");
  const Dataset background = options.background_rows == 0
                                 ? data
                                 : SampleRows(data, options.background_rows,
                                              detail::MixSeed(options.seed, 0xbac6));
  const std::size_t p = data.n_features();
  const std::size_t m_total = options.iterations;
  const std::size_t n_batches = (m_total + kIterationsPerBatch - 1) / kIterationsPerBatch;

  // draws[m * p + j]: feature j's marginal contribution in iteration m.
  std::vector<double> draws(m_total * p, 0.0);
  detail::ParallelFor(n_batches, detail::CanParallelize(model), [&](std::size_t batch) {
    const std::size_t first = batch * kIterationsPerBatch;
    const std::size_t last = std::min(m_total, first + kIterationsPerBatch);
    RowBatch rows((last - first) * (p + 1), p);
    std::vector<std::vector<std::size_t>> orders(last - first);
    for (std::size_t m = first; m < last; ++m) {
      RandomEngine rng(detail::MixSeed(options.seed, m));
      std::uniform_int_distribution<std::size_t> pick(0, background.n_rows() - 1);
      const std::size_t z = pick(rng);
      auto& order = orders[m - first];
      order.resize(p);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      const std::size_t base = (m - first) * (p + 1);
      background.CopyRow(z, rows.row(base));
      for (std::size_t t = 0; t < p; ++t) {
        auto next = rows.row(base + t + 1);
        const auto prev = rows.row(base + t);
        std::copy(prev.begin(), prev.end(), next.begin());
        next[order[t]] = x.values[order[t]];
      }
    }
    const auto predictions = model.Predict(rows);
    for (std::size_t m = first; m < last; ++m) {
      const std::size_t base = (m - first) * (p + 1);
      for (std::size_t t = 0; t < p; ++t) {
        draws[m * p + orders[m - first][t]] = predictions[base + t + 1] - predictions[base + t];
      }
    }
  });

  Attribution att;
  att.method = AttributionMethod::kShapMc;
  att.features = FeatureNames(data.schema());
  att.contributions.assign(p, 0.0);
  att.standard_errors.assign(p, 0.0);
  const auto m_count = static_cast<double>(m_total);
  for (std::size_t j = 0; j < p; ++j) {
    double total = 0.0;
    for (std::size_t m = 0; m < m_total; ++m) total += draws[m * p + j];
    const double mean = total / m_count;
    att.contributions[j] = mean;
    if (m_total > 1) {
      double ss = 0.0;
      for (std::size_t m = 0; m < m_total; ++m) {
        const double d = draws[m * p + j] - mean;
        ss += d * d;
      }
      att.standard_errors[j] = std::sqrt(ss / (m_count - 1.0) / m_count);
    }
  }
  att.prediction = PredictOne(model, x.values);
  att.baseline = MeanOf(PredictDataset(model, background));
  att.diagnostics.emplace_back("M", m_count);
  att.diagnostics.emplace_back("background_rows", static_cast<double>(background.n_rows()));
  att.notes.emplace_back("coalition_value", "interventional (features assumed independent)");
  return att;
}

Attribution ShapleyExact(const Predictor& model, const Dataset& background, const Instance& x) {
  ValidateInstance(background.schema(), x);
  const std::size_t p = background.n_features();
  Require(p <= kMaxExactShapleyFeatures, ErrorCode::kInvalidArgument,
          "exact Shapley enumerates 2^p coalitions; p = " + std::to_string(p) +
              " exceeds the limit of " + std::to_string(kMaxExactShapleyFeatures));
  Require(background.n_rows() > 0, ErrorCode::kDegenerate, "background data is empty");

  const std::size_t n_masks = std::size_t{1} << p;
  const RowBatch base = background.ToRows();
  std::vector<double> mean_at(n_masks);
  detail::ParallelFor(n_masks, detail::CanParallelize(model), [&](std::size_t mask) {
    RowBatch rows = base;
    for (std::size_t i = 0; i < rows.n_rows(); ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        if (mask & (std::size_t{1} << j)) rows.at(i, j) = x.values[j];
      }
    }
    mean_at[mask] = MeanOf(model.Predict(rows));
  });
  const double baseline = mean_at[0];

  // weight[s] = s! (p - s - 1)! / p!
  std::vector<double> factorial(p + 1, 1.0);
  for (std::size_t i = 1; i <= p; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);
  std::vector<double> weight(p, 0.0);
  for (std::size_t s = 0; s < p; ++s) {
    weight[s] = factorial[s] * factorial[p - s - 1] / factorial[p];
  }

  Attribution att;
  att.method = AttributionMethod::kShapleyExact;
  att.features = FeatureNames(background.schema());
  att.contributions.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    double phi = 0.0;
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      phi += weight[size] * ((mean_at[mask | bit] - baseline) - (mean_at[mask] - baseline));
    }
    att.contributions[j] = phi;
  }
  att.baseline = baseline;
  att.prediction = PredictOne(model, x.values);
  att.diagnostics.emplace_back("background_rows", static_cast<double>(background.n_rows()));
  att.diagnostics.emplace_back("coalitions", static_cast<double>(n_masks));
  att.notes.emplace_back("coalition_value", "interventional (features assumed independent)");
  return att;
}

}  // namespace posthoc
