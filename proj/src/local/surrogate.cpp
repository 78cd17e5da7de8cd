// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "posthoc/error.hpp"
#include "posthoc/local.hpp"

namespace posthoc {
namespace {

double MeanPrediction(const Predictor& model, const Dataset& data) {
  const auto predictions = PredictDataset(model, data);
  return std::accumulate(predictions.begin(), predictions.end(), 0.0) /
         static_cast<double>(predictions.size());
}

// Surrogate regressors: numeric values as is, categorical values as the
// indicator of x's level.
RowBatch EncodeRelativeTo(const FeatureSchema& schema, const RowBatch& rows, const Instance& x) {
  RowBatch design(rows.n_rows(), rows.n_cols());
  for (std::size_t i = 0; i < rows.n_rows(); ++i) {
    for (std::size_t j = 0; j < rows.n_cols(); ++j) {
      const double v = rows.at(i, j);
      design.at(i, j) = schema.feature(j).is_categorical() ? (v == x.values[j] ? 1.0 : 0.0) : v;
    }
  }
  return design;
}

RowBatch SelectColumns(const RowBatch& design, const std::vector<std::size_t>& cols) {
  RowBatch out(design.n_rows(), cols.size());
  for (std::size_t i = 0; i < design.n_rows(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) out.at(i, c) = design.at(i, cols[c]);
  }
  return out;
}

double WeightedSd(const RowBatch& design, std::size_t col, std::span<const double> w) {
  double sw = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < design.n_rows(); ++i) {
    sw += w[i];
    mean += w[i] * design.at(i, col);
  }
  mean /= sw;
  double ss = 0.0;
  for (std::size_t i = 0; i < design.n_rows(); ++i) {
    const double d = design.at(i, col) - mean;
    ss += w[i] * d * d;
  }
  return std::sqrt(ss / sw);
}

// Columns that vary among the rows carrying weight; a constant column has no
// identifiable slope and keeps coefficient 0.
std::vector<std::size_t> VaryingColumns(const RowBatch& design, std::span<const double> w) {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < design.n_cols(); ++j) {
    std::optional<double> first;
    bool varies = false;
    for (std::size_t i = 0; i < design.n_rows() && !varies; ++i) {
      if (w[i] <= 0.0) continue;
      if (!first) {
        first = design.at(i, j);
      } else if (design.at(i, j) != *first) {
        varies = true;
      }
    }
    if (varies) cols.push_back(j);
  }
  return cols;
}

struct SurrogateFit {
  double intercept = 0.0;
  std::vector<double> beta;  // full width, zeros for unused columns
};

SurrogateFit FitOn(const RowBatch& design, const std::vector<std::size_t>& cols,
                   std::span<const double> y, std::span<const double> w, double lambda) {
  SurrogateFit fit;
  fit.beta.assign(design.n_cols(), 0.0);
  if (cols.empty()) {
    double sw = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      sw += w[i];
      fit.intercept += w[i] * y[i];
    }
    fit.intercept /= sw;
    return fit;
  }
  const LinearSolution solution =
      SolveWeightedRidge(SelectColumns(design, cols), y, w, lambda);
  fit.intercept = solution.intercept;
  for (std::size_t c = 0; c < cols.size(); ++c) fit.beta[cols[c]] = solution.coefficients[c];
  return fit;
}

double WeightedR2(const RowBatch& design, const SurrogateFit& fit, std::span<const double> y,
                  std::span<const double> w) {
  double sw = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sw += w[i];
    mean += w[i] * y[i];
  }
  mean /= sw;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double yhat = fit.intercept;
    for (std::size_t j = 0; j < design.n_cols(); ++j) yhat += fit.beta[j] * design.at(i, j);
    ss_res += w[i] * (y[i] - yhat) * (y[i] - yhat);
    ss_tot += w[i] * (y[i] - mean) * (y[i] - mean);
  }
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
}

}  // namespace

Attribution FitLocalSurrogate(const Predictor& model, const Dataset& data, const Instance& x,
                              const Neighborhood& neighborhood, double lambda,
                              std::optional<std::size_t> k_features) {
  const FeatureSchema& schema = data.schema();
  ValidateInstance(schema, x);
  Require(lambda >= 0.0 && std::isfinite(lambda), ErrorCode::kInvalidArgument,
          "lambda must be a nonnegative number");
  const std::size_t n = neighborhood.rows.n_rows();
  Require(neighborhood.weights.size() == n, ErrorCode::kInvalidArgument,
          "neighbourhood weights do not match its rows");
  std::size_t positive = 0;
  for (double w : neighborhood.weights) {
    Require(std::isfinite(w) && w >= 0.0, ErrorCode::kNumerical,
            "kernel weights must be finite and nonnegative");
    if (w > 0.0) ++positive;
  }
  Require(positive >= 2, ErrorCode::kDegenerate,
          "degenerate weighted design: fewer than two neighbours carry weight");

  const auto y = model.Predict(neighborhood.rows);
  const RowBatch design = EncodeRelativeTo(schema, neighborhood.rows, x);
  const std::span<const double> w = neighborhood.weights;
  auto cols = VaryingColumns(design, w);
  SurrogateFit fit = FitOn(design, cols, y, w, lambda);

  if (k_features && *k_features < cols.size()) {
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t c : cols) {
      ranked.emplace_back(std::abs(fit.beta[c]) * WeightedSd(design, c, w), c);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    cols.clear();
    for (std::size_t r = 0; r < *k_features; ++r) cols.push_back(ranked[r].second);
    std::sort(cols.begin(), cols.end());
    fit = FitOn(design, cols, y, w, lambda);
  }

  Attribution att;
  att.method = neighborhood.provenance == NeighborhoodKind::kLive ? AttributionMethod::kLive
                                                                   : AttributionMethod::kLime;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const Feature& f = schema.feature(j);
    att.features.push_back(f.name);
    const double encoded = f.is_categorical() ? 1.0 : x.values[j];
    att.contributions.push_back(fit.beta[j] * encoded);
  }
  att.prediction = PredictOne(model, x.values);
  att.baseline = MeanPrediction(model, data);
  att.diagnostics.emplace_back("intercept", fit.intercept);
  att.diagnostics.emplace_back("r2", WeightedR2(design, fit, y, w));
  att.diagnostics.emplace_back("lambda", lambda);
  att.diagnostics.emplace_back("n_sim", static_cast<double>(n));
  att.diagnostics.emplace_back("features_used", static_cast<double>(cols.size()));
  for (std::size_t j = 0; j < schema.size(); ++j) {
    att.diagnostics.emplace_back("coefficient:" + schema.feature(j).name, fit.beta[j]);
  }
  att.notes.emplace_back("categorical_encoding", "indicator of the explained level");
  return att;
}

Attribution LimeExplain(const Predictor& model, const Dataset& data, const Instance& x,
                        const LimeOptions& options) {
  Neighborhood hood = LimeSampleNeighborhood(data, x, options.n_sim, options.seed);
  hood.weights = KernelWeights(data, hood.rows, x, options.kernel);
  Attribution att = FitLocalSurrogate(model, data, x, hood, options.lambda, options.k_features);
  att.notes.emplace_back("kernel", options.kernel.ToString());
  if (options.kernel.kind == KernelSpec::Kind::kRbf) {
    const double width = options.kernel.width.value_or(
        0.75 * std::sqrt(static_cast<double>(data.n_features())));
    att.diagnostics.emplace_back("kernel_width", width);
  }
  return att;
}

Attribution LiveExplain(const Predictor& model, const Dataset& data, const Instance& x,
                        const LiveOptions& options) {
  const Neighborhood hood = LiveNeighborhood(data, x, options.n_sim, options.seed);
  Attribution att = FitLocalSurrogate(model, data, x, hood, options.lambda, options.k_features);
  att.notes.emplace_back("kernel", "none (equal weights)");
  return att;
}

}  // namespace posthoc
