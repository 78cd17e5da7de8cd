// SPDX-License-Identifier: Apache-2.0
//
// Per-instance explainers: LIME and LIVE local surrogates, Monte Carlo SHAP
// and exact (enumerated) Shapley values.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posthoc/models.hpp"
#include "posthoc/tabular.hpp"

namespace posthoc {

enum class AttributionMethod { kLime, kLive, kShapMc, kShapleyExact };

std::string_view AttributionMethodName(AttributionMethod method);

struct Attribution {
  AttributionMethod method = AttributionMethod::kLime;
  std::vector<std::string> features;
  std::vector<double> contributions;  // one per feature
  double baseline = 0.0;              // mean prediction over the reference data
  double prediction = 0.0;            // model(x)
  // SHAP-MC only: standard error of each contribution.
  std::vector<double> standard_errors;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::pair<std::string, std::string>> notes;

  std::optional<double> Diagnostic(std::string_view key) const;
};

// sum(contributions) - (prediction - baseline).
double EfficiencyGap(const Attribution& attribution);

// ---------------------------------------------------------------------------
// Neighbourhoods

enum class NeighborhoodKind { kLimeGaussian, kLive };

struct Neighborhood {
  RowBatch rows;
  std::vector<double> weights;
  NeighborhoodKind provenance = NeighborhoodKind::kLimeGaussian;
};

// Numeric features drawn iid from Normal(mean, sd) with the data's moments
// (a zero-sd feature stays constant); categorical features drawn from the
// empirical level frequencies. Weights are left at 1.
Neighborhood LimeSampleNeighborhood(const Dataset& data, const Instance& x, std::size_t n_sim,
                                    std::uint64_t seed);

// n_sim copies of x, each with one uniformly chosen feature replaced by a
// uniform draw from that feature's column. Equal weights.
Neighborhood LiveNeighborhood(const Dataset& data, const Instance& x, std::size_t n_sim,
                              std::uint64_t seed);

struct KernelSpec {
  enum class Kind { kGower, kRbf };
  Kind kind = Kind::kGower;
  // RBF width on the standardised scale; defaults to 0.75 sqrt(p).
  std::optional<double> width;

  // "gower" | "rbf" | "rbf:WIDTH"
  static KernelSpec Parse(std::string_view text);
  std::string ToString() const;
};

// Proximity of each neighbourhood row to x. Scales come from `reference`:
// numeric sd for RBF (standardised Euclidean distance, categorical mismatch
// adds 1), numeric range for Gower (1 - mean of range-normalised |delta|
// capped at 1 and 0/1 categorical mismatch).
std::vector<double> KernelWeights(const Dataset& reference, const RowBatch& rows,
                                  const Instance& x, const KernelSpec& kernel);

// ---------------------------------------------------------------------------
// Local surrogates

struct LimeOptions {
  std::size_t n_sim = 5000;
  KernelSpec kernel;
  double lambda = 0.01;
  // Refit on the k features with the largest |coefficient| x weighted sd.
  std::optional<std::size_t> k_features;
  std::uint64_t seed = 0;
};

// Weighted ridge of model predictions on the neighbourhood. Numeric features
// enter as is, categorical ones as 1{level = x's level}; contribution_j is
// coefficient_j times x's encoded value. Diagnostics: intercept, r2
// (weighted), kernel_width (RBF), n_sim.
Attribution LimeExplain(const Predictor& model, const Dataset& data, const Instance& x,
                        const LimeOptions& options = {});

struct LiveOptions {
  std::size_t n_sim = 5000;
  double lambda = 0.01;
  std::optional<std::size_t> k_features;
  std::uint64_t seed = 0;
};

// Same surrogate fitted unweighted on a LIVE neighbourhood.
Attribution LiveExplain(const Predictor& model, const Dataset& data, const Instance& x,
                        const LiveOptions& options = {});

// Fits the surrogate on an explicit neighbourhood.
Attribution FitLocalSurrogate(const Predictor& model, const Dataset& data, const Instance& x,
                              const Neighborhood& neighborhood, double lambda,
                              std::optional<std::size_t> k_features);

// ---------------------------------------------------------------------------
// Shapley values

struct ShapOptions {
  std::size_t iterations = 1000;  // M
  std::uint64_t seed = 0;
  // Background rows drawn from the data (with the seed); 0 uses every row.
  std::size_t background_rows = 0;
};

// Permutation sampling: each iteration draws a background row z and a feature
// order, then walks the order switching features from z to x. Coalition values
// are interventional (features assumed independent).
Attribution ShapMc(const Predictor& model, const Dataset& data, const Instance& x,
                   const ShapOptions& options = {});

inline constexpr std::size_t kMaxExactShapleyFeatures = 12;

// Enumerates all 2^p coalitions; v(S) is the mean prediction over the
// background with S set to x's values, minus the mean prediction.
Attribution ShapleyExact(const Predictor& model, const Dataset& background, const Instance& x);

}  // namespace posthoc
