// SPDX-License-Identifier: Apache-2.0
//
// Friedman H-statistics: pairwise and one-versus-rest interaction strength.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posthoc/models.hpp"
#include "posthoc/tabular.hpp"

namespace posthoc {

struct HOptions {
  // Rows used for the partial dependence averages; all rows when the dataset
  // is not larger.
  std::size_t subsample = 1000;
  std::uint64_t seed = 0;
  // Also report the sd of the statistic over 3 bootstrap resamples.
  bool bootstrap = false;
};

struct HValue {
  double h2 = 0.0;
  // Set when the raw ratio exceeded 1 + 1e-9 and was clipped to 1.
  bool clipped = false;
  std::optional<double> bootstrap_sd;
};

// Pairwise H^2 of features j and k on the (sub)sampled rows, with every
// partial dependence function centred to mean zero over those rows.
// Symmetric in (j, k) bit for bit. Throws Error(kDegenerate) with
// "undefined: no joint variance" when the joint partial dependence is zero.
HValue HPairwise(const Predictor& model, const Dataset& data, const std::string& j,
                 const std::string& k, const HOptions& options = {});

// H^2 of feature j against all other features. Throws Error(kDegenerate) for a
// predictor that is constant on the sampled rows.
HValue HTotal(const Predictor& model, const Dataset& data, const std::string& j,
              const HOptions& options = {});

struct InteractionEntry {
  std::optional<HValue> value;  // empty when undefined
  std::string undefined_reason;
  // Level count of each feature involved (0 for numeric features); H tends to
  // overstate interactions with many-level categoricals.
  std::vector<std::size_t> level_counts;
};

struct InteractionMatrix {
  std::vector<std::string> features;
  // p x p, row-major; the diagonal is always undefined.
  std::vector<InteractionEntry> pairwise;
  std::vector<InteractionEntry> total;
  std::size_t n_used = 0;
  bool subsampled = false;
  HOptions options;
  std::vector<std::string> warnings;

  const InteractionEntry& at(std::size_t a, std::size_t b) const {
    return pairwise[a * features.size() + b];
  }
};

// All pairs and totals. Per-entry failures become undefined entries.
InteractionMatrix HMatrix(const Predictor& model, const Dataset& data,
                          const HOptions& options = {});

}  // namespace posthoc
