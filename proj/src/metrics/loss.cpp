// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <vector>

#include "posthoc/error.hpp"
#include "posthoc/metrics.hpp"
#include "posthoc/simd/kernels.hpp"

namespace posthoc {

std::string_view LossName(LossKind kind) {
  switch (kind) {
    case LossKind::kMse:
      return "mse";
    case LossKind::kMae:
      return "mae";
    case LossKind::kPoissonDeviance:
      return "poisson";
  }
  return "unknown";
}

LossKind ParseLossKind(std::string_view name) {
  if (name == "mse") return LossKind::kMse;
  if (name == "mae") return LossKind::kMae;
  if (name == "poisson" || name == "poisson-deviance") return LossKind::kPoissonDeviance;
  Fail(ErrorCode::kInvalidArgument, "unknown loss '" + std::string(name) + "'");
}

double Loss(const LossSpec& spec, std::span<const double> y, std::span<const double> yhat,
            std::optional<std::span<const double>> exposure) {
  Require(y.size() == yhat.size(), ErrorCode::kInvalidArgument,
          "loss: " + std::to_string(y.size()) + " targets vs " +
              std::to_string(yhat.size()) + " predictions");
  Require(!y.empty(), ErrorCode::kDegenerate, "loss of an empty sample");
  std::vector<double> scaled;
  if (spec.use_exposure && exposure) {
    Require(exposure->size() == y.size(), ErrorCode::kInvalidArgument,
            "loss: exposure length mismatch");
    scaled.resize(yhat.size());
    for (std::size_t i = 0; i < yhat.size(); ++i) scaled[i] = yhat[i] * (*exposure)[i];
    yhat = scaled;
  }
  const double n = static_cast<double>(y.size());
  switch (spec.kind) {
    case LossKind::kMse:
      return simd::SumSqDiff(y, yhat) / n;
    case LossKind::kMae:
      return simd::SumAbsDiff(y, yhat) / n;
    case LossKind::kPoissonDeviance: {
      double total = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        Require(y[i] >= 0.0, ErrorCode::kInvalidArgument,
                "Poisson deviance needs non-negative targets");
        Require(yhat[i] > 0.0, ErrorCode::kInvalidArgument,
                "Poisson deviance needs positive predictions");
        const double log_term = y[i] > 0.0 ? y[i] * std::log(y[i] / yhat[i]) : 0.0;
        total += log_term - (y[i] - yhat[i]);
      }
      // Rounding can leave a tiny negative sum at a perfect fit.
      return std::max(0.0, 2.0 * total / n);
    }
  }
  return 0.0;
}

}  // namespace posthoc
