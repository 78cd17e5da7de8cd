// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace posthoc {

enum class LossKind { kMse, kMae, kPoissonDeviance };

struct LossSpec {
  LossKind kind = LossKind::kMse;
  // When set and an exposure vector is supplied, predictions are per-unit
  // frequencies and are multiplied by the exposure before scoring.
  bool use_exposure = false;
};

std::string_view LossName(LossKind kind);
// "mse" | "mae" | "poisson"; throws Error(kInvalidArgument) otherwise.
LossKind ParseLossKind(std::string_view name);

// MSE = mean (y - yhat)^2, MAE = mean |y - yhat|,
// Poisson deviance = (2/n) sum [y log(y / yhat) - (y - yhat)] with the log
// term taken as 0 when y = 0.
double Loss(const LossSpec& spec, std::span<const double> y, std::span<const double> yhat,
            std::optional<std::span<const double>> exposure = std::nullopt);

}  // namespace posthoc
