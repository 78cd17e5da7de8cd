// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>

#include "posthoc/error.hpp"
#include "posthoc/models.hpp"
#include "posthoc/simd/kernels.hpp"

namespace posthoc {
namespace {

// Total Poisson deviance 2 sum w [y log(y / mu) - (y - mu)].
double PoissonDeviance(std::span<const double> y, std::span<const double> mu,
                       std::span<const double> w) {
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double term = y[i] > 0.0 ? y[i] * std::log(y[i] / mu[i]) : 0.0;
    total += w[i] * (term - (y[i] - mu[i]));
  }
  return 2.0 * total;
}

}  // namespace

FittedGlm::FittedGlm(DesignEncoding encoding, double intercept,
                     std::vector<double> coefficients, Diagnostics diagnostics)
    : encoding_(std::move(encoding)),
      intercept_(intercept),
      coefficients_(std::move(coefficients)),
      diagnostics_(diagnostics) {
  Require(coefficients_.size() == encoding_.width(), ErrorCode::kInvalidArgument,
          "coefficient count does not match encoded width");
}

double FittedGlm::LinearPredictor(std::span<const double> row) const {
  std::vector<double> encoded(encoding_.width());
  encoding_.Encode(row, encoded);
  return intercept_ + simd::Dot(encoded, coefficients_);
}

std::vector<double> FittedGlm::Predict(const RowBatch& rows) const {
  Require(rows.n_cols() == encoding_.schema().size(), ErrorCode::kSchema,
          "rows do not match the model schema");
  std::vector<double> out(rows.n_rows());
  std::vector<double> encoded(encoding_.width());
  for (std::size_t i = 0; i < rows.n_rows(); ++i) {
    encoding_.Encode(rows.row(i), encoded);
    out[i] = std::exp(intercept_ + simd::Dot(encoded, coefficients_));
  }
  return out;
}

std::vector<double> FittedGlm::PredictWithExposure(const RowBatch& rows,
                                                   std::span<const double> exposure) const {
  Require(exposure.size() == rows.n_rows(), ErrorCode::kInvalidArgument,
          "exposure length mismatch");
  std::vector<double> out(rows.n_rows());
  std::vector<double> encoded(encoding_.width());
  for (std::size_t i = 0; i < rows.n_rows(); ++i) {
    Require(exposure[i] > 0.0, ErrorCode::kInvalidArgument, "non-positive exposure");
    encoding_.Encode(rows.row(i), encoded);
    out[i] = std::exp(intercept_ + simd::Dot(encoded, coefficients_) + std::log(exposure[i]));
  }
  return out;
}

std::string FittedGlm::description() const {
  std::ostringstream s;
  s << "Poisson GLM, log link (" << coefficients_.size() << " coefficients, "
    << diagnostics_.iterations << " IRLS iterations)";
  return s.str();
}

FittedGlm FitPoissonGlm(const Dataset& data, const GlmOptions& options) {
  const std::size_t n = data.n_rows();
  Require(n >= 1, ErrorCode::kDegenerate, "GLM fit on zero rows");
  const auto y = data.target();
  for (std::size_t i = 0; i < n; ++i) {
    Require(y[i] >= 0.0, ErrorCode::kInvalidArgument,
            "negative target at row " + std::to_string(i) + " (Poisson counts must be >= 0)");
  }
  DesignEncoding encoding(data.schema(), true);
  const RowBatch full_design = encoding.EncodeBatch(data.ToRows());
  const RowBatch design = options.intercept_only ? RowBatch(n, 0) : full_design;
  const std::size_t q = design.n_cols();

  std::vector<double> offset(n, 0.0);
  double total_exposure = static_cast<double>(n);
  if (const auto exposure = data.exposure()) {
    total_exposure = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      offset[i] = std::log((*exposure)[i]);
      total_exposure += (*exposure)[i];
    }
  }
  std::vector<double> prior(n, 1.0);
  if (const auto w = data.weight()) prior.assign(w->begin(), w->end());
  double weight_total = 0.0;
  for (double w : prior) weight_total += w;
  Require(weight_total > 0.0, ErrorCode::kDegenerate, "all weights are zero");

  double total_claims = 0.0;
  for (double v : y) total_claims += v;
  double intercept = std::log((total_claims + 0.5) / (total_exposure + 1.0));
  std::vector<double> beta(q, 0.0);

  std::vector<double> eta(n), mu(n), working_weight(n), working_response(n);
  const auto update_mean = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      eta[i] = intercept + simd::Dot(design.row(i), beta) + offset[i];
      mu[i] = std::exp(eta[i]);
      Require(std::isfinite(mu[i]) && mu[i] > 0.0, ErrorCode::kNumerical,
              "IRLS diverged: non-finite fitted mean (separation?)");
    }
  };
  update_mean();
  double deviance = PoissonDeviance(y, mu, prior);

  FittedGlm::Diagnostics diagnostics;
  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    for (std::size_t i = 0; i < n; ++i) {
      working_weight[i] = prior[i] * mu[i];
      working_response[i] = eta[i] - offset[i] + (y[i] - mu[i]) / mu[i];
      Require(std::isfinite(working_weight[i]) && std::isfinite(working_response[i]),
              ErrorCode::kNumerical, "IRLS diverged: non-finite working weights");
    }
    auto step = SolveWeightedRidge(design, working_response,
                                   std::span<const double>(working_weight), 0.0);
    intercept = step.intercept;
    beta = std::move(step.coefficients);
    update_mean();
    const double previous = deviance;
    deviance = PoissonDeviance(y, mu, prior);
    Require(std::isfinite(deviance), ErrorCode::kNumerical, "IRLS diverged: deviance");
    diagnostics.iterations = iteration;
    if (std::fabs(deviance - previous) / (std::fabs(deviance) + 0.1) < options.tolerance) {
      diagnostics.converged = true;
      break;
    }
  }
  Require(diagnostics.converged, ErrorCode::kNumerical,
          "IRLS did not converge in " + std::to_string(options.max_iterations) + " iterations");
  diagnostics.deviance = deviance / weight_total;

  std::vector<double> coefficients(encoding.width(), 0.0);
  if (!options.intercept_only) coefficients = std::move(beta);
  return FittedGlm(std::move(encoding), intercept, std::move(coefficients), diagnostics);
}

}  // namespace posthoc
