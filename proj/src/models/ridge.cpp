// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "posthoc/error.hpp"
#include "posthoc/models.hpp"
#include "posthoc/simd/kernels.hpp"

namespace posthoc {
namespace {

bool AllNumeric(const FeatureSchema& schema) {
  for (const auto& f : schema.features()) {
    if (f.is_categorical()) return false;
  }
  return true;
}

}  // namespace

LinearSolution SolveWeightedRidge(const RowBatch& design, std::span<const double> y,
                                  std::optional<std::span<const double>> weights,
                                  double lambda) {
  const std::size_t n = design.n_rows();
  const std::size_t q = design.n_cols();
  Require(n >= 1, ErrorCode::kDegenerate, "ridge fit on zero rows");
  Require(y.size() == n, ErrorCode::kInvalidArgument, "target length mismatch");
  Require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::kInvalidArgument,
          "ridge lambda must be finite and non-negative");
  if (weights) {
    Require(weights->size() == n, ErrorCode::kInvalidArgument, "weight length mismatch");
  }
  for (double v : design.values()) {
    Require(std::isfinite(v), ErrorCode::kNumerical, "non-finite value in design matrix");
  }
  double total_weight = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Require(std::isfinite(y[i]), ErrorCode::kNumerical, "non-finite target value");
    const double w = weights ? (*weights)[i] : 1.0;
    Require(std::isfinite(w) && w >= 0.0, ErrorCode::kNumerical,
            "weights must be finite and non-negative");
    total_weight += w;
  }
  Require(total_weight > 0.0, ErrorCode::kDegenerate, "all weights are zero");

  // Weighted means, accumulated as offsets from the first row so that a
  // constant column has a mean equal to that constant bit for bit.
  const auto row0 = design.row(0);
  Eigen::VectorXd x_mean(static_cast<Eigen::Index>(q));
  for (std::size_t c = 0; c < q; ++c) x_mean[static_cast<Eigen::Index>(c)] = 0.0;
  double y_shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    if (w == 0.0) continue;
    const auto row = design.row(i);
    for (std::size_t c = 0; c < q; ++c) {
      x_mean[static_cast<Eigen::Index>(c)] += w * (row[c] - row0[c]);
    }
    y_shift += w * (y[i] - y[0]);
  }
  for (std::size_t c = 0; c < q; ++c) {
    x_mean[static_cast<Eigen::Index>(c)] = row0[c] + x_mean[static_cast<Eigen::Index>(c)] / total_weight;
  }
  const double y_mean = y[0] + y_shift / total_weight;

  LinearSolution solution;
  solution.coefficients.assign(q, 0.0);
  if (q == 0) {
    solution.intercept = y_mean;
    return solution;
  }

  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(q);
  Eigen::MatrixXd xs(rows, cols);
  Eigen::VectorXd ys(rows);
  for (std::size_t i = 0; i < n; ++i) {
    const double sw = std::sqrt(weights ? (*weights)[i] : 1.0);
    const auto row = design.row(i);
    for (std::size_t c = 0; c < q; ++c) {
      xs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          sw * (row[c] - x_mean[static_cast<Eigen::Index>(c)]);
    }
    ys[static_cast<Eigen::Index>(i)] = sw * (y[i] - y_mean);
  }

  Eigen::VectorXd beta;
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < cols) {
      std::ostringstream msg;
      msg << "rank-deficient design at lambda = 0 (rank " << qr.rank() << " of " << q
          << " columns); use lambda > 0 or drop redundant columns";
      Fail(ErrorCode::kNumerical, msg.str());
    }
    beta = qr.solve(ys);
  } else {
    Eigen::MatrixXd gram = xs.transpose() * xs;
    gram.diagonal().array() += lambda;
    const Eigen::VectorXd rhs = xs.transpose() * ys;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    Require(ldlt.info() == Eigen::Success, ErrorCode::kNumerical,
            "ridge normal equations could not be factorised");
    beta = ldlt.solve(rhs);
    // One refinement step tightens the residual gradient.
    beta += ldlt.solve(rhs - gram * beta);
  }
  for (Eigen::Index c = 0; c < cols; ++c) {
    Require(std::isfinite(beta[c]), ErrorCode::kNumerical, "ridge solution is not finite");
    solution.coefficients[static_cast<std::size_t>(c)] = beta[c];
  }
  solution.intercept = y_mean - x_mean.dot(beta);
  return solution;
}

FittedLinear::FittedLinear(DesignEncoding encoding, double intercept,
                           std::vector<double> coefficients, double ridge_lambda)
    : encoding_(std::move(encoding)),
      intercept_(intercept),
      coefficients_(std::move(coefficients)),
      ridge_lambda_(ridge_lambda) {
  Require(coefficients_.size() == encoding_.width(), ErrorCode::kInvalidArgument,
          "coefficient count " + std::to_string(coefficients_.size()) +
              " does not match encoded width " + std::to_string(encoding_.width()));
}

FittedLinear FittedLinear::FromCoefficients(const FeatureSchema& schema, double intercept,
                                            std::vector<double> coefficients) {
  Require(AllNumeric(schema), ErrorCode::kInvalidArgument,
          "FromCoefficients needs a numeric-only schema");
  return FittedLinear(DesignEncoding(schema, false), intercept, std::move(coefficients), 0.0);
}

double FittedLinear::LinearPredictor(std::span<const double> row) const {
  if (encoding_.width() == row.size() && AllNumeric(encoding_.schema())) {
    return intercept_ + simd::Dot(row, coefficients_);
  }
  std::vector<double> encoded(encoding_.width());
  encoding_.Encode(row, encoded);
  return intercept_ + simd::Dot(encoded, coefficients_);
}

std::vector<double> FittedLinear::Predict(const RowBatch& rows) const {
  Require(rows.n_cols() == encoding_.schema().size(), ErrorCode::kSchema,
          "rows do not match the model schema");
  std::vector<double> out(rows.n_rows());
  if (AllNumeric(encoding_.schema())) {
    for (std::size_t i = 0; i < rows.n_rows(); ++i) {
      out[i] = intercept_ + simd::Dot(rows.row(i), coefficients_);
    }
    return out;
  }
  std::vector<double> encoded(encoding_.width());
  for (std::size_t i = 0; i < rows.n_rows(); ++i) {
    encoding_.Encode(rows.row(i), encoded);
    out[i] = intercept_ + simd::Dot(encoded, coefficients_);
  }
  return out;
}

std::string FittedLinear::description() const {
  std::ostringstream s;
  s << "linear model (" << coefficients_.size() << " coefficients, lambda = "
    << ridge_lambda_ << ")";
  return s.str();
}

FittedLinear FitRidge(const Dataset& data, double lambda,
                      std::optional<std::span<const double>> sample_weights) {
  DesignEncoding encoding(data.schema(), lambda == 0.0);
  const RowBatch design = encoding.EncodeBatch(data.ToRows());
  auto weights = sample_weights ? sample_weights : data.weight();
  auto solution = SolveWeightedRidge(design, data.target(), weights, lambda);
  return FittedLinear(std::move(encoding), solution.intercept,
                      std::move(solution.coefficients), lambda);
}

}  // namespace posthoc
