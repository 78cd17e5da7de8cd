// SPDX-License-Identifier: Apache-2.0
#include "posthoc/error.hpp"
#include "posthoc/models.hpp"

namespace posthoc {

std::vector<double> PredictDataset(const Predictor& model, const Dataset& data) {
  auto predictions = model.Predict(data.ToRows());
  Require(predictions.size() == data.n_rows(), ErrorCode::kProtocol,
          "predictor returned " + std::to_string(predictions.size()) +
              " predictions for " + std::to_string(data.n_rows()) + " rows");
  return predictions;
}

double PredictOne(const Predictor& model, std::span<const double> row) {
  RowBatch batch;
  batch.AppendRow(row);
  const auto out = model.Predict(batch);
  Require(out.size() == 1, ErrorCode::kProtocol, "predictor returned no prediction");
  return out[0];
}

std::vector<double> FunctionPredictor::Predict(const RowBatch& rows) const {
  std::vector<double> out(rows.n_rows());
  for (std::size_t i = 0; i < rows.n_rows(); ++i) out[i] = fn_(rows.row(i));
  return out;
}

std::vector<double> SumPredictor::Predict(const RowBatch& rows) const {
  auto out = lhs_->Predict(rows);
  const auto rhs = rhs_->Predict(rows);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += rhs[i];
  return out;
}

Concurrency SumPredictor::concurrency() const {
  return lhs_->concurrency() == Concurrency::kConcurrentSafe &&
                 rhs_->concurrency() == Concurrency::kConcurrentSafe
             ? Concurrency::kConcurrentSafe
             : Concurrency::kSerialized;
}

std::string SumPredictor::description() const {
  return "(" + lhs_->description() + ") + (" + rhs_->description() + ")";
}

}  // namespace posthoc
