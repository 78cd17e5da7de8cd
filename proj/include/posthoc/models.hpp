// SPDX-License-Identifier: Apache-2.0
//
// The black-box predictor contract and the reference models that implement
// it: fitted ridge / Poisson GLM, rule tables, the synthetic true function and
// an external process speaking a line protocol.
#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posthoc/tabular.hpp"

namespace posthoc {

enum class Concurrency { kConcurrentSafe, kSerialized };

// Batch prediction: rows laid out in schema order (categorical values as
// level ids) map to one real per row. Implementations are deterministic and
// never mutate their input.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::vector<double> Predict(const RowBatch& rows) const = 0;
  virtual Concurrency concurrency() const { return Concurrency::kConcurrentSafe; }
  virtual std::string description() const = 0;
};

using PredictorPtr = std::shared_ptr<const Predictor>;

std::vector<double> PredictDataset(const Predictor& model, const Dataset& data);
double PredictOne(const Predictor& model, std::span<const double> row);

// Wraps a per-row function. Concurrent-safe as long as `fn` is.
class FunctionPredictor final : public Predictor {
 public:
  using RowFunction = std::function<double(std::span<const double>)>;

  FunctionPredictor(RowFunction fn, std::string description)
      : fn_(std::move(fn)), description_(std::move(description)) {}

  std::vector<double> Predict(const RowBatch& rows) const override;
  std::string description() const override { return description_; }

 private:
  RowFunction fn_;
  std::string description_;
};

// Pointwise sum of two predictors.
class SumPredictor final : public Predictor {
 public:
  SumPredictor(PredictorPtr lhs, PredictorPtr rhs)
      : lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

  std::vector<double> Predict(const RowBatch& rows) const override;
  Concurrency concurrency() const override;
  std::string description() const override;

 private:
  PredictorPtr lhs_;
  PredictorPtr rhs_;
};

// ---------------------------------------------------------------------------
// Design encoding

// Numeric features map to one column; a categorical feature maps to one
// indicator per level, or per level but the first when `drop_first_level`.
class DesignEncoding {
 public:
  DesignEncoding() = default;
  DesignEncoding(const FeatureSchema& schema, bool drop_first_level);

  std::size_t width() const { return width_; }
  bool drop_first_level() const { return drop_first_level_; }
  const FeatureSchema& schema() const { return schema_; }

  void Encode(std::span<const double> row, std::span<double> out) const;
  RowBatch EncodeBatch(const RowBatch& rows) const;
  std::vector<std::string> ColumnNames() const;
  // Encoded columns owned by feature `j` as [first, first + count).
  std::pair<std::size_t, std::size_t> ColumnsOf(std::size_t feature) const;

 private:
  struct Slot {
    std::size_t offset = 0;
    std::size_t count = 0;
  };
  FeatureSchema schema_;
  bool drop_first_level_ = false;
  std::vector<Slot> slots_;
  std::size_t width_ = 0;
};

struct LinearSolution {
  double intercept = 0.0;
  std::vector<double> coefficients;
};

// Minimises sum_i w_i (y_i - b0 - x_i.b)^2 + lambda |b|^2 with the intercept
// unpenalised. `weights` defaults to 1. Throws Error(kNumerical) when
// lambda = 0 and the weighted design is rank deficient, or on non-finite data.
LinearSolution SolveWeightedRidge(const RowBatch& design, std::span<const double> y,
                                  std::optional<std::span<const double>> weights,
                                  double lambda);

// ---------------------------------------------------------------------------
// Linear models

class FittedLinear final : public Predictor {
 public:
  FittedLinear(DesignEncoding encoding, double intercept,
               std::vector<double> coefficients, double ridge_lambda);

  // Numeric-only convenience constructor: one coefficient per feature.
  static FittedLinear FromCoefficients(const FeatureSchema& schema, double intercept,
                                       std::vector<double> coefficients);

  std::vector<double> Predict(const RowBatch& rows) const override;
  std::string description() const override;

  double LinearPredictor(std::span<const double> row) const;

  double intercept() const { return intercept_; }
  std::span<const double> coefficients() const { return coefficients_; }
  double ridge_lambda() const { return ridge_lambda_; }
  const DesignEncoding& encoding() const { return encoding_; }

 private:
  DesignEncoding encoding_;
  double intercept_;
  std::vector<double> coefficients_;
  double ridge_lambda_;
};

// One-hot keeps every level when lambda > 0 and drops the first level when
// lambda = 0. Weights come from `sample_weights`, else the dataset's weight
// column, else 1.
FittedLinear FitRidge(const Dataset& data, double lambda,
                      std::optional<std::span<const double>> sample_weights = {});

struct GlmOptions {
  bool intercept_only = false;
  int max_iterations = 25;
  double tolerance = 1e-8;
};

// Poisson GLM with log link and log(exposure) offset.
class FittedGlm final : public Predictor {
 public:
  struct Diagnostics {
    double deviance = 0.0;  // mean unit deviance on the training data
    int iterations = 0;
    bool converged = false;
  };

  FittedGlm(DesignEncoding encoding, double intercept, std::vector<double> coefficients,
            Diagnostics diagnostics);

  // Per-unit-exposure frequency exp(eta).
  std::vector<double> Predict(const RowBatch& rows) const override;
  std::string description() const override;

  // exp(eta + log exposure).
  std::vector<double> PredictWithExposure(const RowBatch& rows,
                                          std::span<const double> exposure) const;
  double LinearPredictor(std::span<const double> row) const;

  double intercept() const { return intercept_; }
  std::span<const double> coefficients() const { return coefficients_; }
  const DesignEncoding& encoding() const { return encoding_; }
  const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  DesignEncoding encoding_;
  double intercept_;
  std::vector<double> coefficients_;
  Diagnostics diagnostics_;
};

// IRLS; stops when the relative deviance change drops below the tolerance.
// Throws Error(kNumerical) on divergence or when the iteration cap is hit
// without convergence, Error(kInvalidArgument) on negative counts.
FittedGlm FitPoissonGlm(const Dataset& data, const GlmOptions& options = {});

// Coefficient dumps ({"kind": "linear" | "poisson_glm", ...}).
std::string ModelDumpJson(const FittedLinear& model);
std::string ModelDumpJson(const FittedGlm& model);
PredictorPtr LoadModelDump(std::string_view text);

// ---------------------------------------------------------------------------
// Rule tables

struct Rule {
  // (feature, level) pairs; features absent from the list match any level.
  std::vector<std::pair<std::string, std::string>> when;
  double value = 0.0;
};

struct RuleTable {
  std::vector<std::string> features;
  std::vector<Rule> rules;

  // {"features": ["Age", "Power"],
  //  "rules": [{"when": {"Age": "Young", "Power": "High"}, "value": 400}, ...]}
  static RuleTable FromJsonText(std::string_view text);
  std::string ToJsonText() const;
};

// Claim-cost example: Age {Young, Old} x Power {High, Low}.
FeatureSchema ClaimCostSchema();
// Young/High 400, Young/Low 200, Old/High 250, Old/Low 150 (interaction +100).
RuleTable InteractionRuleTable();
// Young/High 300, Young/Low 200, Old/High 250, Old/Low 150 (purely additive).
RuleTable AdditiveRuleTable();

// Exact lookup predictor. Throws Error(kSchema) unless exactly one rule covers
// every combination of levels of the table's features.
class RuleTablePredictor final : public Predictor {
 public:
  RuleTablePredictor(const RuleTable& table, const FeatureSchema& schema);

  std::vector<double> Predict(const RowBatch& rows) const override;
  std::string description() const override;

 private:
  std::vector<std::size_t> columns_;
  std::vector<std::size_t> radix_;
  std::vector<double> cells_;
  std::size_t rule_count_ = 0;
};

// ---------------------------------------------------------------------------
// Synthetic example

// y = 0.2 x1 - 5 x2 + 10 x2 1{x3 >= 0}
double SyntheticTruth(double x1, double x2, double x3);

struct SyntheticExample {
  Dataset data;         // features x1, x2, x3 ~ U(-1, 1); target y = truth + N(0, 1)
  PredictorPtr truth;   // the noiseless function
};

SyntheticExample SyntheticPdpExample(std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// External process

struct ExternalOptions {
  std::string command;  // run through /bin/sh -c
  std::size_t batch_size = 1000;
  std::chrono::milliseconds timeout{30000};  // per batch
};

// Spawns `command` and talks to it over stdin/stdout:
//   startup:  "SCHEMA <json>\n"
//   request:  "PREDICT <k>\n" followed by k CSV rows (categoricals as labels)
//   response: k lines, each one decimal literal
// Calls are serialized; the child is terminated on destruction. SIGPIPE is
// ignored process-wide once an external predictor is created.
class ExternalPredictor final : public Predictor {
 public:
  ExternalPredictor(FeatureSchema schema, ExternalOptions options);
  ~ExternalPredictor() override;

  ExternalPredictor(const ExternalPredictor&) = delete;
  ExternalPredictor& operator=(const ExternalPredictor&) = delete;

  std::vector<double> Predict(const RowBatch& rows) const override;
  Concurrency concurrency() const override { return Concurrency::kSerialized; }
  std::string description() const override;

  std::size_t batches_sent() const;

 private:
  void PredictBatch(const RowBatch& rows, std::size_t begin, std::size_t end,
                    std::vector<double>& out) const;
  void WriteAll(const std::string& text) const;
  std::string ReadLine(std::chrono::steady_clock::time_point deadline,
                       std::size_t received, std::size_t expected) const;
  void Shutdown() noexcept;

  FeatureSchema schema_;
  ExternalOptions options_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  mutable std::mutex mutex_;
  mutable std::string buffer_;
  mutable std::size_t batches_ = 0;
  mutable bool broken_ = false;
};

}  // namespace posthoc
