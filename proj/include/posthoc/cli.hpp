// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: run configuration, model specs, the evaluate report
// and the artifact-writing driver behind tools/posthoc.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posthoc/metrics.hpp"
#include "posthoc/models.hpp"
#include "posthoc/tabular.hpp"

namespace posthoc::cli {

// Everything needed to reproduce one invocation. Embedded in every artifact.
struct RunConfig {
  std::string command;
  std::string demo;  // demo scenario name
  std::string data;
  std::string schema;
  std::string model;  // glm | ridge[:LAMBDA] | file:PATH | rule-table:PATH|table1|table2
                      // | synthetic | external:COMMAND
  std::size_t batch = 1000;
  double timeout = 30.0;  // seconds per external batch
  std::vector<std::string> features;
  std::string group_by;
  std::vector<std::string> groups;  // importance groups, "NAME=f1,f2"
  std::size_t grid = 20;
  std::size_t bins = 20;
  std::size_t n_sim = 5000;
  std::string kernel = "gower";
  double lambda = 0.01;
  std::size_t M = 1000;
  std::size_t repeats = 5;
  std::size_t subsample = 1000;
  std::uint64_t seed = 0;
  std::optional<double> split;  // training fraction; none = use all rows
  std::string part = "train";
  std::string loss = "mse";
  std::vector<std::string> metrics{"poisson", "mse", "mae"};
  bool center = false;
  std::size_t max_curves = 1000;
  bool per_modality = false;
  std::optional<std::size_t> k_features;
  std::size_t background = 0;
  std::size_t row = 0;
  bool bootstrap = false;
  std::size_t n = 1000;  // demo sample size
  std::string missing = "reject";
  std::string delimiter = ",";
  std::string out = "out";
  std::string format = "json";

  std::string ToJsonText() const;
  static RunConfig FromJsonText(std::string_view text);
};

// Thrown for invalid flags or flag combinations; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Built-in intercept-only frequency: sum(y) / sum(exposure) (or mean(y)).
PredictorPtr InterceptOnly(const Dataset& train);

struct EvaluateRow {
  std::string metric;
  double train = 0.0;
  double test = 0.0;
  double gain_train = 0.0;  // 1 - loss / baseline loss
  double gain_test = 0.0;
};

struct EvaluateModelReport {
  std::string model;
  std::vector<EvaluateRow> rows;
};

struct EvaluateReport {
  std::vector<EvaluateModelReport> models;  // the intercept-only baseline first
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

// Scores each fitted model on both parts. Predictions are per-unit
// frequencies scaled by the exposure when the schema declares one.
EvaluateReport Evaluate(const std::vector<std::pair<std::string, PredictorPtr>>& models,
                        const Split& split, const std::vector<LossKind>& metrics);

// Parses argv, runs the subcommand, writes artifacts. Returns the exit code:
// 0 on success, 2 on usage errors, 1 on runtime errors.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Runs a configuration directly (what --replay does after loading one).
void Execute(const RunConfig& config, std::ostream& out);

}  // namespace posthoc::cli
