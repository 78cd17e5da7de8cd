// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "posthoc/detail/parallel.hpp"
#include "posthoc/error.hpp"
#include "posthoc/global.hpp"

namespace posthoc {
namespace {

struct Task {
  std::string name;
  std::vector<std::size_t> columns;
  // Per-modality tasks permute the indicator of this level only.
  std::optional<std::size_t> level;
};

std::vector<Task> BuildTasks(const FeatureSchema& schema, const ImportanceOptions& options) {
  std::vector<Task> tasks;
  if (!options.groups.empty()) {
    for (const auto& group : options.groups) {
      Require(!group.features.empty(), ErrorCode::kInvalidArgument,
              "feature group '" + group.name + "' is empty");
      Task task{group.name, {}, std::nullopt};
      for (const auto& name : group.features) task.columns.push_back(schema.IndexOf(name));
      tasks.push_back(std::move(task));
    }
    return tasks;
  }
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const Feature& f = schema.feature(j);
    if (options.per_modality && f.is_categorical()) {
      for (std::size_t level = 0; level < f.levels.size(); ++level) {
        tasks.push_back({f.name + "=" + f.levels[level], {j}, level});
      }
    } else {
      tasks.push_back({f.name, {j}, std::nullopt});
    }
  }
  return tasks;
}

}  // namespace

ImportanceTable PermutationImportance(const Predictor& model, const Dataset& data,
                                      const ImportanceOptions& options) {
  Require(options.repeats >= 1, ErrorCode::kInvalidArgument, "repeats must be >= 1");
  Require(data.n_rows() >= 2, ErrorCode::kDegenerate,
          "permutation importance needs at least 2 rows");
  const auto y = data.target();
  const auto exposure = data.exposure();
  const RowBatch base = data.ToRows();
  const auto base_predictions = model.Predict(base);
  const double base_error = Loss(options.loss, y, base_predictions, exposure);
  Require(base_error > 0.0, ErrorCode::kDegenerate,
          "zero base error: the model fits the data exactly (degenerate fit), "
          "importance ratios err_j / err_base are undefined");

  const auto tasks = BuildTasks(data.schema(), options);
  const std::size_t n = data.n_rows();
  std::vector<std::vector<double>> ratios(tasks.size(), std::vector<double>(options.repeats));

  detail::ParallelFor(tasks.size() * options.repeats, detail::CanParallelize(model),
                      [&](std::size_t job) {
    const std::size_t t = job / options.repeats;
    const std::size_t r = job % options.repeats;
    const Task& task = tasks[t];
    RandomEngine rng(detail::MixSeed(options.seed, r, t));
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    std::shuffle(sigma.begin(), sigma.end(), rng);

    RowBatch permuted = base;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t col : task.columns) {
        const double own = base.at(i, col);
        const double donor = base.at(sigma[i], col);
        if (task.level) {
          const auto level = static_cast<double>(*task.level);
          if (own == level || donor == level) permuted.at(i, col) = donor;
        } else {
          permuted.at(i, col) = donor;
        }
      }
    }
    const auto predictions = model.Predict(permuted);
    ratios[t][r] = Loss(options.loss, y, predictions, exposure) / base_error;
  });

  ImportanceTable table;
  table.base_error = base_error;
  table.options = options;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    ImportanceRow row;
    row.name = tasks[t].name;
    row.ratios = std::move(ratios[t]);
    const double count = static_cast<double>(row.ratios.size());
    row.mean = std::accumulate(row.ratios.begin(), row.ratios.end(), 0.0) / count;
    if (row.ratios.size() > 1) {
      double ss = 0.0;
      for (double v : row.ratios) ss += (v - row.mean) * (v - row.mean);
      row.sd = std::sqrt(ss / (count - 1.0));
    }
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ImportanceRow& a, const ImportanceRow& b) { return a.mean > b.mean; });
  return table;
}

}  // namespace posthoc
