// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "posthoc/detail/parallel.hpp"
#include "posthoc/error.hpp"
#include "posthoc/global.hpp"

namespace posthoc {
namespace {

std::size_t NumericFeature(const Dataset& data, const std::string& name, const char* method) {
  const std::size_t j = data.schema().IndexOf(name);
  Require(!data.schema().feature(j).is_categorical(), ErrorCode::kInvalidArgument,
          std::string(method) + " is defined for numeric features only; '" + name +
              "' is categorical");
  return j;
}

void RequireRows(const Dataset& data) {
  Require(data.n_rows() > 0, ErrorCode::kDegenerate, "dataset is empty");
}

double Mean(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

// Predictions for `base` with column `col` overwritten by each grid value in
// turn: result[g] holds one prediction per row.
std::vector<std::vector<double>> InterveneOneAxis(const Predictor& model, const RowBatch& base,
                                                  std::size_t col,
                                                  std::span<const double> grid) {
  std::vector<std::vector<double>> out(grid.size());
  detail::ParallelFor(grid.size(), detail::CanParallelize(model), [&](std::size_t g) {
    RowBatch rows = base;
    for (std::size_t i = 0; i < rows.n_rows(); ++i) rows.at(i, col) = grid[g];
    out[g] = model.Predict(rows);
  });
  return out;
}

// Merged quantile edges with no empty bin, and the bin of every row.
struct Binning {
  std::vector<double> edges;
  std::vector<std::size_t> bin_of_row;
  std::vector<std::size_t> counts;
};

Binning BinFeature(std::span<const double> column, std::size_t bins) {
  Require(bins >= 1, ErrorCode::kInvalidArgument, "bins must be >= 1");
  Binning b;
  b.edges = QuantileBins(column, bins);
  while (true) {
    const std::size_t k = b.edges.size() - 1;
    b.counts.assign(k, 0);
    b.bin_of_row.resize(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
      b.bin_of_row[i] = BinIndex(b.edges, column[i]);
      ++b.counts[b.bin_of_row[i]];
    }
    const auto empty = std::find(b.counts.begin(), b.counts.end(), std::size_t{0});
    if (empty == b.counts.end()) return b;
    // Interpolated quantiles can leave a bin without rows; fold it into its
    // right neighbour (the left one for the last bin).
    const auto bin = static_cast<std::size_t>(empty - b.counts.begin());
    const std::size_t drop = bin + 1 < k ? bin + 1 : bin;
    b.edges.erase(b.edges.begin() + static_cast<std::ptrdiff_t>(drop));
  }
}

GridAxis NumericAxis(const Dataset& data, std::size_t j, std::vector<double> values) {
  GridAxis axis;
  axis.feature = data.schema().feature(j).name;
  axis.values = std::move(values);
  return axis;
}

}  // namespace

std::string_view CurveKindName(CurveKind kind) {
  switch (kind) {
    case CurveKind::kPdp: return "pdp";
    case CurveKind::kAle: return "ale";
    case CurveKind::kMPlot: return "mplot";
  }
  return "unknown";
}

GridAxis MakeGrid(const Dataset& data, std::size_t feature, std::size_t grid_size) {
  RequireRows(data);
  const Feature& f = data.schema().feature(feature);
  GridAxis axis;
  axis.feature = f.name;
  if (f.is_categorical()) {
    axis.categorical = true;
    axis.labels = f.levels;
    for (std::size_t level = 0; level < f.levels.size(); ++level) {
      axis.values.push_back(static_cast<double>(level));
    }
    return axis;
  }
  Require(grid_size >= 2, ErrorCode::kInvalidArgument, "grid size must be >= 2");
  const auto column = data.column(feature);
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> unique = sorted;
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.size() <= grid_size) {
    axis.values = std::move(unique);
    return axis;
  }
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double p = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    const double q = SortedQuantile(sorted, p);
    if (axis.values.empty() || q > axis.values.back()) axis.values.push_back(q);
  }
  return axis;
}

CurveSeries PdpOnGrid(const Predictor& model, const Dataset& data, std::vector<GridAxis> axes) {
  RequireRows(data);
  Require(axes.size() == 1 || axes.size() == 2, ErrorCode::kInvalidArgument,
          "partial dependence takes 1 or 2 features");
  std::vector<std::size_t> cols;
  for (const auto& axis : axes) {
    Require(!axis.values.empty(), ErrorCode::kInvalidArgument,
            "empty grid for feature '" + axis.feature + "'");
    cols.push_back(data.schema().IndexOf(axis.feature));
  }
  if (cols.size() == 2) {
    Require(cols[0] != cols[1], ErrorCode::kInvalidArgument,
            "two-way partial dependence needs two distinct features");
  }
  const RowBatch base = data.ToRows();
  const std::size_t n0 = axes[0].values.size();
  const std::size_t n1 = axes.size() == 2 ? axes[1].values.size() : 1;

  CurveSeries series;
  series.kind = CurveKind::kPdp;
  series.n_used = data.n_rows();
  series.values.assign(n0 * n1, 0.0);
  detail::ParallelFor(n0 * n1, detail::CanParallelize(model), [&](std::size_t g) {
    RowBatch rows = base;
    for (std::size_t i = 0; i < rows.n_rows(); ++i) {
      rows.at(i, cols[0]) = axes[0].values[g / n1];
      if (cols.size() == 2) rows.at(i, cols[1]) = axes[1].values[g % n1];
    }
    series.values[g] = Mean(model.Predict(rows));
  });
  series.axes = std::move(axes);
  return series;
}

CurveSeries Pdp(const Predictor& model, const Dataset& data,
                std::span<const std::string> features, std::size_t grid_size) {
  Require(features.size() == 1 || features.size() == 2, ErrorCode::kInvalidArgument,
          "partial dependence takes 1 or 2 features, got " + std::to_string(features.size()));
  std::vector<GridAxis> axes;
  for (const auto& name : features) {
    axes.push_back(MakeGrid(data, data.schema().IndexOf(name), grid_size));
  }
  return PdpOnGrid(model, data, std::move(axes));
}

CurveSeries Pdp(const Predictor& model, const Dataset& data, const std::string& feature,
                std::size_t grid_size) {
  return Pdp(model, data, std::span<const std::string>(&feature, 1), grid_size);
}

IceBundle Ice(const Predictor& model, const Dataset& data, const std::string& feature,
              const IceOptions& options) {
  RequireRows(data);
  Require(options.max_curves >= 1, ErrorCode::kInvalidArgument, "max curves must be >= 1");
  const std::size_t col = data.schema().IndexOf(feature);
  IceBundle bundle;
  bundle.grid = MakeGrid(data, col, options.grid_size);
  bundle.centered = options.center;

  if (data.n_rows() > options.max_curves) {
    bundle.rows = SampleRowIndices(data.n_rows(), options.max_curves, options.seed);
    std::sort(bundle.rows.begin(), bundle.rows.end());
  } else {
    bundle.rows.resize(data.n_rows());
    std::iota(bundle.rows.begin(), bundle.rows.end(), std::size_t{0});
  }
  RowBatch base(bundle.rows.size(), data.n_features());
  for (std::size_t i = 0; i < bundle.rows.size(); ++i) data.CopyRow(bundle.rows[i], base.row(i));

  const std::size_t g_count = bundle.grid.values.size();
  const auto by_grid = InterveneOneAxis(model, base, col, bundle.grid.values);
  bundle.curves.assign(bundle.rows.size() * g_count, 0.0);
  for (std::size_t i = 0; i < bundle.rows.size(); ++i) {
    const double anchor = options.center ? by_grid[0][i] : 0.0;
    for (std::size_t g = 0; g < g_count; ++g) {
      bundle.curves[i * g_count + g] = by_grid[g][i] - anchor;
    }
  }
  return bundle;
}

CurveSeries Ale(const Predictor& model, const Dataset& data, const std::string& feature,
                std::size_t bins) {
  RequireRows(data);
  const std::size_t col = NumericFeature(data, feature, "ALE");
  const auto column = data.column(col);
  const Binning binning = BinFeature(column, bins);
  const std::size_t k = binning.counts.size();

  const RowBatch base = data.ToRows();
  RowBatch upper = base;
  RowBatch lower = base;
  for (std::size_t i = 0; i < base.n_rows(); ++i) {
    upper.at(i, col) = binning.edges[binning.bin_of_row[i] + 1];
    lower.at(i, col) = binning.edges[binning.bin_of_row[i]];
  }
  std::vector<double> hi;
  std::vector<double> lo;
  if (detail::CanParallelize(model)) {
    detail::ParallelFor(2, true, [&](std::size_t which) {
      (which == 0 ? hi : lo) = model.Predict(which == 0 ? upper : lower);
    });
  } else {
    hi = model.Predict(upper);
    lo = model.Predict(lower);
  }

  std::vector<double> local(k, 0.0);
  for (std::size_t i = 0; i < base.n_rows(); ++i) local[binning.bin_of_row[i]] += hi[i] - lo[i];

  CurveSeries series;
  series.kind = CurveKind::kAle;
  series.n_used = data.n_rows();
  series.values.assign(k + 1, 0.0);
  for (std::size_t b = 0; b < k; ++b) {
    series.values[b + 1] =
        series.values[b] + local[b] / static_cast<double>(binning.counts[b]);
  }
  double weighted = 0.0;
  for (std::size_t b = 0; b < k; ++b) {
    weighted += static_cast<double>(binning.counts[b]) * series.values[b + 1];
  }
  const double offset = weighted / static_cast<double>(data.n_rows());
  for (double& v : series.values) v -= offset;
  series.bin_counts = binning.counts;
  series.edges = binning.edges;
  series.axes.push_back(NumericAxis(data, col, binning.edges));
  return series;
}

CurveSeries MPlot(const Predictor& model, const Dataset& data, const std::string& feature,
                  std::size_t bins) {
  RequireRows(data);
  const std::size_t col = NumericFeature(data, feature, "M-plot");
  const Binning binning = BinFeature(data.column(col), bins);
  const std::size_t k = binning.counts.size();
  const auto predictions = PredictDataset(model, data);

  CurveSeries series;
  series.kind = CurveKind::kMPlot;
  series.n_used = data.n_rows();
  series.values.assign(k, 0.0);
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    series.values[binning.bin_of_row[i]] += predictions[i];
  }
  std::vector<double> mids(k);
  for (std::size_t b = 0; b < k; ++b) {
    series.values[b] /= static_cast<double>(binning.counts[b]);
    mids[b] = 0.5 * (binning.edges[b] + binning.edges[b + 1]);
  }
  series.bin_counts = binning.counts;
  series.edges = binning.edges;
  series.axes.push_back(NumericAxis(data, col, std::move(mids)));
  return series;
}

GroupedCurves GroupedCurve(const Predictor& model, const Dataset& data,
                           const std::string& feature, const std::string& group_by,
                           CurveKind kind, std::size_t grid_or_bins) {
  RequireRows(data);
  const std::size_t group_col = data.schema().IndexOf(group_by);
  const Feature& group = data.schema().feature(group_col);
  Require(group.is_categorical(), ErrorCode::kInvalidArgument,
          "group-by feature '" + group_by + "' must be categorical");
  Require(group_by != feature, ErrorCode::kInvalidArgument,
          "cannot group a curve by its own feature");

  GroupedCurves result;
  result.group_by = group_by;
  std::vector<GridAxis> shared_grid;
  if (kind == CurveKind::kPdp) {
    shared_grid.push_back(MakeGrid(data, data.schema().IndexOf(feature), grid_or_bins));
  }
  const auto column = data.column(group_col);
  for (std::size_t level = 0; level < group.levels.size(); ++level) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
      if (column[i] == static_cast<double>(level)) members.push_back(i);
    }
    if (members.empty()) {
      result.warnings.push_back("group '" + group.levels[level] + "' of '" + group_by +
                                "' has no rows; omitted");
      continue;
    }
    const Dataset part = data.SelectRows(members);
    CurveSeries series;
    switch (kind) {
      case CurveKind::kPdp: series = PdpOnGrid(model, part, shared_grid); break;
      case CurveKind::kAle: series = Ale(model, part, feature, grid_or_bins); break;
      case CurveKind::kMPlot: series = MPlot(model, part, feature, grid_or_bins); break;
    }
    result.curves.emplace_back(group.levels[level], std::move(series));
  }
  return result;
}

double CurveSlope(const CurveSeries& curve) {
  Require(curve.axes.size() == 1, ErrorCode::kInvalidArgument,
          "slope is defined for one-dimensional curves");
  const auto& x = curve.grid().values;
  const auto& y = curve.values;
  Require(x.size() == y.size() && x.size() >= 2, ErrorCode::kInvalidArgument,
          "slope needs at least two grid points");
  const double mx = Mean(x);
  const double my = Mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  Require(sxx > 0.0, ErrorCode::kDegenerate, "slope undefined on a single-valued grid");
  return sxy / sxx;
}

}  // namespace posthoc
