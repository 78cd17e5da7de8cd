// SPDX-License-Identifier: Apache-2.0
//
// Dataset-level explainers: permutation importance, partial dependence, ICE,
// accumulated local effects, M-plots and grouped curves.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "posthoc/metrics.hpp"
#include "posthoc/models.hpp"
#include "posthoc/tabular.hpp"

namespace posthoc {

// ---------------------------------------------------------------------------
// Permutation feature importance

struct FeatureGroup {
  std::string name;
  std::vector<std::string> features;
};

struct ImportanceOptions {
  LossSpec loss;
  // Empty: one group per feature. Features in a group share one permutation.
  std::vector<FeatureGroup> groups;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  // Label recorded in the table ("train" or "test"); the caller passes the
  // matching part of the data.
  std::string split = "train";
  // Score each level of a categorical feature separately by permuting its
  // indicator column alone. Ignored for explicit groups.
  bool per_modality = false;
};

struct ImportanceRow {
  std::string name;
  std::vector<double> ratios;  // err_permuted / err_base, one per repeat
  double mean = 0.0;
  double sd = 0.0;  // sample sd over repeats (0 with a single repeat)
};

struct ImportanceTable {
  std::vector<ImportanceRow> rows;  // sorted by descending mean ratio
  double base_error = 0.0;
  ImportanceOptions options;
};

// Throws Error(kDegenerate) when the base error is zero.
ImportanceTable PermutationImportance(const Predictor& model, const Dataset& data,
                                      const ImportanceOptions& options);

// ---------------------------------------------------------------------------
// Curves

enum class CurveKind { kPdp, kAle, kMPlot };

std::string_view CurveKindName(CurveKind kind);

struct GridAxis {
  std::string feature;
  bool categorical = false;
  std::vector<double> values;       // grid values (level ids when categorical)
  std::vector<std::string> labels;  // level labels, categorical only
};

struct CurveSeries {
  CurveKind kind = CurveKind::kPdp;
  std::vector<GridAxis> axes;  // one axis, or two for a 2-D PDP
  // One value per grid point; row-major over (axes[0], axes[1]) in 2-D.
  std::vector<double> values;
  std::size_t n_used = 0;
  // ALE and M-plot: rows per bin (bin k spans grid[k]..grid[k+1] for ALE).
  std::vector<std::size_t> bin_counts;
  // ALE and M-plot: bin edges after merging empty bins.
  std::vector<double> edges;

  const GridAxis& grid() const { return axes.front(); }
};

// Grid for one feature: every level for a categorical feature; for a numeric
// feature all unique values when there are at most `grid_size`, otherwise
// `grid_size` equi-quantile points from min to max (duplicates merged).
GridAxis MakeGrid(const Dataset& data, std::size_t feature, std::size_t grid_size);

// Partial dependence (1 or 2 features): value at grid point v is the mean
// prediction over all rows with the feature(s) set to v.
CurveSeries Pdp(const Predictor& model, const Dataset& data,
                std::span<const std::string> features, std::size_t grid_size = 20);
CurveSeries Pdp(const Predictor& model, const Dataset& data, const std::string& feature,
                std::size_t grid_size = 20);
// Same, on explicit axes.
CurveSeries PdpOnGrid(const Predictor& model, const Dataset& data,
                      std::vector<GridAxis> axes);

struct IceOptions {
  std::size_t grid_size = 20;
  bool center = false;
  std::size_t max_curves = 1000;
  std::uint64_t seed = 0;
};

struct IceBundle {
  GridAxis grid;
  std::vector<std::size_t> rows;  // dataset rows behind each curve
  std::vector<double> curves;     // rows.size() x grid size, row-major
  bool centered = false;

  std::size_t n_curves() const { return rows.size(); }
  std::span<const double> curve(std::size_t i) const {
    return {curves.data() + i * grid.values.size(), grid.values.size()};
  }
};

// One curve per row (rows subsampled with the seed above max_curves). With
// center = true each curve has its leftmost value subtracted.
IceBundle Ice(const Predictor& model, const Dataset& data, const std::string& feature,
              const IceOptions& options = {});

// Accumulated local effects on quantile bins, centred so that the
// row-weighted mean of the curve (each row at its bin's right edge) is zero.
// Grid = bin edges.
CurveSeries Ale(const Predictor& model, const Dataset& data, const std::string& feature,
                std::size_t bins = 20);

// Mean prediction of the rows falling in each quantile bin; grid = bin
// midpoints.
CurveSeries MPlot(const Predictor& model, const Dataset& data, const std::string& feature,
                  std::size_t bins = 20);

struct GroupedCurves {
  std::string group_by;
  std::vector<std::pair<std::string, CurveSeries>> curves;  // schema level order
  std::vector<std::string> warnings;
};

// The chosen curve computed separately on each level of a categorical
// feature. PDP groups share the grid built from the full data. Levels absent
// from the data are omitted with a warning.
GroupedCurves GroupedCurve(const Predictor& model, const Dataset& data,
                           const std::string& feature, const std::string& group_by,
                           CurveKind kind, std::size_t grid_or_bins = 20);

// Least-squares slope of a 1-D curve's values against its grid.
double CurveSlope(const CurveSeries& curve);

}  // namespace posthoc
