// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>
#include <cmath>

#include "posthoc/error.hpp"
#include "posthoc/local.hpp"
#include "posthoc/simd/kernels.hpp"

namespace posthoc {
namespace {

void CheckInstance(const Dataset& data, const Instance& x) {
  ValidateInstance(data.schema(), x);
  Require(data.n_rows() > 0, ErrorCode::kDegenerate, "reference data is empty");
}

std::vector<std::size_t> NumericColumns(const FeatureSchema& schema) {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (!schema.feature(j).is_categorical()) cols.push_back(j);
  }
  return cols;
}

}  // namespace

Neighborhood LimeSampleNeighborhood(const Dataset& data, const Instance& x, std::size_t n_sim,
                                    std::uint64_t seed) {
  CheckInstance(data, x);
  const FeatureSchema& schema = data.schema();
  const std::size_t p = schema.size();
  Require(n_sim >= p + 2, ErrorCode::kInvalidArgument,
          "n_sim must be at least p + 2 = " + std::to_string(p + 2));
  Require(data.n_rows() >= 2, ErrorCode::kDegenerate,
          "LIME sampling needs at least 2 reference rows");

  std::vector<std::normal_distribution<double>> normals(p);
  std::vector<std::discrete_distribution<std::size_t>> levels(p);
  std::vector<double> constant(p, 0.0);
  std::vector<bool> is_constant(p, false);
  for (std::size_t j = 0; j < p; ++j) {
    const Feature& f = schema.feature(j);
    if (f.is_categorical()) {
      std::vector<double> counts(f.levels.size(), 0.0);
      for (double v : data.column(j)) counts[static_cast<std::size_t>(v)] += 1.0;
      levels[j] = std::discrete_distribution<std::size_t>(counts.begin(), counts.end());
    } else {
      const Moments m = EmpiricalMoments(data.column(j));
      if (m.sd > 0.0) {
        normals[j] = std::normal_distribution<double>(m.mean, m.sd);
      } else {
        is_constant[j] = true;
        constant[j] = m.mean;
      }
    }
  }

  Neighborhood hood;
  hood.provenance = NeighborhoodKind::kLimeGaussian;
  hood.rows = RowBatch(n_sim, p);
  hood.weights.assign(n_sim, 1.0);
  RandomEngine rng(seed);
  for (std::size_t i = 0; i < n_sim; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double value;
      if (schema.feature(j).is_categorical()) {
        value = static_cast<double>(levels[j](rng));
      } else if (is_constant[j]) {
        value = constant[j];
      } else {
        value = normals[j](rng);
      }
      hood.rows.at(i, j) = value;
    }
  }
  return hood;
}

Neighborhood LiveNeighborhood(const Dataset& data, const Instance& x, std::size_t n_sim,
                              std::uint64_t seed) {
  CheckInstance(data, x);
  Require(n_sim >= 1, ErrorCode::kInvalidArgument, "n_sim must be >= 1");
  const std::size_t p = data.n_features();
  Neighborhood hood;
  hood.provenance = NeighborhoodKind::kLive;
  hood.rows = RowBatch(n_sim, p);
  hood.weights.assign(n_sim, 1.0);
  RandomEngine rng(seed);
  std::uniform_int_distribution<std::size_t> pick_feature(0, p - 1);
  std::uniform_int_distribution<std::size_t> pick_row(0, data.n_rows() - 1);
  for (std::size_t i = 0; i < n_sim; ++i) {
    auto row = hood.rows.row(i);
    std::copy(x.values.begin(), x.values.end(), row.begin());
    const std::size_t j = pick_feature(rng);
    row[j] = data.value(pick_row(rng), j);
  }
  return hood;
}

KernelSpec KernelSpec::Parse(std::string_view text) {
  KernelSpec spec;
  if (text == "gower") return spec;
  if (text == "rbf") {
    spec.kind = Kind::kRbf;
    return spec;
  }
  if (text.starts_with("rbf:")) {
    spec.kind = Kind::kRbf;
    const std::string_view number = text.substr(4);
    double width = 0.0;
    const auto [end, ec] = std::from_chars(number.data(), number.data() + number.size(), width);
    Require(ec == std::errc() && end == number.data() + number.size(),
            ErrorCode::kInvalidArgument, "bad RBF width '" + std::string(number) + "'");
    Require(width > 0.0 && std::isfinite(width), ErrorCode::kInvalidArgument,
            "RBF width must be positive");
    spec.width = width;
    return spec;
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown kernel '" + std::string(text) + "' (expected gower, rbf or rbf:WIDTH)");
}

std::string KernelSpec::ToString() const {
  if (kind == Kind::kGower) return "gower";
  return width ? "rbf:" + FormatReal(*width) : "rbf";
}

std::vector<double> KernelWeights(const Dataset& reference, const RowBatch& rows,
                                  const Instance& x, const KernelSpec& kernel) {
  const FeatureSchema& schema = reference.schema();
  ValidateInstance(schema, x);
  Require(rows.n_cols() == schema.size(), ErrorCode::kSchema,
          "neighbourhood rows do not match the schema");
  const auto numeric = NumericColumns(schema);
  const std::size_t p = schema.size();

  // Per numeric feature: multiplier applied to |delta| (1/sd or 1/range).
  std::vector<double> scale(numeric.size(), 0.0);
  for (std::size_t c = 0; c < numeric.size(); ++c) {
    const auto column = reference.column(numeric[c]);
    double s = 0.0;
    if (kernel.kind == KernelSpec::Kind::kRbf) {
      s = reference.n_rows() >= 2 ? EmpiricalMoments(column).sd : 0.0;
    } else {
      const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
      s = *hi - *lo;
    }
    scale[c] = s > 0.0 ? 1.0 / s : 0.0;
  }

  double width = 0.0;
  if (kernel.kind == KernelSpec::Kind::kRbf) {
    width = kernel.width.value_or(0.75 * std::sqrt(static_cast<double>(p)));
    Require(width > 0.0, ErrorCode::kInvalidArgument, "RBF width must be positive");
  }

  std::vector<double> xs(numeric.size());
  for (std::size_t c = 0; c < numeric.size(); ++c) xs[c] = x.values[numeric[c]];
  std::vector<double> rs(numeric.size());
  std::vector<double> weights(rows.n_rows());
  for (std::size_t i = 0; i < rows.n_rows(); ++i) {
    const auto row = rows.row(i);
    double mismatches = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (schema.feature(j).is_categorical() && row[j] != x.values[j]) mismatches += 1.0;
    }
    for (std::size_t c = 0; c < numeric.size(); ++c) rs[c] = row[numeric[c]];
    if (kernel.kind == KernelSpec::Kind::kRbf) {
      const double d2 = simd::ScaledSqDist(rs, xs, scale) + mismatches;
      weights[i] = std::exp(-d2 / (2.0 * width * width));
    } else {
      double total = mismatches;
      for (std::size_t c = 0; c < numeric.size(); ++c) {
        total += std::min(1.0, std::abs(rs[c] - xs[c]) * scale[c]);
      }
      weights[i] = 1.0 - total / static_cast<double>(p);
    }
  }
  return weights;
}

}  // namespace posthoc
