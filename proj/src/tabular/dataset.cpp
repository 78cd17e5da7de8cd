// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstring>

#include "posthoc/error.hpp"
#include "posthoc/tabular.hpp"

namespace posthoc {
namespace {

void CheckFiniteColumn(std::span<const double> values, const std::string& name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    Require(std::isfinite(values[i]), ErrorCode::kSchema,
            "non-finite value in column '" + name + "' at row " + std::to_string(i));
  }
}

bool IsValidLevel(double value, std::size_t level_count) {
  return value >= 0.0 && value == std::floor(value) &&
         value < static_cast<double>(level_count);
}

}  // namespace

void RowBatch::AppendRow(std::span<const double> row) {
  if (n_rows_ == 0 && n_cols_ == 0) n_cols_ = row.size();
  Require(row.size() == n_cols_, ErrorCode::kInvalidArgument,
          "row width does not match batch width");
  values_.insert(values_.end(), row.begin(), row.end());
  ++n_rows_;
}

void ValidateInstance(const FeatureSchema& schema, const Instance& x) {
  Require(x.values.size() == schema.size(), ErrorCode::kSchema,
          "instance has " + std::to_string(x.values.size()) + " values, schema has " +
              std::to_string(schema.size()) + " features");
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const Feature& f = schema.feature(j);
    Require(std::isfinite(x.values[j]), ErrorCode::kSchema,
            "instance value for '" + f.name + "' is not finite");
    if (f.is_categorical()) {
      Require(IsValidLevel(x.values[j], f.levels.size()), ErrorCode::kSchema,
              "instance value for '" + f.name + "' is not a level id");
    }
  }
}

Dataset Dataset::FromColumns(FeatureSchema schema,
                             std::vector<std::vector<double>> columns,
                             std::optional<std::vector<double>> target,
                             std::optional<std::vector<double>> exposure,
                             std::optional<std::vector<double>> weight) {
  Require(columns.size() == schema.size(), ErrorCode::kSchema,
          "dataset has " + std::to_string(columns.size()) + " columns, schema has " +
              std::to_string(schema.size()) + " features");
  Require(target.has_value() == schema.target().has_value(), ErrorCode::kSchema,
          "target column presence does not match the schema");
  Require(exposure.has_value() == schema.exposure().has_value(), ErrorCode::kSchema,
          "exposure column presence does not match the schema");
  Require(weight.has_value() == schema.weight().has_value(), ErrorCode::kSchema,
          "weight column presence does not match the schema");

  Dataset data;
  data.n_rows_ = columns.empty() ? (target ? target->size() : 0) : columns[0].size();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const Feature& f = schema.feature(j);
    Require(columns[j].size() == data.n_rows_, ErrorCode::kSchema,
            "column '" + f.name + "' has a different length");
    CheckFiniteColumn(columns[j], f.name);
    if (f.is_categorical()) {
      for (std::size_t i = 0; i < data.n_rows_; ++i) {
        Require(IsValidLevel(columns[j][i], f.levels.size()), ErrorCode::kSchema,
                "column '" + f.name + "' row " + std::to_string(i) +
                    " is not a valid level id");
      }
    }
  }
  const auto check_extra = [&](const std::optional<std::vector<double>>& col,
                               const std::optional<std::string>& name) {
    if (!col) return;
    Require(col->size() == data.n_rows_, ErrorCode::kSchema,
            "column '" + *name + "' has a different length");
    CheckFiniteColumn(*col, *name);
  };
  check_extra(target, schema.target());
  check_extra(exposure, schema.exposure());
  check_extra(weight, schema.weight());
  if (exposure) {
    for (std::size_t i = 0; i < exposure->size(); ++i) {
      Require((*exposure)[i] > 0.0, ErrorCode::kSchema,
              "non-positive exposure at row " + std::to_string(i));
    }
  }
  if (weight) {
    for (std::size_t i = 0; i < weight->size(); ++i) {
      Require((*weight)[i] >= 0.0, ErrorCode::kSchema,
              "negative weight at row " + std::to_string(i));
    }
  }
  data.schema_ = std::move(schema);
  data.columns_ = std::move(columns);
  data.target_ = std::move(target);
  data.exposure_ = std::move(exposure);
  data.weight_ = std::move(weight);
  return data;
}

std::span<const double> Dataset::target() const {
  Require(target_.has_value(), ErrorCode::kSchema, "dataset has no target column");
  return *target_;
}

std::optional<std::span<const double>> Dataset::exposure() const {
  if (!exposure_) return std::nullopt;
  return std::span<const double>(*exposure_);
}

std::optional<std::span<const double>> Dataset::weight() const {
  if (!weight_) return std::nullopt;
  return std::span<const double>(*weight_);
}

Instance Dataset::row(std::size_t i) const {
  Instance x;
  x.values.resize(columns_.size());
  CopyRow(i, x.values);
  return x;
}

void Dataset::CopyRow(std::size_t i, std::span<double> out) const {
  for (std::size_t j = 0; j < columns_.size(); ++j) out[j] = columns_[j][i];
}

RowBatch Dataset::ToRows() const {
  RowBatch rows(n_rows_, columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& col = columns_[j];
    for (std::size_t i = 0; i < n_rows_; ++i) rows.at(i, j) = col[i];
  }
  return rows;
}

Dataset Dataset::SelectRows(std::span<const std::size_t> indices) const {
  const auto pick = [&](const std::vector<double>& col) {
    std::vector<double> out(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) out[i] = col.at(indices[i]);
    return out;
  };
  const auto pick_optional = [&](const std::optional<std::vector<double>>& col)
      -> std::optional<std::vector<double>> {
    if (!col) return std::nullopt;
    return pick(*col);
  };
  Dataset out;
  out.schema_ = schema_;
  out.n_rows_ = indices.size();
  out.columns_.reserve(columns_.size());
  for (const auto& col : columns_) out.columns_.push_back(pick(col));
  out.target_ = pick_optional(target_);
  out.exposure_ = pick_optional(exposure_);
  out.weight_ = pick_optional(weight_);
  return out;
}

Dataset Dataset::WithColumn(std::size_t j, std::vector<double> values) const {
  auto columns = columns_;
  columns.at(j) = std::move(values);
  return FromColumns(schema_, std::move(columns), target_, exposure_, weight_);
}

Dataset Dataset::WithAppendedFeature(Feature feature,
                                     std::vector<double> values) const {
  auto features = schema_.features();
  features.push_back(std::move(feature));
  FeatureSchema schema(std::move(features), schema_.target(), schema_.exposure(),
                       schema_.weight());
  auto columns = columns_;
  columns.push_back(std::move(values));
  return FromColumns(std::move(schema), std::move(columns), target_, exposure_,
                     weight_);
}

std::uint64_t Dataset::Checksum() const {
  std::uint64_t hash = 1469598103934665603ULL;
  const auto mix = [&hash](const std::vector<double>& col) {
    for (double v : col) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      for (int b = 0; b < 8; ++b) {
        hash ^= (bits >> (8 * b)) & 0xffU;
        hash *= 1099511628211ULL;
      }
    }
  };
  for (const auto& col : columns_) mix(col);
  if (target_) mix(*target_);
  if (exposure_) mix(*exposure_);
  if (weight_) mix(*weight_);
  return hash;
}

}  // namespace posthoc
