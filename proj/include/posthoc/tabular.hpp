// SPDX-License-Identifier: Apache-2.0
//
// Typed tabular data: feature schema, immutable column-major dataset, CSV
// ingestion and the sampling/binning helpers every explainer relies on.
//
// Categorical values are stored as dense level ids (0..L-1) in the same
// double-typed columns as numeric values, so a row is always a plain vector
// of doubles whose meaning is given by the schema.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace posthoc {

using RandomEngine = std::mt19937_64;

enum class FeatureKind { kNumeric, kCategorical };

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  // Level dictionary for categorical features; a level's id is its index.
  std::vector<std::string> levels;

  bool is_categorical() const { return kind == FeatureKind::kCategorical; }
  std::optional<std::size_t> LevelId(std::string_view label) const;

  static Feature Numeric(std::string name);
  static Feature Categorical(std::string name, std::vector<std::string> levels);

  bool operator==(const Feature&) const = default;
};

class FeatureSchema {
 public:
  FeatureSchema() = default;

  // Throws Error(kSchema) on duplicate names, empty level dictionaries or a
  // target/exposure/weight column that collides with a feature.
  explicit FeatureSchema(std::vector<Feature> features,
                         std::optional<std::string> target = std::nullopt,
                         std::optional<std::string> exposure = std::nullopt,
                         std::optional<std::string> weight = std::nullopt);

  // JSON document:
  //   {"features": [{"name": "age", "kind": "numeric"},
  //                 {"name": "fuel", "kind": "categorical",
  //                  "levels": ["Regular", "Diesel"]}],
  //    "target": "y", "exposure": "exposure", "weight": null}
  static FeatureSchema FromJsonText(std::string_view text);
  std::string ToJsonText() const;

  const std::vector<Feature>& features() const { return features_; }
  std::size_t size() const { return features_.size(); }
  const Feature& feature(std::size_t index) const { return features_.at(index); }

  std::optional<std::size_t> Find(std::string_view name) const;
  // Throws Error(kSchema) when absent.
  std::size_t IndexOf(std::string_view name) const;

  const std::optional<std::string>& target() const { return target_; }
  const std::optional<std::string>& exposure() const { return exposure_; }
  const std::optional<std::string>& weight() const { return weight_; }

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<Feature> features_;
  std::optional<std::string> target_;
  std::optional<std::string> exposure_;
  std::optional<std::string> weight_;
};

FeatureSchema LoadSchema(const std::string& path);

// Dense row-major block of feature rows, the unit exchanged with predictors.
class RowBatch {
 public:
  RowBatch() = default;
  RowBatch(std::size_t n_rows, std::size_t n_cols)
      : n_rows_(n_rows), n_cols_(n_cols), values_(n_rows * n_cols, 0.0) {}

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * n_cols_, n_cols_};
  }
  std::span<double> row(std::size_t i) {
    return {values_.data() + i * n_cols_, n_cols_};
  }
  double& at(std::size_t i, std::size_t j) { return values_[i * n_cols_ + j]; }
  double at(std::size_t i, std::size_t j) const {
    return values_[i * n_cols_ + j];
  }
  std::span<const double> values() const { return values_; }

  void AppendRow(std::span<const double> row);

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<double> values_;
};

// One value per schema feature: the instance whose prediction is explained.
struct Instance {
  std::vector<double> values;
};

// Throws Error(kSchema) when arity or categorical ids do not fit the schema.
void ValidateInstance(const FeatureSchema& schema, const Instance& x);

class Dataset {
 public:
  Dataset() = default;

  // Validates every invariant: equal column lengths, finite values,
  // categorical ids in range, positive exposures.
  static Dataset FromColumns(FeatureSchema schema,
                             std::vector<std::vector<double>> columns,
                             std::optional<std::vector<double>> target = {},
                             std::optional<std::vector<double>> exposure = {},
                             std::optional<std::vector<double>> weight = {});

  const FeatureSchema& schema() const { return schema_; }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_features() const { return columns_.size(); }

  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  std::span<const double> column(std::string_view name) const {
    return column(schema_.IndexOf(name));
  }
  double value(std::size_t row, std::size_t col) const {
    return columns_[col][row];
  }

  bool has_target() const { return target_.has_value(); }
  // Throws Error(kSchema) when no target is declared.
  std::span<const double> target() const;
  std::optional<std::span<const double>> exposure() const;
  std::optional<std::span<const double>> weight() const;

  Instance row(std::size_t i) const;
  void CopyRow(std::size_t i, std::span<double> out) const;

  RowBatch ToRows() const;
  // Rows in the given order (duplicates allowed).
  Dataset SelectRows(std::span<const std::size_t> indices) const;
  // Same rows with feature column `j` replaced.
  Dataset WithColumn(std::size_t j, std::vector<double> values) const;
  // Appends a feature column at the end of the schema.
  Dataset WithAppendedFeature(Feature feature, std::vector<double> values) const;

  // FNV-1a over the raw bytes of every column; used to prove immutability.
  std::uint64_t Checksum() const;

 private:
  FeatureSchema schema_;
  std::size_t n_rows_ = 0;
  std::vector<std::vector<double>> columns_;
  std::optional<std::vector<double>> target_;
  std::optional<std::vector<double>> exposure_;
  std::optional<std::vector<double>> weight_;
};

// ---------------------------------------------------------------------------
// CSV

enum class MissingPolicy { kReject, kImpute };

struct CsvOptions {
  char delimiter = ',';
  MissingPolicy missing = MissingPolicy::kReject;
};

struct CsvReport {
  std::size_t rows = 0;
  // Feature cells filled in under MissingPolicy::kImpute.
  std::size_t imputed_cells = 0;
};

// RFC-4180 input with a mandatory header. Every schema column must be
// present in the header; other columns are ignored. Missing cells (empty or
// "NA") are rejected or imputed (numeric median, categorical mode) for
// features; a missing target/exposure/weight is always an error.
Dataset ReadCsv(std::istream& in, const FeatureSchema& schema,
                const CsvOptions& options = {}, CsvReport* report = nullptr);
Dataset LoadCsv(const std::string& path, const FeatureSchema& schema,
                const CsvOptions& options = {}, CsvReport* report = nullptr);

// Writes features then target/exposure/weight. Reals use the shortest
// representation that parses back to the same bits.
void WriteCsv(const Dataset& data, std::ostream& out, char delimiter = ',');

// Shortest round-trip decimal form of `value`.
std::string FormatReal(double value);

// ---------------------------------------------------------------------------
// Sampling and binning

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

// Mean and sample standard deviation (n - 1 divisor) of a numeric feature.
Moments EmpiricalMoments(const Dataset& data, std::string_view feature);
Moments EmpiricalMoments(std::span<const double> values);

// Linear-interpolation quantile (order statistics at position p * (n - 1)) of
// an ascending sequence.
double SortedQuantile(std::span<const double> sorted, double p);

// Edges z_0 < ... < z_K with z_0 = min, z_K = max and interior edges at the
// i/k quantiles; duplicate edges are merged so K <= k.
std::vector<double> QuantileBins(const Dataset& data, std::string_view feature,
                                 std::size_t k);
std::vector<double> QuantileBins(std::span<const double> values, std::size_t k);

// Bin of `value` for the half-open bins [z_{b}, z_{b+1}) with the last bin
// closed. Values outside [z_0, z_K] are clamped to the first/last bin.
std::size_t BinIndex(std::span<const double> edges, double value);

// n rows drawn uniformly: without replacement when n <= n_rows, with
// replacement otherwise. Deterministic for a fixed seed.
Dataset SampleRows(const Dataset& data, std::size_t n, std::uint64_t seed);
std::vector<std::size_t> SampleRowIndices(std::size_t n_rows, std::size_t n,
                                          std::uint64_t seed);

struct Split {
  Dataset train;
  Dataset test;
};

// Shuffled split with round(fraction * n) training rows. Both parts must be
// non-empty.
Split TrainTestSplit(const Dataset& data, double train_fraction,
                     std::uint64_t seed);

// Adds a two-level categorical feature {below, above} encoding
// value >= threshold of a numeric feature; handy as a grouping variable.
Dataset AppendThresholdGroup(const Dataset& data, std::string_view feature,
                             double threshold, std::string name,
                             std::string below_label = "below",
                             std::string above_label = "above");

}  // namespace posthoc
