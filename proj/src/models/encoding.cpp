// SPDX-License-Identifier: Apache-2.0
#include "posthoc/error.hpp"
#include "posthoc/models.hpp"

namespace posthoc {

DesignEncoding::DesignEncoding(const FeatureSchema& schema, bool drop_first_level)
    : schema_(schema), drop_first_level_(drop_first_level) {
  slots_.reserve(schema.size());
  for (const auto& f : schema.features()) {
    Slot slot;
    slot.offset = width_;
    slot.count = f.is_categorical()
                     ? f.levels.size() - (drop_first_level ? 1 : 0)
                     : 1;
    width_ += slot.count;
    slots_.push_back(slot);
  }
}

void DesignEncoding::Encode(std::span<const double> row, std::span<double> out) const {
  for (std::size_t j = 0; j < slots_.size(); ++j) {
    const Slot& slot = slots_[j];
    if (!schema_.feature(j).is_categorical()) {
      out[slot.offset] = row[j];
      continue;
    }
    for (std::size_t c = 0; c < slot.count; ++c) out[slot.offset + c] = 0.0;
    auto level = static_cast<std::size_t>(row[j]);
    if (drop_first_level_) {
      if (level == 0) continue;
      --level;
    }
    out[slot.offset + level] = 1.0;
  }
}

RowBatch DesignEncoding::EncodeBatch(const RowBatch& rows) const {
  Require(rows.n_cols() == schema_.size(), ErrorCode::kSchema,
          "rows have " + std::to_string(rows.n_cols()) + " columns, schema has " +
              std::to_string(schema_.size()));
  RowBatch out(rows.n_rows(), width_);
  for (std::size_t i = 0; i < rows.n_rows(); ++i) Encode(rows.row(i), out.row(i));
  return out;
}

std::vector<std::string> DesignEncoding::ColumnNames() const {
  std::vector<std::string> names;
  names.reserve(width_);
  for (const auto& f : schema_.features()) {
    if (!f.is_categorical()) {
      names.push_back(f.name);
      continue;
    }
    for (std::size_t l = drop_first_level_ ? 1 : 0; l < f.levels.size(); ++l) {
      names.push_back(f.name + "=" + f.levels[l]);
    }
  }
  return names;
}

std::pair<std::size_t, std::size_t> DesignEncoding::ColumnsOf(std::size_t feature) const {
  const Slot& slot = slots_.at(feature);
  return {slot.offset, slot.count};
}

}  // namespace posthoc
