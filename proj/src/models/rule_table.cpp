// SPDX-License-Identifier: Apache-2.0
#include <sstream>

#include "json.hpp"
#include "posthoc/error.hpp"
#include "posthoc/models.hpp"

namespace posthoc {

using nlohmann::json;

RuleTable RuleTable::FromJsonText(std::string_view text) {
  RuleTable table;
  try {
    const json doc = json::parse(text);
    table.features = doc.at("features").get<std::vector<std::string>>();
    for (const auto& entry : doc.at("rules")) {
      Rule rule;
      for (const auto& [feature, level] : entry.at("when").items()) {
        rule.when.emplace_back(feature, level.get<std::string>());
      }
      rule.value = entry.at("value").get<double>();
      table.rules.push_back(std::move(rule));
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("rule table JSON: ") + e.what());
  }
  return table;
}

std::string RuleTable::ToJsonText() const {
  json doc;
  doc["features"] = features;
  doc["rules"] = json::array();
  for (const auto& rule : rules) {
    json when = json::object();
    for (const auto& [feature, level] : rule.when) when[feature] = level;
    doc["rules"].push_back({{"when", when}, {"value", rule.value}});
  }
  return doc.dump(2);
}

FeatureSchema ClaimCostSchema() {
  return FeatureSchema({Feature::Categorical("Age", {"Young", "Old"}),
                        Feature::Categorical("Power", {"High", "Low"})});
}

namespace {

RuleTable ClaimCostTable(double young_high) {
  RuleTable table;
  table.features = {"Age", "Power"};
  table.rules = {
      {{{"Age", "Young"}, {"Power", "High"}}, young_high},
      {{{"Age", "Young"}, {"Power", "Low"}}, 200.0},
      {{{"Age", "Old"}, {"Power", "High"}}, 250.0},
      {{{"Age", "Old"}, {"Power", "Low"}}, 150.0},
  };
  return table;
}

}  // namespace

RuleTable InteractionRuleTable() { return ClaimCostTable(400.0); }
RuleTable AdditiveRuleTable() { return ClaimCostTable(300.0); }

RuleTablePredictor::RuleTablePredictor(const RuleTable& table, const FeatureSchema& schema)
    : rule_count_(table.rules.size()) {
  Require(!table.features.empty(), ErrorCode::kSchema, "rule table lists no features");
  std::size_t cell_count = 1;
  for (const auto& name : table.features) {
    const std::size_t j = schema.IndexOf(name);
    const Feature& f = schema.feature(j);
    Require(f.is_categorical(), ErrorCode::kSchema,
            "rule table feature '" + name + "' must be categorical");
    columns_.push_back(j);
    radix_.push_back(f.levels.size());
    cell_count *= f.levels.size();
  }

  // Resolve every rule to (position in table.features -> level id).
  std::vector<std::vector<std::optional<std::size_t>>> resolved;
  for (const auto& rule : table.rules) {
    std::vector<std::optional<std::size_t>> levels(table.features.size());
    for (const auto& [feature, label] : rule.when) {
      std::optional<std::size_t> position;
      for (std::size_t k = 0; k < table.features.size(); ++k) {
        if (table.features[k] == feature) position = k;
      }
      Require(position.has_value(), ErrorCode::kSchema,
              "rule condition on '" + feature + "' which the table does not list");
      const auto id = schema.feature(columns_[*position]).LevelId(label);
      Require(id.has_value(), ErrorCode::kSchema,
              "rule condition uses unknown level '" + label + "' of '" + feature + "'");
      levels[*position] = id;
    }
    resolved.push_back(std::move(levels));
  }

  cells_.assign(cell_count, 0.0);
  std::vector<std::size_t> combo(table.features.size(), 0);
  for (std::size_t cell = 0; cell < cell_count; ++cell) {
    std::size_t rest = cell;
    for (std::size_t k = table.features.size(); k-- > 0;) {
      combo[k] = rest % radix_[k];
      rest /= radix_[k];
    }
    std::size_t matches = 0;
    for (std::size_t r = 0; r < resolved.size(); ++r) {
      bool ok = true;
      for (std::size_t k = 0; k < combo.size() && ok; ++k) {
        ok = !resolved[r][k] || *resolved[r][k] == combo[k];
      }
      if (ok) {
        ++matches;
        cells_[cell] = table.rules[r].value;
      }
    }
    if (matches != 1) {
      std::ostringstream what;
      what << (matches == 0 ? "uncovered" : "ambiguous") << " combination (";
      for (std::size_t k = 0; k < combo.size(); ++k) {
        if (k > 0) what << ", ";
        what << table.features[k] << "="
             << schema.feature(columns_[k]).levels[combo[k]];
      }
      what << ") in rule table";
      Fail(ErrorCode::kSchema, what.str());
    }
  }
}

std::vector<double> RuleTablePredictor::Predict(const RowBatch& rows) const {
  std::vector<double> out(rows.n_rows());
  for (std::size_t i = 0; i < rows.n_rows(); ++i) {
    const auto row = rows.row(i);
    std::size_t cell = 0;
    for (std::size_t k = 0; k < columns_.size(); ++k) {
      cell = cell * radix_[k] + static_cast<std::size_t>(row[columns_[k]]);
    }
    out[i] = cells_[cell];
  }
  return out;
}

std::string RuleTablePredictor::description() const {
  return "rule table (" + std::to_string(rule_count_) + " rules, " +
         std::to_string(cells_.size()) + " cells)";
}

}  // namespace posthoc
