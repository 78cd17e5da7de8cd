// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "posthoc/error.hpp"
#include "posthoc/tabular.hpp"

namespace posthoc {

using nlohmann::json;

std::optional<std::size_t> Feature::LevelId(std::string_view label) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == label) return i;
  }
  return std::nullopt;
}

Feature Feature::Numeric(std::string name) {
  return Feature{std::move(name), FeatureKind::kNumeric, {}};
}

Feature Feature::Categorical(std::string name, std::vector<std::string> levels) {
  return Feature{std::move(name), FeatureKind::kCategorical, std::move(levels)};
}

FeatureSchema::FeatureSchema(std::vector<Feature> features,
                             std::optional<std::string> target,
                             std::optional<std::string> exposure,
                             std::optional<std::string> weight)
    : features_(std::move(features)),
      target_(std::move(target)),
      exposure_(std::move(exposure)),
      weight_(std::move(weight)) {
  std::set<std::string> names;
  for (const auto& f : features_) {
    Require(!f.name.empty(), ErrorCode::kSchema, "feature with empty name");
    Require(names.insert(f.name).second, ErrorCode::kSchema,
            "duplicate feature name '" + f.name + "'");
    if (f.is_categorical()) {
      Require(!f.levels.empty(), ErrorCode::kSchema,
              "categorical feature '" + f.name + "' has no levels");
      std::set<std::string> levels(f.levels.begin(), f.levels.end());
      Require(levels.size() == f.levels.size(), ErrorCode::kSchema,
              "categorical feature '" + f.name + "' has duplicate levels");
    } else {
      Require(f.levels.empty(), ErrorCode::kSchema,
              "numeric feature '" + f.name + "' declares levels");
    }
  }
  for (const auto* extra : {&target_, &exposure_, &weight_}) {
    if (!extra->has_value()) continue;
    Require(!(*extra)->empty(), ErrorCode::kSchema, "empty column name");
    Require(names.insert(**extra).second, ErrorCode::kSchema,
            "column '" + **extra + "' declared twice");
  }
}

std::optional<std::size_t> FeatureSchema::Find(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t FeatureSchema::IndexOf(std::string_view name) const {
  const auto index = Find(name);
  if (!index) Fail(ErrorCode::kSchema, "unknown feature '" + std::string(name) + "'");
  return *index;
}

FeatureSchema FeatureSchema::FromJsonText(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("schema JSON: ") + e.what());
  }
  Require(doc.is_object() && doc.contains("features") && doc["features"].is_array(),
          ErrorCode::kSchema, "schema JSON needs a \"features\" array");
  std::vector<Feature> features;
  for (const auto& entry : doc["features"]) {
    Require(entry.is_object() && entry.contains("name") && entry["name"].is_string(),
            ErrorCode::kSchema, "schema feature needs a \"name\"");
    Feature f;
    f.name = entry["name"].get<std::string>();
    const std::string kind = entry.value("kind", std::string("numeric"));
    if (kind == "numeric") {
      f.kind = FeatureKind::kNumeric;
    } else if (kind == "categorical") {
      f.kind = FeatureKind::kCategorical;
      Require(entry.contains("levels") && entry["levels"].is_array(),
              ErrorCode::kSchema,
              "categorical feature '" + f.name + "' needs \"levels\"");
      for (const auto& level : entry["levels"]) {
        Require(level.is_string(), ErrorCode::kSchema,
                "levels of '" + f.name + "' must be strings");
        f.levels.push_back(level.get<std::string>());
      }
    } else {
      Fail(ErrorCode::kSchema, "feature '" + f.name + "' has unknown kind '" + kind + "'");
    }
    features.push_back(std::move(f));
  }
  const auto optional_name = [&](const char* key) -> std::optional<std::string> {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    Require(doc[key].is_string(), ErrorCode::kSchema,
            std::string("\"") + key + "\" must be a string or null");
    return doc[key].get<std::string>();
  };
  return FeatureSchema(std::move(features), optional_name("target"),
                       optional_name("exposure"), optional_name("weight"));
}

std::string FeatureSchema::ToJsonText() const {
  json doc;
  doc["features"] = json::array();
  for (const auto& f : features_) {
    json entry{{"name", f.name}, {"kind", f.is_categorical() ? "categorical" : "numeric"}};
    if (f.is_categorical()) entry["levels"] = f.levels;
    doc["features"].push_back(std::move(entry));
  }
  const auto put = [&](const char* key, const std::optional<std::string>& v) {
    doc[key] = v ? json(*v) : json(nullptr);
  };
  put("target", target_);
  put("exposure", exposure_);
  put("weight", weight_);
  return doc.dump(2);
}

FeatureSchema LoadSchema(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kIo, "cannot open schema file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FeatureSchema::FromJsonText(buffer.str());
}

}  // namespace posthoc
