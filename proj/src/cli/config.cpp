// SPDX-License-Identifier: Apache-2.0
#include "json.hpp"
#include "posthoc/cli.hpp"
#include "posthoc/error.hpp"

namespace posthoc::cli {

using Json = nlohmann::ordered_json;

std::string RunConfig::ToJsonText() const {
  Json j;
  j["command"] = command;
  j["demo"] = demo;
  j["data"] = data;
  j["schema"] = schema;
  j["model"] = model;
  j["batch"] = batch;
  j["timeout"] = timeout;
  j["features"] = features;
  j["group_by"] = group_by;
  j["groups"] = groups;
  j["grid"] = grid;
  j["bins"] = bins;
  j["n_sim"] = n_sim;
  j["kernel"] = kernel;
  j["lambda"] = lambda;
  j["M"] = M;
  j["repeats"] = repeats;
  j["subsample"] = subsample;
  j["seed"] = seed;
  j["split"] = split ? Json(*split) : Json(nullptr);
  j["part"] = part;
  j["loss"] = loss;
  j["metrics"] = metrics;
  j["center"] = center;
  j["max_curves"] = max_curves;
  j["per_modality"] = per_modality;
  j["k_features"] = k_features ? Json(*k_features) : Json(nullptr);
  j["background"] = background;
  j["row"] = row;
  j["bootstrap"] = bootstrap;
  j["n"] = n;
  j["missing"] = missing;
  j["delimiter"] = delimiter;
  j["out"] = out;
  j["format"] = format;
  return j.dump(2);
}

RunConfig RunConfig::FromJsonText(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("run config: ") + e.what());
  }
  // Artifacts wrap the config; accept both the wrapper and a bare config.
  if (j.contains("config")) j = j.at("config");
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.demo = j.value("demo", c.demo);
    c.data = j.value("data", c.data);
    c.schema = j.value("schema", c.schema);
    c.model = j.value("model", c.model);
    c.batch = j.value("batch", c.batch);
    c.timeout = j.value("timeout", c.timeout);
    c.features = j.value("features", c.features);
    c.group_by = j.value("group_by", c.group_by);
    c.groups = j.value("groups", c.groups);
    c.grid = j.value("grid", c.grid);
    c.bins = j.value("bins", c.bins);
    c.n_sim = j.value("n_sim", c.n_sim);
    c.kernel = j.value("kernel", c.kernel);
    c.lambda = j.value("lambda", c.lambda);
    c.M = j.value("M", c.M);
    c.repeats = j.value("repeats", c.repeats);
    c.subsample = j.value("subsample", c.subsample);
    c.seed = j.value("seed", c.seed);
    if (j.contains("split") && !j.at("split").is_null()) c.split = j.at("split").get<double>();
    c.part = j.value("part", c.part);
    c.loss = j.value("loss", c.loss);
    c.metrics = j.value("metrics", c.metrics);
    c.center = j.value("center", c.center);
    c.max_curves = j.value("max_curves", c.max_curves);
    c.per_modality = j.value("per_modality", c.per_modality);
    if (j.contains("k_features") && !j.at("k_features").is_null()) {
      c.k_features = j.at("k_features").get<std::size_t>();
    }
    c.background = j.value("background", c.background);
    c.row = j.value("row", c.row);
    c.bootstrap = j.value("bootstrap", c.bootstrap);
    c.n = j.value("n", c.n);
    c.missing = j.value("missing", c.missing);
    c.delimiter = j.value("delimiter", c.delimiter);
    c.out = j.value("out", c.out);
    c.format = j.value("format", c.format);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("run config: ") + e.what());
  }
  return c;
}

}  // namespace posthoc::cli
