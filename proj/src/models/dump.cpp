// SPDX-License-Identifier: Apache-2.0
#include "json.hpp"
#include "posthoc/error.hpp"
#include "posthoc/models.hpp"

namespace posthoc {
namespace {

using nlohmann::json;

json CommonFields(const DesignEncoding& encoding, double intercept,
                  std::span<const double> coefficients) {
  json doc;
  doc["schema"] = json::parse(encoding.schema().ToJsonText());
  doc["drop_first_level"] = encoding.drop_first_level();
  doc["columns"] = encoding.ColumnNames();
  doc["intercept"] = intercept;
  doc["coefficients"] = std::vector<double>(coefficients.begin(), coefficients.end());
  return doc;
}

}  // namespace

std::string ModelDumpJson(const FittedLinear& model) {
  json doc = CommonFields(model.encoding(), model.intercept(), model.coefficients());
  doc["kind"] = "linear";
  doc["ridge_lambda"] = model.ridge_lambda();
  return doc.dump(2);
}

std::string ModelDumpJson(const FittedGlm& model) {
  json doc = CommonFields(model.encoding(), model.intercept(), model.coefficients());
  doc["kind"] = "poisson_glm";
  doc["diagnostics"] = {{"deviance", model.diagnostics().deviance},
                        {"iterations", model.diagnostics().iterations},
                        {"converged", model.diagnostics().converged}};
  return doc.dump(2);
}

PredictorPtr LoadModelDump(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
    const FeatureSchema schema = FeatureSchema::FromJsonText(doc.at("schema").dump());
    DesignEncoding encoding(schema, doc.at("drop_first_level").get<bool>());
    const double intercept = doc.at("intercept").get<double>();
    auto coefficients = doc.at("coefficients").get<std::vector<double>>();
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "linear") {
      return std::make_shared<FittedLinear>(std::move(encoding), intercept,
                                            std::move(coefficients),
                                            doc.value("ridge_lambda", 0.0));
    }
    if (kind == "poisson_glm") {
      FittedGlm::Diagnostics diagnostics;
      if (doc.contains("diagnostics")) {
        diagnostics.deviance = doc["diagnostics"].value("deviance", 0.0);
        diagnostics.iterations = doc["diagnostics"].value("iterations", 0);
        diagnostics.converged = doc["diagnostics"].value("converged", true);
      }
      return std::make_shared<FittedGlm>(std::move(encoding), intercept,
                                         std::move(coefficients), diagnostics);
    }
    Fail(ErrorCode::kParse, "unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("model dump: ") + e.what());
  }
}

}  // namespace posthoc
