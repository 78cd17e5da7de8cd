// SPDX-License-Identifier: Apache-2.0
//
// JSON and CSV renderings of explainer results.
#pragma once

#include <string>

#include "json.hpp"
#include "posthoc/cli.hpp"
#include "posthoc/global.hpp"
#include "posthoc/interactions.hpp"
#include "posthoc/local.hpp"

namespace posthoc::cli {

using Json = nlohmann::ordered_json;

Json ToJson(const ImportanceTable& table);
Json ToJson(const CurveSeries& curve);
Json ToJson(const IceBundle& bundle);
Json ToJson(const GroupedCurves& grouped);
Json ToJson(const HValue& value);
Json ToJson(const InteractionMatrix& matrix);
Json ToJson(const Attribution& attribution);
Json ToJson(const EvaluateReport& report);

std::string ToCsv(const ImportanceTable& table);
std::string ToCsv(const CurveSeries& curve);
std::string ToCsv(const IceBundle& bundle);
std::string ToCsv(const GroupedCurves& grouped);
std::string ToCsv(const InteractionMatrix& matrix);
std::string ToCsv(const Attribution& attribution);
std::string ToCsv(const EvaluateReport& report);

}  // namespace posthoc::cli
