// SPDX-License-Identifier: Apache-2.0
#include "artifacts.hpp"

#include <sstream>

namespace posthoc::cli {
namespace {

std::string Quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

Json AxisJson(const GridAxis& axis) {
  Json j;
  j["feature"] = axis.feature;
  j["categorical"] = axis.categorical;
  if (axis.categorical) {
    j["grid"] = axis.labels;
  } else {
    j["grid"] = axis.values;
  }
  return j;
}

std::string AxisLabel(const GridAxis& axis, std::size_t g) {
  return axis.categorical ? Quote(axis.labels[g]) : FormatReal(axis.values[g]);
}

Json EntryJson(const InteractionEntry& entry) {
  Json j;
  if (entry.value) {
    j = ToJson(*entry.value);
  } else {
    j["h2"] = nullptr;
    j["undefined"] = entry.undefined_reason;
  }
  j["level_counts"] = entry.level_counts;
  return j;
}

}  // namespace

Json ToJson(const ImportanceTable& table) {
  Json j;
  j["method"] = "permutation_importance";
  j["loss"] = std::string(LossName(table.options.loss.kind));
  j["split"] = table.options.split;
  j["repeats"] = table.options.repeats;
  j["seed"] = table.options.seed;
  j["base_error"] = table.base_error;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"name", row.name}, {"mean", row.mean}, {"sd", row.sd},
                    {"ratios", row.ratios}});
  }
  j["rows"] = std::move(rows);
  return j;
}

Json ToJson(const CurveSeries& curve) {
  Json j;
  j["method"] = std::string(CurveKindName(curve.kind));
  Json features = Json::array();
  Json axes = Json::array();
  for (const auto& axis : curve.axes) {
    features.push_back(axis.feature);
    axes.push_back(AxisJson(axis));
  }
  j["features"] = std::move(features);
  j["axes"] = std::move(axes);
  j["values"] = curve.values;
  j["n_used"] = curve.n_used;
  if (!curve.edges.empty()) {
    j["metadata"] = {{"bins", curve.bin_counts.size()},
                     {"edges", curve.edges},
                     {"bin_counts", curve.bin_counts}};
  }
  return j;
}

Json ToJson(const IceBundle& bundle) {
  Json j;
  j["method"] = bundle.centered ? "c-ice" : "ice";
  j["feature"] = bundle.grid.feature;
  j["axis"] = AxisJson(bundle.grid);
  j["centered"] = bundle.centered;
  j["rows"] = bundle.rows;
  Json curves = Json::array();
  for (std::size_t i = 0; i < bundle.n_curves(); ++i) {
    const auto c = bundle.curve(i);
    curves.push_back(std::vector<double>(c.begin(), c.end()));
  }
  j["curves"] = std::move(curves);
  return j;
}

Json ToJson(const GroupedCurves& grouped) {
  Json j;
  j["group_by"] = grouped.group_by;
  Json groups = Json::array();
  for (const auto& [level, curve] : grouped.curves) {
    Json g = ToJson(curve);
    g["group"] = level;
    groups.push_back(std::move(g));
  }
  j["groups"] = std::move(groups);
  j["warnings"] = grouped.warnings;
  return j;
}

Json ToJson(const HValue& value) {
  Json j;
  j["h2"] = value.h2;
  j["clipped"] = value.clipped;
  if (value.bootstrap_sd) j["bootstrap_sd"] = *value.bootstrap_sd;
  return j;
}

Json ToJson(const InteractionMatrix& matrix) {
  Json j;
  j["method"] = "h_statistic";
  j["features"] = matrix.features;
  const std::size_t p = matrix.features.size();
  Json pairs = Json::array();
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) {
      Json e = EntryJson(matrix.at(a, b));
      e["j"] = matrix.features[a];
      e["k"] = matrix.features[b];
      pairs.push_back(std::move(e));
    }
  }
  j["pairwise"] = std::move(pairs);
  Json totals = Json::array();
  for (std::size_t a = 0; a < p; ++a) {
    Json e = EntryJson(matrix.total[a]);
    e["j"] = matrix.features[a];
    totals.push_back(std::move(e));
  }
  j["total"] = std::move(totals);
  j["subsample"] = {{"n", matrix.n_used},
                    {"subsampled", matrix.subsampled},
                    {"seed", matrix.options.seed}};
  j["warnings"] = matrix.warnings;
  return j;
}

Json ToJson(const Attribution& att) {
  Json j;
  j["method"] = std::string(AttributionMethodName(att.method));
  Json contributions = Json::array();
  for (std::size_t i = 0; i < att.features.size(); ++i) {
    Json c{{"feature", att.features[i]}, {"phi", att.contributions[i]}};
    if (!att.standard_errors.empty()) c["se"] = att.standard_errors[i];
    contributions.push_back(std::move(c));
  }
  j["feature_contributions"] = std::move(contributions);
  j["baseline"] = att.baseline;
  j["prediction"] = att.prediction;
  j["efficiency_gap"] = EfficiencyGap(att);
  Json diagnostics = Json::object();
  for (const auto& [key, value] : att.diagnostics) diagnostics[key] = value;
  for (const auto& [key, value] : att.notes) diagnostics[key] = value;
  j["diagnostics"] = std::move(diagnostics);
  return j;
}

Json ToJson(const EvaluateReport& report) {
  Json j;
  j["n_train"] = report.n_train;
  j["n_test"] = report.n_test;
  Json models = Json::array();
  for (const auto& m : report.models) {
    Json rows = Json::array();
    for (const auto& r : m.rows) {
      rows.push_back({{"metric", r.metric}, {"train", r.train}, {"test", r.test},
                      {"gain_train", r.gain_train}, {"gain_test", r.gain_test}});
    }
    models.push_back({{"model", m.model}, {"rows", std::move(rows)}});
  }
  j["models"] = std::move(models);
  return j;
}

std::string ToCsv(const ImportanceTable& table) {
  std::ostringstream out;
  out << "feature,mean,sd\n";
  for (const auto& row : table.rows) {
    out << Quote(row.name) << ',' << FormatReal(row.mean) << ',' << FormatReal(row.sd) << '\n';
  }
  return out.str();
}

std::string ToCsv(const CurveSeries& curve) {
  std::ostringstream out;
  if (curve.axes.size() == 2) {
    out << Quote(curve.axes[0].feature) << ',' << Quote(curve.axes[1].feature) << ",value\n";
    const std::size_t n1 = curve.axes[1].values.size();
    for (std::size_t g = 0; g < curve.values.size(); ++g) {
      out << AxisLabel(curve.axes[0], g / n1) << ',' << AxisLabel(curve.axes[1], g % n1) << ','
          << FormatReal(curve.values[g]) << '\n';
    }
    return out.str();
  }
  out << "grid,value\n";
  for (std::size_t g = 0; g < curve.values.size(); ++g) {
    out << AxisLabel(curve.grid(), g) << ',' << FormatReal(curve.values[g]) << '\n';
  }
  return out.str();
}

std::string ToCsv(const IceBundle& bundle) {
  std::ostringstream out;
  out << "row,grid,value\n";
  for (std::size_t i = 0; i < bundle.n_curves(); ++i) {
    const auto c = bundle.curve(i);
    for (std::size_t g = 0; g < c.size(); ++g) {
      out << bundle.rows[i] << ',' << AxisLabel(bundle.grid, g) << ',' << FormatReal(c[g])
          << '\n';
    }
  }
  return out.str();
}

std::string ToCsv(const GroupedCurves& grouped) {
  std::ostringstream out;
  out << "group,grid,value\n";
  for (const auto& [level, curve] : grouped.curves) {
    for (std::size_t g = 0; g < curve.values.size(); ++g) {
      out << Quote(level) << ',' << AxisLabel(curve.grid(), g) << ','
          << FormatReal(curve.values[g]) << '\n';
    }
  }
  return out.str();
}

std::string ToCsv(const InteractionMatrix& matrix) {
  std::ostringstream out;
  out << "j,k,H2\n";
  const std::size_t p = matrix.features.size();
  const auto cell = [](const InteractionEntry& e) {
    return e.value ? FormatReal(e.value->h2) : std::string("NA");
  };
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) {
      out << Quote(matrix.features[a]) << ',' << Quote(matrix.features[b]) << ','
          << cell(matrix.at(a, b)) << '\n';
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    out << Quote(matrix.features[a]) << ",*," << cell(matrix.total[a]) << '\n';
  }
  return out.str();
}

std::string ToCsv(const Attribution& att) {
  std::ostringstream out;
  out << "feature,phi\n";
  for (std::size_t i = 0; i < att.features.size(); ++i) {
    out << Quote(att.features[i]) << ',' << FormatReal(att.contributions[i]) << '\n';
  }
  return out.str();
}

std::string ToCsv(const EvaluateReport& report) {
  std::ostringstream out;
  out << "model,metric,train,test,gain_train,gain_test\n";
  for (const auto& m : report.models) {
    for (const auto& r : m.rows) {
      out << Quote(m.model) << ',' << r.metric << ',' << FormatReal(r.train) << ','
          << FormatReal(r.test) << ',' << FormatReal(r.gain_train) << ','
          << FormatReal(r.gain_test) << '\n';
    }
  }
  return out.str();
}

}  // namespace posthoc::cli
