// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "artifacts.hpp"
#include "posthoc/error.hpp"

namespace posthoc::cli {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

bool StartsWith(const std::string& text, std::string_view prefix) {
  return text.rfind(prefix, 0) == 0;
}

FeatureSchema SyntheticSchema() {
  return FeatureSchema({Feature::Numeric("x1"), Feature::Numeric("x2"), Feature::Numeric("x3")},
                       "y");
}

FeatureSchema ResolveSchema(const RunConfig& c) {
  if (!c.schema.empty()) return LoadSchema(c.schema);
  if (StartsWith(c.model, "rule-table:")) return ClaimCostSchema();
  if (c.model == "synthetic") return SyntheticSchema();
  throw UsageError("--schema is required for model '" + c.model + "'");
}

RuleTable ResolveRuleTable(const std::string& which) {
  if (which == "table1") return InteractionRuleTable();
  if (which == "table2") return AdditiveRuleTable();
  return RuleTable::FromJsonText(ReadFile(which));
}

struct FittedModel {
  PredictorPtr predictor;
  std::string dump;  // coefficient dump for fitted reference models
};

FittedModel BuildModel(const RunConfig& c, const FeatureSchema& schema, const Dataset* fit_data) {
  const std::string& spec = c.model;
  Require(!spec.empty(), ErrorCode::kInvalidArgument, "no model given");
  const auto need_data = [&] {
    if (fit_data == nullptr) throw UsageError("model '" + spec + "' is fitted and needs --data");
    return fit_data;
  };
  if (spec == "glm") {
    auto glm = std::make_shared<FittedGlm>(FitPoissonGlm(*need_data()));
    return {glm, ModelDumpJson(*glm)};
  }
  if (spec == "ridge" || StartsWith(spec, "ridge:")) {
    double lambda = 0.0;
    if (spec != "ridge") {
      try {
        std::size_t used = 0;
        lambda = std::stod(spec.substr(6), &used);
        if (used != spec.size() - 6) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw UsageError("bad ridge lambda in '" + spec + "'");
      }
    }
    auto ridge = std::make_shared<FittedLinear>(FitRidge(*need_data(), lambda));
    return {ridge, ModelDumpJson(*ridge)};
  }
  if (StartsWith(spec, "file:")) {
    auto model = LoadModelDump(ReadFile(spec.substr(5)));
    return {model, ""};
  }
  if (StartsWith(spec, "rule-table:")) {
    return {std::make_shared<RuleTablePredictor>(ResolveRuleTable(spec.substr(11)), schema), ""};
  }
  if (spec == "synthetic") {
    const std::size_t a = schema.IndexOf("x1");
    const std::size_t b = schema.IndexOf("x2");
    const std::size_t d = schema.IndexOf("x3");
    return {std::make_shared<FunctionPredictor>(
                [a, b, d](std::span<const double> row) {
                  return SyntheticTruth(row[a], row[b], row[d]);
                },
                "synthetic truth 0.2*x1 - 5*x2 + 10*x2*1{x3>=0}"),
            ""};
  }
  if (StartsWith(spec, "external:")) {
    ExternalOptions options;
    options.command = spec.substr(9);
    options.batch_size = c.batch;
    options.timeout = std::chrono::milliseconds(static_cast<long long>(c.timeout * 1000.0));
    return {std::make_shared<ExternalPredictor>(schema, options), ""};
  }
  throw UsageError("unknown model spec '" + spec +
                   "' (expected glm, ridge[:LAMBDA], file:PATH, rule-table:PATH|table1|table2, "
                   "synthetic or external:COMMAND)");
}

struct Inputs {
  FeatureSchema schema;
  std::optional<Dataset> all;
  std::optional<Split> split;
  FittedModel model;

  const Dataset& Fit() const { return split ? split->train : *all; }
  const Dataset& Explain(const std::string& part) const {
    if (!split) return *all;
    return part == "test" ? split->test : split->train;
  }
};

Inputs LoadInputs(const RunConfig& c, bool build_model = true) {
  Inputs in;
  in.schema = ResolveSchema(c);
  if (!c.data.empty()) {
    CsvOptions options;
    options.delimiter = c.delimiter.front();
    options.missing = c.missing == "impute" ? MissingPolicy::kImpute : MissingPolicy::kReject;
    in.all = LoadCsv(c.data, in.schema, options);
    if (c.split) in.split = TrainTestSplit(*in.all, *c.split, c.seed);
  }
  if (build_model) in.model = BuildModel(c, in.schema, in.all ? &in.Fit() : nullptr);
  return in;
}

const Dataset& RequireData(const Inputs& in, const RunConfig& c) {
  if (!in.all) throw UsageError("'" + c.command + "' needs --data");
  return in.Explain(c.part);
}

std::string OneFeature(const RunConfig& c) {
  if (c.features.size() != 1) throw UsageError("'" + c.command + "' takes exactly one --feature");
  return c.features.front();
}

std::vector<FeatureGroup> ParseGroups(const std::vector<std::string>& specs) {
  std::vector<FeatureGroup> groups;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw UsageError("bad --group '" + spec + "' (expected NAME=f1,f2)");
    }
    FeatureGroup group{spec.substr(0, eq), {}};
    std::stringstream list(spec.substr(eq + 1));
    std::string name;
    while (std::getline(list, name, ',')) group.features.push_back(name);
    groups.push_back(std::move(group));
  }
  return groups;
}

LossSpec MakeLoss(std::string_view name, const FeatureSchema& schema) {
  return {ParseLossKind(name), schema.exposure().has_value()};
}

Instance PickInstance(const Dataset& data, std::size_t row) {
  Require(row < data.n_rows(), ErrorCode::kInvalidArgument,
          "--row " + std::to_string(row) + " is out of range (" +
              std::to_string(data.n_rows()) + " rows)");
  return data.row(row);
}

std::string Fixed(double value, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << value;
  return s.str();
}

struct Outcome {
  std::string name;  // artifact base name
  Json result;
  std::string csv;
  std::string summary;
  std::vector<std::pair<std::string, std::string>> extra_files;
};

std::string CurveSummary(const CurveSeries& curve) {
  std::ostringstream s;
  s << CurveKindName(curve.kind) << " of";
  for (const auto& axis : curve.axes) s << ' ' << axis.feature;
  s << " (" << curve.values.size() << " points, n=" << curve.n_used << ")\n";
  if (curve.axes.size() == 1) {
    for (std::size_t g = 0; g < curve.values.size(); ++g) {
      const auto& axis = curve.grid();
      s << "  " << (axis.categorical ? axis.labels[g] : Fixed(axis.values[g])) << "  "
        << Fixed(curve.values[g]) << '\n';
    }
  }
  return s.str();
}

std::string GroupedSummary(const GroupedCurves& grouped) {
  std::ostringstream s;
  for (const auto& [level, curve] : grouped.curves) {
    s << grouped.group_by << '=' << level << ": ";
    if (!curve.grid().categorical && curve.values.size() >= 2) {
      s << "slope " << Fixed(CurveSlope(curve)) << '\n';
    } else {
      s << '\n';
    }
    s << CurveSummary(curve);
  }
  for (const auto& w : grouped.warnings) s << "warning: " << w << '\n';
  return s.str();
}

std::string AttributionSummary(const Attribution& att) {
  std::ostringstream s;
  s << AttributionMethodName(att.method) << ": prediction " << Fixed(att.prediction)
    << ", baseline " << Fixed(att.baseline) << '\n';
  for (std::size_t j = 0; j < att.features.size(); ++j) {
    s << "  " << att.features[j] << "  " << Fixed(att.contributions[j]);
    if (!att.standard_errors.empty()) s << "  (se " << Fixed(att.standard_errors[j]) << ')';
    s << '\n';
  }
  s << "  efficiency gap " << Fixed(EfficiencyGap(att)) << '\n';
  return s.str();
}

Outcome CurveCommand(const RunConfig& c, CurveKind kind) {
  const Inputs in = LoadInputs(c);
  const Dataset& data = RequireData(in, c);
  const Predictor& model = *in.model.predictor;
  const std::size_t size = kind == CurveKind::kPdp ? c.grid : c.bins;
  Outcome o;
  o.name = std::string(CurveKindName(kind));
  if (!c.group_by.empty()) {
    const auto grouped = GroupedCurve(model, data, OneFeature(c), c.group_by, kind, size);
    o.result = ToJson(grouped);
    o.csv = ToCsv(grouped);
    o.summary = GroupedSummary(grouped);
    return o;
  }
  CurveSeries curve;
  switch (kind) {
    case CurveKind::kPdp:
      if (c.features.empty() || c.features.size() > 2) {
        throw UsageError("pdp takes one or two features");
      }
      curve = Pdp(model, data, std::span<const std::string>(c.features), size);
      break;
    case CurveKind::kAle: curve = Ale(model, data, OneFeature(c), size); break;
    case CurveKind::kMPlot: curve = MPlot(model, data, OneFeature(c), size); break;
  }
  o.result = ToJson(curve);
  o.csv = ToCsv(curve);
  o.summary = CurveSummary(curve);
  return o;
}

Outcome ImportanceCommand(const RunConfig& c) {
  const Inputs in = LoadInputs(c);
  const Dataset& data = RequireData(in, c);
  ImportanceOptions options;
  options.loss = MakeLoss(c.loss, in.schema);
  options.groups = ParseGroups(c.groups);
  options.repeats = c.repeats;
  options.seed = c.seed;
  options.split = c.part;
  options.per_modality = c.per_modality;
  const auto table = PermutationImportance(*in.model.predictor, data, options);
  Outcome o{"importance", ToJson(table), ToCsv(table), "", {}};
  std::ostringstream s;
  s << "permutation importance (" << LossName(options.loss.kind) << ", base error "
    << Fixed(table.base_error) << ", " << c.repeats << " repeats)\n";
  for (const auto& row : table.rows) {
    s << "  " << row.name << "  " << Fixed(row.mean) << " +- " << Fixed(row.sd) << '\n';
  }
  o.summary = s.str();
  return o;
}

Outcome IceCommand(const RunConfig& c) {
  const Inputs in = LoadInputs(c);
  IceOptions options;
  options.grid_size = c.grid;
  options.center = c.center;
  options.max_curves = c.max_curves;
  options.seed = c.seed;
  const auto bundle = Ice(*in.model.predictor, RequireData(in, c), OneFeature(c), options);
  std::ostringstream s;
  s << (bundle.centered ? "c-ICE" : "ICE") << " of " << bundle.grid.feature << ": "
    << bundle.n_curves() << " curves x " << bundle.grid.values.size() << " grid points\n";
  return {"ice", ToJson(bundle), ToCsv(bundle), s.str(), {}};
}

Outcome HstatCommand(const RunConfig& c) {
  const Inputs in = LoadInputs(c);
  const Dataset& data = RequireData(in, c);
  const Predictor& model = *in.model.predictor;
  HOptions options{c.subsample, c.seed, c.bootstrap};
  Outcome o;
  o.name = "hstat";
  std::ostringstream s;
  if (c.features.size() == 2 || c.features.size() == 1) {
    const bool pair = c.features.size() == 2;
    Json j;
    j["method"] = "h_statistic";
    j["features"] = c.features;
    j["kind"] = pair ? "pairwise" : "total";
    j["n_used"] = std::min(c.subsample, data.n_rows());
    try {
      const HValue v = pair ? HPairwise(model, data, c.features[0], c.features[1], options)
                            : HTotal(model, data, c.features[0], options);
      j["value"] = ToJson(v);
      s << "H2(" << c.features[0] << (pair ? "," + c.features[1] : std::string(",*"))
        << ") = " << Fixed(v.h2, 12) << (v.clipped ? " (clipped)" : "") << '\n';
      o.csv = "j,k,H2\n" + c.features[0] + ',' + (pair ? c.features[1] : "*") + ',' +
              FormatReal(v.h2) + '\n';
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerate) throw;
      j["value"] = {{"h2", nullptr}, {"undefined", e.what()}};
      s << "H2 " << e.what() << '\n';
      o.csv = "j,k,H2\n" + c.features[0] + ',' + (pair ? c.features[1] : "*") + ",NA\n";
    }
    o.result = std::move(j);
    o.summary = s.str();
    return o;
  }
  if (!c.features.empty()) throw UsageError("hstat takes zero, one or two features");
  const auto matrix = HMatrix(model, data, options);
  o.result = ToJson(matrix);
  o.csv = ToCsv(matrix);
  const std::size_t p = matrix.features.size();
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) {
      const auto& e = matrix.at(a, b);
      s << "H2(" << matrix.features[a] << ',' << matrix.features[b]
        << ") = " << (e.value ? Fixed(e.value->h2) : e.undefined_reason) << '\n';
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    const auto& e = matrix.total[a];
    s << "H2(" << matrix.features[a] << ",*) = "
      << (e.value ? Fixed(e.value->h2) : e.undefined_reason) << '\n';
  }
  for (const auto& w : matrix.warnings) s << "warning: " << w << '\n';
  o.summary = s.str();
  return o;
}

Outcome AttributionCommand(const RunConfig& c) {
  const Inputs in = LoadInputs(c);
  const Dataset& data = RequireData(in, c);
  const Predictor& model = *in.model.predictor;
  const Instance x = PickInstance(data, c.row);
  Attribution att;
  std::string name = c.command;
  if (c.command == "lime") {
    LimeOptions options;
    options.n_sim = c.n_sim;
    options.kernel = KernelSpec::Parse(c.kernel);
    options.lambda = c.lambda;
    options.k_features = c.k_features;
    options.seed = c.seed;
    att = LimeExplain(model, data, x, options);
  } else if (c.command == "live-explain") {
    LiveOptions options;
    options.n_sim = c.n_sim;
    options.lambda = c.lambda;
    options.k_features = c.k_features;
    options.seed = c.seed;
    att = LiveExplain(model, data, x, options);
  } else if (c.command == "shap") {
    ShapOptions options;
    options.iterations = c.M;
    options.seed = c.seed;
    options.background_rows = c.background;
    att = ShapMc(model, data, x, options);
  } else {
    const Dataset background =
        c.background == 0 ? data : SampleRows(data, c.background, c.seed);
    att = ShapleyExact(model, background, x);
  }
  Json parameters = Json::object();
  if (c.command == "lime" || c.command == "live-explain") {
    parameters["n_sim"] = c.n_sim;
    parameters["lambda"] = c.lambda;
    parameters["k_features"] = c.k_features ? Json(*c.k_features) : Json(nullptr);
    if (c.command == "lime") parameters["kernel"] = c.kernel;
  } else {
    if (c.command == "shap") parameters["M"] = c.M;
    parameters["background"] = c.background;
  }
  Json result = ToJson(att);
  result["row"] = c.row;
  result["seed"] = c.seed;
  result["parameters"] = std::move(parameters);
  return {name, std::move(result), ToCsv(att), AttributionSummary(att), {}};
}

Outcome FitCommand(const RunConfig& c) {
  if (c.model != "glm" && c.model != "ridge" && !StartsWith(c.model, "ridge:")) {
    throw UsageError("fit supports glm and ridge[:LAMBDA]");
  }
  const Inputs in = LoadInputs(c);
  Outcome o;
  o.name = "fit";
  o.result = Json::parse(in.model.dump);
  o.extra_files.emplace_back("model.json", in.model.dump + "\n");
  std::ostringstream s;
  s << in.model.predictor->description() << "\ncoefficient dump written to model.json\n";
  o.summary = s.str();
  return o;
}

Outcome EvaluateCommand(const RunConfig& c) {
  RunConfig effective = c;
  if (!effective.split) effective.split = 0.8;
  const Inputs in = LoadInputs(effective);
  if (!in.all) throw UsageError("evaluate needs --data");
  std::vector<LossKind> metrics;
  for (const auto& m : c.metrics) metrics.push_back(ParseLossKind(m));
  const auto report = Evaluate({{c.model, in.model.predictor}}, *in.split, metrics);
  std::ostringstream s;
  s << "evaluate: " << report.n_train << " train rows, " << report.n_test << " test rows\n";
  for (const auto& m : report.models) {
    s << "  " << m.model << '\n';
    for (const auto& r : m.rows) {
      s << "    " << r.metric << "  train " << Fixed(r.train) << " ("
        << Fixed(100.0 * r.gain_train, 4) << "%)  test " << Fixed(r.test) << " ("
        << Fixed(100.0 * r.gain_test, 4) << "%)\n";
    }
  }
  return {"evaluate", ToJson(report), ToCsv(report), s.str(), {}};
}

Outcome DemoCommand(const RunConfig& c) {
  Outcome o;
  o.name = "demo-" + c.demo;
  std::ostringstream s;
  if (c.demo == "pdp-flatness") {
    const auto example = SyntheticPdpExample(c.n, c.seed);
    const auto pdp = Pdp(*example.truth, example.data, "x2", c.grid);
    double max_abs = 0.0;
    for (double v : pdp.values) max_abs = std::max(max_abs, std::abs(v));
    const Dataset grouped_data =
        AppendThresholdGroup(example.data, "x3", 0.0, "x3_sign", "negative", "nonnegative");
    const auto grouped =
        GroupedCurve(*example.truth, grouped_data, "x2", "x3_sign", CurveKind::kPdp, c.grid);
    Json slopes = Json::object();
    for (const auto& [level, curve] : grouped.curves) slopes[level] = CurveSlope(curve);
    o.result = {{"pdp", ToJson(pdp)}, {"max_abs_pdp_x2", max_abs},
                {"grouped", ToJson(grouped)}, {"conditional_slopes", slopes}};
    o.csv = ToCsv(pdp);
    s << "synthetic example, n=" << c.n << ", seed " << c.seed << '\n'
      << "max |PDP(x2)| = " << Fixed(max_abs) << '\n';
    for (const auto& [level, slope] : slopes.items()) {
      s << "slope of PDP(x2) given x3 " << level << ": " << Fixed(slope.get<double>()) << '\n';
    }
  } else if (c.demo == "interaction-tables") {
    const FeatureSchema schema = ClaimCostSchema();
    const Dataset cells = Dataset::FromColumns(schema, {{0, 0, 1, 1}, {0, 1, 0, 1}});
    Json tables = Json::object();
    for (const auto& [name, table] :
         {std::pair{"table1", InteractionRuleTable()}, std::pair{"table2", AdditiveRuleTable()}}) {
      const RuleTablePredictor model(table, schema);
      Json entry;
      try {
        const HValue v = HPairwise(model, cells, "Age", "Power");
        entry["h2"] = v.h2;
        s << name << ": H2(Age,Power) = " << Fixed(v.h2, 12) << '\n';
      } catch (const Error& e) {
        entry["h2"] = nullptr;
        entry["undefined"] = e.what();
        s << name << ": " << e.what() << '\n';
      }
      const auto pdp = Pdp(model, cells, "Power");
      entry["pdp_power"] = ToJson(pdp);
      tables[name] = std::move(entry);
    }
    o.result = std::move(tables);
  } else {
    throw UsageError("unknown demo '" + c.demo + "' (expected pdp-flatness or interaction-tables)");
  }
  o.summary = s.str();
  return o;
}

Outcome Dispatch(const RunConfig& c) {
  if (c.command == "importance") return ImportanceCommand(c);
  if (c.command == "pdp") return CurveCommand(c, CurveKind::kPdp);
  if (c.command == "ale") return CurveCommand(c, CurveKind::kAle);
  if (c.command == "mplot") return CurveCommand(c, CurveKind::kMPlot);
  if (c.command == "ice") return IceCommand(c);
  if (c.command == "hstat") return HstatCommand(c);
  if (c.command == "lime" || c.command == "live-explain" || c.command == "shap" ||
      c.command == "shapley-exact") {
    return AttributionCommand(c);
  }
  if (c.command == "fit") return FitCommand(c);
  if (c.command == "evaluate") return EvaluateCommand(c);
  if (c.command == "demo") return DemoCommand(c);
  throw UsageError("unknown command '" + c.command + "'");
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  Require(static_cast<bool>(file), ErrorCode::kIo, "cannot write '" + path.string() + "'");
  file << text;
  Require(static_cast<bool>(file), ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

}  // namespace

PredictorPtr InterceptOnly(const Dataset& train) {
  const auto y = train.target();
  const double claims = std::accumulate(y.begin(), y.end(), 0.0);
  double denominator = static_cast<double>(train.n_rows());
  if (const auto e = train.exposure()) denominator = std::accumulate(e->begin(), e->end(), 0.0);
  const double rate = claims / denominator;
  return std::make_shared<FunctionPredictor>([rate](std::span<const double>) { return rate; },
                                             "intercept-only " + FormatReal(rate));
}

EvaluateReport Evaluate(const std::vector<std::pair<std::string, PredictorPtr>>& models,
                        const Split& split, const std::vector<LossKind>& metrics) {
  Require(split.train.n_rows() > 0 && split.test.n_rows() > 0, ErrorCode::kDegenerate,
          "empty split: both train and test parts need rows");
  Require(!metrics.empty(), ErrorCode::kInvalidArgument, "no metrics requested");
  const bool exposure = split.train.schema().exposure().has_value();
  const auto score = [&](const Predictor& model, const Dataset& part, LossKind kind) {
    return Loss({kind, exposure}, part.target(), PredictDataset(model, part), part.exposure());
  };

  const PredictorPtr baseline = InterceptOnly(split.train);
  std::vector<std::pair<double, double>> base_losses;
  for (LossKind kind : metrics) {
    base_losses.emplace_back(score(*baseline, split.train, kind),
                             score(*baseline, split.test, kind));
  }
  const auto gain = [](double loss, double base) {
    return base > 0.0 ? 1.0 - loss / base : 0.0;
  };

  EvaluateReport report;
  report.n_train = split.train.n_rows();
  report.n_test = split.test.n_rows();
  std::vector<std::pair<std::string, PredictorPtr>> all{{"intercept-only", baseline}};
  all.insert(all.end(), models.begin(), models.end());
  for (const auto& [name, model] : all) {
    EvaluateModelReport m;
    m.model = name;
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      EvaluateRow row;
      row.metric = std::string(LossName(metrics[k]));
      row.train = score(*model, split.train, metrics[k]);
      row.test = score(*model, split.test, metrics[k]);
      row.gain_train = gain(row.train, base_losses[k].first);
      row.gain_test = gain(row.test, base_losses[k].second);
      m.rows.push_back(std::move(row));
    }
    report.models.push_back(std::move(m));
  }
  return report;
}

void Execute(const RunConfig& config, std::ostream& out) {
  if (config.format != "json" && config.format != "csv" && config.format != "both") {
    throw UsageError("--format must be json, csv or both");
  }
  if (config.part != "train" && config.part != "test") {
    throw UsageError("--part must be train or test");
  }
  if (config.part == "test" && !config.split && config.command != "evaluate") {
    throw UsageError("--part test needs --split");
  }
  if (config.missing != "reject" && config.missing != "impute") {
    throw UsageError("--missing must be reject or impute");
  }
  if (config.delimiter.size() != 1) throw UsageError("--delimiter must be one character");

  Outcome outcome = Dispatch(config);

  Json artifact;
  artifact["artifact"] = outcome.name;
  artifact["config"] = Json::parse(config.ToJsonText());
  artifact["result"] = std::move(outcome.result);

  const fs::path dir(config.out);
  fs::create_directories(dir);
  WriteText(dir / (outcome.name + ".json"), artifact.dump(2) + "\n");
  if (config.format != "json" && !outcome.csv.empty()) {
    WriteText(dir / (outcome.name + ".csv"), outcome.csv);
  }
  for (const auto& [file, text] : outcome.extra_files) WriteText(dir / file, text);
  out << outcome.summary;
  out << "artifact: " << (dir / (outcome.name + ".json")).string() << '\n';
}

}  // namespace posthoc::cli
