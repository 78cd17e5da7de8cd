// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "posthoc/cli.hpp"
#include "posthoc/error.hpp"

namespace posthoc::cli {
namespace {

void AddInputs(CLI::App& sub, RunConfig& c) {
  sub.add_option("--data", c.data, "CSV file with a header row");
  sub.add_option("--schema", c.schema, "JSON feature schema");
  sub.add_option("--model", c.model,
                 "glm | ridge[:LAMBDA] | file:PATH | rule-table:PATH|table1|table2 | "
                 "synthetic | external:COMMAND")
      ->required();
  sub.add_option("--batch", c.batch, "rows per external request")->check(CLI::PositiveNumber);
  sub.add_option("--timeout", c.timeout, "seconds per external batch")
      ->check(CLI::PositiveNumber);
  sub.add_option("--split", c.split, "train fraction of a seeded train/test split")
      ->check(CLI::Range(0.0, 1.0));
  sub.add_option("--part", c.part, "part explained after --split: train | test");
  sub.add_option("--missing", c.missing, "reject | impute");
  sub.add_option("--delimiter", c.delimiter, "CSV field delimiter");
}

void AddOutput(CLI::App& sub, RunConfig& c) {
  sub.add_option("--seed", c.seed, "random seed");
  sub.add_option("--out", c.out, "output directory");
  sub.add_option("--format", c.format, "json | csv | both");
}

CLI::App* Command(CLI::App& app, RunConfig& c, const std::string& name,
                  const std::string& help, bool inputs = true) {
  CLI::App* sub = app.add_subcommand(name, help);
  if (inputs) AddInputs(*sub, c);
  AddOutput(*sub, c);
  sub->callback([&c, name] { c.command = name; });
  return sub;
}

void AddFeatures(CLI::App& sub, RunConfig& c) {
  sub.add_option("--feature,--features", c.features, "feature name(s)")->delimiter(',');
}

void AddInstance(CLI::App& sub, RunConfig& c) {
  sub.add_option("--row", c.row, "row of the explained part used as the instance");
}

void AddSurrogate(CLI::App& sub, RunConfig& c) {
  sub.add_option("--n-sim", c.n_sim, "neighbourhood size")->check(CLI::PositiveNumber);
  sub.add_option("--lambda", c.lambda, "surrogate ridge strength")
      ->check(CLI::NonNegativeNumber);
  sub.add_option("--k-features", c.k_features, "keep the k strongest features");
}

RunConfig LoadReplay(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return RunConfig::FromJsonText(text.str());
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string replay;
  CLI::App app{"posthoc: model-agnostic explanations for tabular predictors", "posthoc"};
  app.add_option("--replay", replay, "re-run the configuration embedded in an artifact");
  app.require_subcommand(0, 1);

  auto* importance = Command(app, c, "importance", "permutation feature importance");
  importance->add_option("--loss", c.loss, "mse | mae | poisson");
  importance->add_option("--repeats", c.repeats)->check(CLI::PositiveNumber);
  importance->add_option("--group", c.groups, "feature group NAME=f1,f2 (repeatable)");
  importance->add_flag("--per-modality", c.per_modality,
                       "score each categorical level separately");

  auto* pdp = Command(app, c, "pdp", "partial dependence (1 or 2 features)");
  AddFeatures(*pdp, c);
  pdp->add_option("--grid", c.grid, "grid size")->check(CLI::PositiveNumber);
  pdp->add_option("--group-by", c.group_by, "categorical feature to group by");

  auto* ice = Command(app, c, "ice", "individual conditional expectation curves");
  AddFeatures(*ice, c);
  ice->add_option("--grid", c.grid, "grid size")->check(CLI::PositiveNumber);
  ice->add_flag("--center", c.center, "anchor each curve at its leftmost grid value");
  ice->add_option("--max-curves", c.max_curves)->check(CLI::PositiveNumber);

  for (const char* name : {"ale", "mplot"}) {
    auto* sub = Command(app, c, name,
                        std::string(name) == "ale" ? "accumulated local effects"
                                                   : "conditional mean prediction (M-plot)");
    AddFeatures(*sub, c);
    sub->add_option("--bins", c.bins, "quantile bins")->check(CLI::PositiveNumber);
    sub->add_option("--group-by", c.group_by, "categorical feature to group by");
  }

  auto* hstat = Command(app, c, "hstat", "Friedman H-statistics");
  AddFeatures(*hstat, c);
  hstat->add_option("--subsample", c.subsample, "rows used")->check(CLI::PositiveNumber);
  hstat->add_flag("--bootstrap", c.bootstrap, "report a bootstrap sd over 3 resamples");

  auto* lime = Command(app, c, "lime", "LIME local surrogate");
  AddInstance(*lime, c);
  AddSurrogate(*lime, c);
  lime->add_option("--kernel", c.kernel, "gower | rbf | rbf:WIDTH");

  auto* live = Command(app, c, "live-explain", "LIVE local surrogate");
  AddInstance(*live, c);
  AddSurrogate(*live, c);

  auto* shap = Command(app, c, "shap", "Monte Carlo Shapley values");
  AddInstance(*shap, c);
  shap->add_option("--M", c.M, "sampled permutations")->check(CLI::PositiveNumber);
  shap->add_option("--background", c.background, "background rows (0 = all)");

  auto* exact = Command(app, c, "shapley-exact", "exact Shapley values (p <= 12)");
  AddInstance(*exact, c);
  exact->add_option("--background", c.background, "background rows (0 = all)");

  Command(app, c, "fit", "fit a reference model and dump its coefficients");

  auto* evaluate = Command(app, c, "evaluate", "train/test losses and gains over intercept-only");
  evaluate->add_option("--metrics", c.metrics, "poisson,mse,mae")->delimiter(',');

  auto* demo = Command(app, c, "demo", "built-in scenarios", false);
  demo->add_option("name", c.demo, "pdp-flatness | interaction-tables")->required();
  demo->add_option("--n", c.n, "sample size")->check(CLI::PositiveNumber);
  demo->add_option("--grid", c.grid, "grid size")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage;
    const int code = app.exit(e, out, usage);
    err << usage.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (!replay.empty()) {
      if (!c.command.empty()) throw UsageError("--replay cannot be combined with a subcommand");
      Execute(LoadReplay(replay), out);
      return 0;
    }
    if (c.command.empty()) throw UsageError("a subcommand is required (see --help)");
    Execute(c, out);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "] " << c.command << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << c.command << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace posthoc::cli
