// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "posthoc/cli.hpp"

namespace posthoc::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("posthoc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  void WriteFile(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  static std::string ReadFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int Invoke(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::Run(args, out_, err_);
  }

  // Numeric data with y = 1 + 2 x1 - x2 + noise.
  void WriteLinearData() const {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    std::normal_distribution<double> noise(0, 0.1);
    std::ostringstream csv;
    csv << "x1,x2,x3,y\n";
    for (int i = 0; i < 200; ++i) {
      const double a = u(rng), b = u(rng), c = u(rng);
      csv << a << ',' << b << ',' << c << ',' << 1 + 2 * a - b + noise(rng) << '\n';
    }
    WriteFile("lin.csv", csv.str());
    WriteFile("lin.schema.json",
              R"({"features": [{"name": "x1", "kind": "numeric"},
                               {"name": "x2", "kind": "numeric"},
                               {"name": "x3", "kind": "numeric"}], "target": "y"})");
  }

  // Poisson counts with exposure.
  void WriteClaims() const {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    std::ostringstream csv;
    csv << "age,fuel,exposure,claims\n";
    for (int i = 0; i < 2000; ++i) {
      const double age = 18 + 60 * u(rng);
      const bool diesel = u(rng) < 0.4;
      const double exposure = 0.2 + 0.8 * u(rng);
      const double rate = std::exp(-2.0 - 0.02 * (age - 40) + (diesel ? 0.3 : 0.0));
      std::poisson_distribution<int> claims(rate * exposure);
      csv << age << ',' << (diesel ? "Diesel" : "Regular") << ',' << exposure << ','
          << claims(rng) << '\n';
    }
    WriteFile("claims.csv", csv.str());
    WriteFile("claims.schema.json",
              R"({"features": [{"name": "age", "kind": "numeric"},
                               {"name": "fuel", "kind": "categorical",
                                "levels": ["Regular", "Diesel"]}],
                  "target": "claims", "exposure": "exposure"})");
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Invoke({"--help"}), 0);
  EXPECT_EQ(Invoke({"pdp", "--bogus"}), 2);
  EXPECT_EQ(Invoke({}), 2);
  EXPECT_EQ(Invoke({"pdp", "--model", "synthetic", "--format", "xml", "--out", Path("o")}), 2);
  EXPECT_EQ(Invoke({"pdp", "--model", "nonsense", "--out", Path("o")}), 2);
  WriteLinearData();
  EXPECT_EQ(Invoke({"pdp", "--data", Path("lin.csv"), "--schema", Path("lin.schema.json"),
                    "--model", "ridge", "--feature", "nope", "--out", Path("o")}),
            1);
  EXPECT_NE(err_.str().find("error [schema error]"), std::string::npos) << err_.str();
  EXPECT_EQ(Invoke({"shap", "--data", Path("missing.csv"), "--schema",
                    Path("lin.schema.json"), "--model", "ridge", "--out", Path("o")}),
            1);
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string tool = POSTHOC_TOOL;
  const auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status(tool + " --help"), 0);
  EXPECT_EQ(status(tool + " pdp --no-such-flag"), 2);
  EXPECT_EQ(status(tool + " demo interaction-tables --out " + Path("bin")), 0);
  EXPECT_TRUE(fs::exists(Path("bin/demo-interaction-tables.json")));
}

TEST_F(CliTest, ShapIsByteIdenticalAcrossRuns) {
  WriteLinearData();
  const std::vector<std::string> base{"shap",  "--data",   Path("lin.csv"), "--schema",
                                      Path("lin.schema.json"), "--model", "ridge:0.1",
                                      "--M", "500", "--seed", "7", "--row", "3"};
  auto first = base;
  first.insert(first.end(), {"--out", Path("a")});
  auto second = base;
  second.insert(second.end(), {"--out", Path("b")});
  ASSERT_EQ(Invoke(first), 0) << err_.str();
  ASSERT_EQ(Invoke(second), 0) << err_.str();
  const auto a = nlohmann::json::parse(ReadFile(Path("a/shap.json")));
  const auto b = nlohmann::json::parse(ReadFile(Path("b/shap.json")));
  EXPECT_EQ(a["result"].dump(), b["result"].dump());
  EXPECT_EQ(a["result"]["parameters"]["M"], 500);
  EXPECT_EQ(a["result"]["seed"], 7);
}

TEST_F(CliTest, ReplayReproducesArtifactByteForByte) {
  WriteLinearData();
  ASSERT_EQ(Invoke({"lime", "--data", Path("lin.csv"), "--schema", Path("lin.schema.json"),
                    "--model", "ridge", "--n-sim", "300", "--kernel", "rbf:1.5", "--seed", "3",
                    "--out", Path("r"), "--format", "both"}),
            0)
      << err_.str();
  const std::string original = ReadFile(Path("r/lime.json"));
  const std::string original_csv = ReadFile(Path("r/lime.csv"));
  fs::copy_file(Path("r/lime.json"), Path("saved.json"));
  fs::remove_all(Path("r"));
  ASSERT_EQ(Invoke({"--replay", Path("saved.json")}), 0) << err_.str();
  EXPECT_EQ(ReadFile(Path("r/lime.json")), original);
  EXPECT_EQ(ReadFile(Path("r/lime.csv")), original_csv);
  EXPECT_EQ(Invoke({"--replay", Path("saved.json"), "pdp"}), 2);
}

TEST_F(CliTest, ConfigRoundTrip) {
  RunConfig c;
  c.command = "hstat";
  c.features = {"a", "b"};
  c.split = 0.7;
  c.k_features = 3;
  c.seed = 99;
  c.kernel = "rbf:2";
  const RunConfig back = RunConfig::FromJsonText(c.ToJsonText());
  EXPECT_EQ(back.ToJsonText(), c.ToJsonText());
  EXPECT_EQ(back.split, 0.7);
  EXPECT_EQ(back.k_features, 3u);
}

TEST_F(CliTest, HstatOnRuleTable) {
  WriteFile("cells.csv", "Age,Power\nYoung,High\nYoung,Low\nOld,High\nOld,Low\n");
  ASSERT_EQ(Invoke({"hstat", "--data", Path("cells.csv"), "--model", "rule-table:table1",
                    "--features", "Age,Power", "--out", Path("h")}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(ReadFile(Path("h/hstat.json")));
  EXPECT_NEAR(j["result"]["value"]["h2"].get<double>(), 1.0 / 14.0, 1e-12);
  EXPECT_NE(out_.str().find("0.0714"), std::string::npos) << out_.str();

  // A table file on disk works the same way.
  WriteFile("table2.json", R"({"features": ["Age", "Power"], "rules": [
      {"when": {"Age": "Young", "Power": "High"}, "value": 300},
      {"when": {"Age": "Young", "Power": "Low"}, "value": 200},
      {"when": {"Age": "Old", "Power": "High"}, "value": 250},
      {"when": {"Age": "Old", "Power": "Low"}, "value": 150}]})");
  ASSERT_EQ(Invoke({"hstat", "--data", Path("cells.csv"), "--model",
                    "rule-table:" + Path("table2.json"), "--features", "Age,Power", "--out",
                    Path("h2")}),
            0)
      << err_.str();
  const auto k = nlohmann::json::parse(ReadFile(Path("h2/hstat.json")));
  EXPECT_NEAR(k["result"]["value"]["h2"].get<double>(), 0.0, 1e-12);
}

TEST_F(CliTest, EvaluateLayoutAndGains) {
  WriteClaims();
  ASSERT_EQ(Invoke({"evaluate", "--data", Path("claims.csv"), "--schema",
                    Path("claims.schema.json"), "--model", "glm", "--seed", "4", "--out",
                    Path("e"), "--format", "both"}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(ReadFile(Path("e/evaluate.json")));
  const auto& models = j["result"]["models"];
  ASSERT_EQ(models.size(), 2u);
  EXPECT_EQ(models[0]["model"], "intercept-only");
  for (const auto& row : models[0]["rows"]) {
    EXPECT_EQ(row["gain_train"], 0.0);
    EXPECT_EQ(row["gain_test"], 0.0);
  }
  for (const auto& m : models) {
    for (const auto& row : m["rows"]) {
      std::set<std::string> keys;
      for (const auto& [key, value] : row.items()) keys.insert(key);
      EXPECT_EQ(keys, (std::set<std::string>{"metric", "train", "test", "gain_train",
                                             "gain_test"}));
    }
  }
  EXPECT_EQ(models[1]["rows"][0]["metric"], "poisson");
  EXPECT_GT(models[1]["rows"][0]["gain_train"].get<double>(), 0.0);
  EXPECT_EQ(j["result"]["n_train"], 1600);
  EXPECT_EQ(ReadFile(Path("e/evaluate.csv")).substr(0, 5), "model");
}

TEST_F(CliTest, EveryCommandRunsAndWritesOnlyIntoOut) {
  WriteLinearData();
  WriteClaims();
  const std::string lin_data = Path("lin.csv"), lin_schema = Path("lin.schema.json");
  const std::vector<std::vector<std::string>> runs{
      {"importance", "--repeats", "3"},
      {"importance", "--group", "pair=x1,x2"},
      {"pdp", "--feature", "x1"},
      {"pdp", "--features", "x1,x2", "--grid", "5"},
      {"ice", "--feature", "x2", "--center"},
      {"ale", "--feature", "x1", "--bins", "10"},
      {"mplot", "--feature", "x1"},
      {"hstat"},
      {"hstat", "--feature", "x1"},
      {"lime", "--n-sim", "200"},
      {"live-explain", "--n-sim", "200", "--row", "5"},
      {"shap", "--M", "50", "--background", "20"},
      {"shapley-exact", "--background", "30"},
      {"fit"},
      {"pdp", "--feature", "x1", "--split", "0.5", "--part", "test", "--format", "csv"},
  };
  const std::string out = Path("out");
  for (const auto& extra : runs) {
    std::vector<std::string> args{extra.front(), "--data", lin_data, "--schema", lin_schema,
                                  "--model", "ridge:0.5", "--out", out};
    args.insert(args.end(), extra.begin() + 1, extra.end());
    EXPECT_EQ(Invoke(args), 0) << extra.front() << ": " << err_.str();
  }
  EXPECT_EQ(Invoke({"pdp", "--data", Path("claims.csv"), "--schema", Path("claims.schema.json"),
                    "--model", "glm", "--feature", "age", "--group-by", "fuel", "--out", out}),
            0)
      << err_.str();
  EXPECT_EQ(Invoke({"importance", "--data", Path("claims.csv"), "--schema",
                    Path("claims.schema.json"), "--model", "glm", "--loss", "poisson",
                    "--per-modality", "--out", out}),
            0)
      << err_.str();
  EXPECT_EQ(Invoke({"demo", "pdp-flatness", "--out", out}), 0) << err_.str();

  std::set<std::string> top;
  for (const auto& entry : fs::directory_iterator(dir_)) top.insert(entry.path().filename());
  EXPECT_EQ(top, (std::set<std::string>{"lin.csv", "lin.schema.json", "claims.csv",
                                        "claims.schema.json", "out"}));
  for (const auto& entry : fs::recursive_directory_iterator(out)) {
    EXPECT_TRUE(entry.is_regular_file());
  }
  EXPECT_TRUE(fs::exists(Path("out/model.json")));
  EXPECT_TRUE(fs::exists(Path("out/pdp.csv")));
  const auto demo = nlohmann::json::parse(ReadFile(Path("out/demo-pdp-flatness.json")));
  EXPECT_LE(demo["result"]["max_abs_pdp_x2"].get<double>(), 0.2);
}

TEST_F(CliTest, FittedDumpReloads) {
  WriteLinearData();
  ASSERT_EQ(Invoke({"fit", "--data", Path("lin.csv"), "--schema", Path("lin.schema.json"),
                    "--model", "ridge", "--out", Path("f")}),
            0)
      << err_.str();
  ASSERT_EQ(Invoke({"pdp", "--data", Path("lin.csv"), "--schema", Path("lin.schema.json"),
                    "--model", "file:" + Path("f/model.json"), "--feature", "x1", "--out",
                    Path("g")}),
            0)
      << err_.str();
  ASSERT_EQ(Invoke({"pdp", "--data", Path("lin.csv"), "--schema", Path("lin.schema.json"),
                    "--model", "ridge", "--feature", "x1", "--out", Path("h")}),
            0);
  const auto a = nlohmann::json::parse(ReadFile(Path("g/pdp.json")))["result"]["values"];
  const auto b = nlohmann::json::parse(ReadFile(Path("h/pdp.json")))["result"]["values"];
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].get<double>(), b[i].get<double>(), 1e-12);
  }
}

TEST_F(CliTest, ExternalModelThroughCli) {
  WriteLinearData();
  const std::string model = std::string("external:") + STUB_MODEL_PATH + " linear 1 2 -1 0";
  ASSERT_EQ(Invoke({"pdp", "--data", Path("lin.csv"), "--schema", Path("lin.schema.json"),
                    "--model", model, "--feature", "x1", "--batch", "64", "--out", Path("x")}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(ReadFile(Path("x/pdp.json")));
  const auto& values = j["result"]["values"];
  const auto& grid = j["result"]["axes"][0]["grid"];
  for (std::size_t g = 1; g < values.size(); ++g) {
    const double slope = (values[g].get<double>() - values[0].get<double>()) /
                         (grid[g].get<double>() - grid[0].get<double>());
    EXPECT_NEAR(slope, 2.0, 1e-9);
  }
}

}  // namespace
}  // namespace posthoc::cli
