#include <gtest/gtest.h>

#include <sstream>

#include "chartdesign/cli.hpp"
#include "chartdesign/tabular.hpp"
#include "generators.hpp"
#include "temp_dir.hpp"

using namespace chartdesign;
namespace cdt = chartdesign::testing;

namespace {

struct Run {
  int status;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int s = cli::run(args, out, err);
  return {s, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ValidateInvalidPie) {
  const auto r = run({"validate", cdt::fixture("bad_pie.json")});
  EXPECT_EQ(r.status, cli::kValidationFailure);
  const Json j = Json::parse(r.out);
  EXPECT_FALSE(j["valid"].get<bool>());
  bool axes_flagged = false;
  for (const auto& i : j["issues"]) axes_flagged |= i["path"] == "axes";
  EXPECT_TRUE(axes_flagged) << r.out;
}

TEST(Cli, ValidateGood) {
  const auto r = run({"validate", cdt::fixture("grouped_bar.json")});
  EXPECT_EQ(r.status, cli::kSuccess);
  EXPECT_TRUE(Json::parse(r.out)["valid"].get<bool>());
}

TEST(Cli, SyntaxErrorIsValidationFailure) {
  cdt::TempDir dir;
  const auto p = dir.write("broken.json", "{\"chart_type\": ");
  const auto r = run({"validate", p.string()});
  EXPECT_EQ(r.status, cli::kValidationFailure);
  EXPECT_TRUE(Json::parse(r.out).contains("syntax_error"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).status, cli::kUsageOrIo);
  EXPECT_EQ(run({}).status, cli::kUsageOrIo);
  EXPECT_EQ(run({"validate", "/nonexistent/spec.json"}).status, cli::kUsageOrIo);
  EXPECT_EQ(run({"sample", "--corpus", "x"}).status, cli::kUsageOrIo);  // --seed missing
  EXPECT_EQ(run({"--help"}).status, cli::kSuccess);
}

TEST(Cli, Flatten) {
  const auto r = run({"flatten", cdt::fixture("grouped_bar.json")});
  ASSERT_EQ(r.status, cli::kSuccess) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["chart_type"], "bar");
  EXPECT_EQ(j["sub_chart_type"], "grouped");
}

TEST(Cli, EvalReflexiveAndUnmatched) {
  cdt::TempDir dir;
  Rng rng(11);
  for (int i = 0; i < 6; ++i) {
    const auto text = serialize(cdt::random_spec(rng));
    dir.write("truth/c" + std::to_string(i) + ".json", text);
    dir.write("pred/c" + std::to_string(i) + ".json", text);
  }
  dir.write("truth/orphan.json", serialize(cdt::random_spec(rng)));
  const auto r = run({"eval", "--truth", (dir.path() / "truth").string(), "--pred", (dir.path() / "pred").string(),
                      "--rules-only"});
  ASSERT_EQ(r.status, cli::kSuccess) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["macro"].get<double>(), 1.0);
  EXPECT_EQ(j["charts"], 6);
  ASSERT_EQ(j["unmatched_files"].size(), 1u);
  EXPECT_EQ(j["unmatched_files"][0]["file"], "orphan.json");
  EXPECT_NE(r.err.find("orphan.json"), std::string::npos);
}

TEST(Cli, EvalMalformedPredictionScoresEmpty) {
  cdt::TempDir dir;
  dir.write("t/a.json", R"({"chart_type":"line","chart_alignment":"horizontal"})");
  dir.write("p/a.json", "not json");
  const auto r = run({"eval", "--truth", (dir.path() / "t").string(), "--pred", (dir.path() / "p").string(),
                      "--rules-only"});
  ASSERT_EQ(r.status, cli::kSuccess) << r.err;
  EXPECT_DOUBLE_EQ(Json::parse(r.out)["macro"].get<double>(), 0.0);
}

TEST(Cli, SampleOneBatch) {
  cdt::TempDir dir;
  Rng rng(5);
  for (int i = 0; i < 12; ++i) dir.write("survey/s" + std::to_string(i) + ".json", serialize(cdt::random_spec(rng)));
  const auto args = std::vector<std::string>{"sample", "--corpus", dir.path().string(), "--batch-size", "4",
                                             "--batches", "1", "--seed", "7"};
  const auto r = run(args);
  ASSERT_EQ(r.status, cli::kSuccess) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["batches"].size(), 1u);
  EXPECT_EQ(j["batches"][0].size(), 4u);
  for (const auto& i : j["batches"][0]) EXPECT_LT(i.get<std::size_t>(), 12u);
  EXPECT_EQ(run(args).out, r.out);
}

TEST(Cli, StatsPerSource) {
  cdt::TempDir dir;
  Rng rng(9);
  for (int i = 0; i < 3; ++i) dir.write("survey/a" + std::to_string(i) + ".json", serialize(cdt::random_spec(rng, ChartType::pie)));
  for (int i = 0; i < 2; ++i) dir.write("academic/b" + std::to_string(i) + ".json", serialize(cdt::random_spec(rng, ChartType::box)));
  const auto r = run({"stats", "--corpus", dir.path().string()});
  ASSERT_EQ(r.status, cli::kSuccess) << r.err;
  const std::string& o = r.out;
  EXPECT_NE(o.find("survey"), std::string::npos);
  EXPECT_NE(o.find("academic"), std::string::npos);
  EXPECT_NE(o.find("box"), std::string::npos);
}

TEST(Cli, EmitEachBackend) {
  for (const char* b : {"vegalite", "matplotlib", "ggplot2", "altair"}) {
    const auto r = run({"emit", "--spec", cdt::fixture("grouped_bar.json"), "--data", cdt::fixture("two_charts.csv"),
                        "--backend", b, "--table", "Chart 2"});
    ASSERT_EQ(r.status, cli::kSuccess) << b << ": " << r.err;
    EXPECT_NE(r.out.find("Centre"), std::string::npos) << b;
  }
  EXPECT_EQ(run({"emit", "--spec", cdt::fixture("grouped_bar.json"), "--data", cdt::fixture("regions.csv"),
                 "--backend", "plotly"}).status,
            cli::kUsageOrIo);
  EXPECT_EQ(run({"emit", "--spec", cdt::fixture("bad_pie.json"), "--data", cdt::fixture("regions.csv"),
                 "--backend", "vegalite"}).status,
            cli::kValidationFailure);
}

TEST(Cli, PerturbAndMask) {
  const auto m = run({"perturb", "--data", cdt::fixture("two_charts.csv"), "--mode", "missing", "--fraction", "0.1",
                      "--seed", "1"});
  ASSERT_EQ(m.status, cli::kSuccess) << m.err;
  const auto bundle = parse_csv_bundle(m.out);
  ASSERT_EQ(bundle.tables.size(), 2u);
  EXPECT_EQ(bundle.tables[1].name, "Chart 2");

  EXPECT_EQ(run({"perturb", "--data", cdt::fixture("two_charts.csv"), "--mode", "outliers", "--seed", "1"}).status,
            cli::kUsageOrIo);
  EXPECT_EQ(run({"perturb", "--data", cdt::fixture("two_charts.csv"), "--mode", "format", "--seed", "1"}).status,
            cli::kSuccess);

  const auto k = run({"mask", "--data", cdt::fixture("two_charts.csv")});
  ASSERT_EQ(k.status, cli::kSuccess);
  EXPECT_EQ(k.out.find("120.5"), std::string::npos);
  EXPECT_NE(k.out.find("Left"), std::string::npos);
}
