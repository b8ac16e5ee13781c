#include <gtest/gtest.h>

#include <cmath>

#include "chartdesign/error.hpp"
#include "chartdesign/flatten.hpp"
#include "chartdesign/sampling.hpp"
#include "generators.hpp"

using namespace chartdesign;
namespace cdt = chartdesign::testing;

namespace {

DesignSpec simple(ChartType t) {
  DesignSpec s;
  s.chart_type = t;
  s.chart_alignment = Alignment::vertical;
  return s;
}

}  // namespace

TEST(AttributeCounts, DirectCount) {
  const std::vector<DesignSpec> corpus{simple(ChartType::bar), simple(ChartType::bar), simple(ChartType::bar),
                                       simple(ChartType::line)};
  const auto c = attribute_counts(corpus);
  EXPECT_EQ(c.total, 4u);
  EXPECT_EQ(c.counts.at("chart_type=bar"), 3u);
  EXPECT_EQ(c.counts.at("chart_type=line"), 1u);
  EXPECT_EQ(c.counts.at("chart_alignment=vertical"), 4u);
  EXPECT_THROW(attribute_counts(std::vector<DesignSpec>{}), PreconditionError);
}

TEST(AttributeCounts, DocumentFrequency) {
  DesignSpec s = simple(ChartType::bar);
  s.legend = Legend{true, std::nullopt, {"a", "a"}};
  const auto c = attribute_counts(std::vector<DesignSpec>{s});
  EXPECT_EQ(c.counts.at("legend.labels.0=a"), 1u);
  EXPECT_EQ(c.counts.at("legend.labels.1=a"), 1u);
}

TEST(ValueWeight, Formula) {
  EXPECT_NEAR(value_weight(10, 10), std::log(2.0), 1e-15);
  EXPECT_NEAR(value_weight(180, 2118), std::log(1.0 + 2118.0 / 180.0), 1e-12);
  EXPECT_NEAR(value_weight(180, 2118), 2.5468, 1e-4);
  EXPECT_NEAR(value_weight(17, 2118), 4.833, 1e-3);
  EXPECT_THROW(value_weight(0, 5), PreconditionError);
  EXPECT_THROW(value_weight(6, 5), PreconditionError);
}

TEST(ExampleWeight, ProductAndPenalty) {
  DesignSpec s;
  s.chart_type = ChartType::pie;
  s.sub_chart_type = SubChartType::simple;
  s.chart_alignment = Alignment::other;
  s.text_elements.title = "T";
  s.legend = Legend{true, std::nullopt, {}};
  WeightTable w;
  for (const auto& a : flatten(s)) w.weights[attribute_key(a)] = 1.0;
  w.weights["chart_type=pie"] = 2.0;
  w.weights["text_elements.title=T"] = 3.0;
  EXPECT_DOUBLE_EQ(example_weight(s, w), 6.0);
  s.legend.reset();
  EXPECT_DOUBLE_EQ(example_weight(s, w, 0.9), 5.4);
  EXPECT_DOUBLE_EQ(example_weight(s, w, 1.0), 6.0);
  EXPECT_THROW(example_weight(s, w, 0.0), PreconditionError);
}

TEST(NormalizeWeights, Cases) {
  const auto u = normalize_weights(std::vector<double>{1, 1, 1, 1});
  for (double p : u.probabilities) EXPECT_DOUBLE_EQ(p, 0.25);
  const auto d = normalize_weights(std::vector<double>{1, 2, 4});
  EXPECT_DOUBLE_EQ(d.probabilities[0], 1.0 / 7);
  EXPECT_DOUBLE_EQ(d.probabilities[1], 2.0 / 7);
  EXPECT_DOUBLE_EQ(d.probabilities[2], 4.0 / 7);
  EXPECT_EQ(normalize_weights(std::vector<double>{3.5}).probabilities, std::vector<double>{1.0});
  EXPECT_THROW(normalize_weights(std::vector<double>{}), PreconditionError);
  EXPECT_THROW(normalize_weights(std::vector<double>{1, 0}), PreconditionError);
  EXPECT_THROW(normalize_weights(std::vector<double>{1, NAN}), PreconditionError);
}

TEST(SampleBatches, DegenerateAndDeterministic) {
  const SampleDistribution one{{1.0}};
  for (const auto& b : sample_batches(one, 4, 10, 1))
    for (auto i : b) EXPECT_EQ(i, 0u);
  const auto d = normalize_weights(std::vector<double>{1, 2, 4});
  EXPECT_EQ(sample_batches(d, 4, 50, 99), sample_batches(d, 4, 50, 99));
  EXPECT_NE(sample_batches(d, 4, 50, 99), sample_batches(d, 4, 50, 100));
  const auto b = sample_batches(d, 4, 3, 5);
  ASSERT_EQ(b.size(), 3u);
  for (const auto& batch : b) EXPECT_EQ(batch.size(), 4u);
}

TEST(SampleBatches, ZeroProbabilityNeverDrawn) {
  const SampleDistribution d{{0.5, 0.0, 0.5}};
  for (const auto& b : sample_batches(d, 8, 500, 3))
    for (auto i : b) EXPECT_NE(i, 1u);
}

TEST(Coverage, OneBatch) {
  const std::vector<DesignSpec> corpus(4, simple(ChartType::bar));
  const auto log = coverage_log(std::vector<Batch>{{0, 1, 2, 3}}, corpus);
  ASSERT_EQ(log.per_batch.size(), 1u);
  EXPECT_EQ(log.per_batch[0].at("chart_type=bar"), 4u);
  EXPECT_EQ(log.aggregate.at("chart_type=bar"), 4u);
  EXPECT_THROW(coverage_log(std::vector<Batch>{{7}}, corpus), PreconditionError);
}

TEST(CorpusStats, AllBar) {
  const std::vector<DesignSpec> corpus(5, simple(ChartType::bar));
  const std::vector<std::string> tags(5, "s");
  const auto r = corpus_stats(corpus, tags);
  EXPECT_EQ(r.overall.total, 5u);
  EXPECT_EQ(r.overall.chart_types.at("bar"), 5u);
  EXPECT_EQ(r.overall.chart_types.at("pie"), 0u);
  EXPECT_EQ(r.overall.chart_types.size(), 7u);
  EXPECT_THROW(corpus_stats(std::vector<DesignSpec>{}, std::vector<std::string>{}), PreconditionError);
}

TEST(CorpusStats, SyntheticSourceComposition) {
  const auto c = cdt::curated_corpus();
  const auto r = corpus_stats(c.specs, c.tags);
  EXPECT_EQ(r.overall.total, 2118u);
  EXPECT_EQ(r.per_source.at("survey").total, 1101u);
  EXPECT_EQ(r.per_source.at("academic").total, 1017u);
  EXPECT_EQ(r.overall.chart_types.at("scatter"), 180u);
  EXPECT_EQ(r.overall.chart_types.at("histogram"), 17u);
  const auto counts = attribute_counts(c.specs);
  EXPECT_EQ(counts.counts.at("chart_type=scatter"), 180u);
  EXPECT_EQ(counts.total, 2118u);
}
