#include <gtest/gtest.h>

#include "chartdesign/emitters.hpp"
#include "generators.hpp"
#include "reverse_check.hpp"
#include "vl_validator.hpp"

using namespace chartdesign;
namespace cdt = chartdesign::testing;

namespace {

DesignSpec base(ChartType t, Alignment a) {
  DesignSpec s;
  s.chart_type = t;
  s.chart_alignment = a;
  return s;
}

DataTable two_columns() {
  DataTable t;
  t.headers = {"Fruit", "Count"};
  t.rows = {{std::string("Apple"), 4.0}, {std::string("Pear"), 7.0}, {std::string("Plum"), 2.0}};
  return t;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Backend, Names) {
  for (auto b : kAllBackends) EXPECT_EQ(backend_from_string(to_string(b)), b);
  EXPECT_EQ(backend_from_string("Vega-Lite"), Backend::vegalite);
  EXPECT_EQ(backend_from_string("plotly"), std::nullopt);
  EXPECT_EQ(file_extension(Backend::ggplot2), ".R");
}

TEST(VegaLite, VerticalBar) {
  const auto r = emit_vegalite(base(ChartType::bar, Alignment::vertical), two_columns());
  const Json doc = Json::parse(r.content);
  EXPECT_TRUE(cdt::validate_vegalite(doc).empty());
  EXPECT_EQ(doc["mark"]["type"], "bar");
  EXPECT_EQ(doc["encoding"]["x"]["field"], "Fruit");
  EXPECT_EQ(doc["encoding"]["y"]["field"], "value");
  EXPECT_EQ(doc["encoding"]["y"]["type"], "quantitative");
}

TEST(VegaLite, HorizontalSwapsOnlyXY) {
  DesignSpec v = base(ChartType::bar, Alignment::vertical);
  v.text_elements.title = "Fruit";
  DesignSpec h = v;
  h.chart_alignment = Alignment::horizontal;
  Json dv = Json::parse(emit_vegalite(v, two_columns()).content);
  Json dh = Json::parse(emit_vegalite(h, two_columns()).content);
  EXPECT_EQ(dv["encoding"]["x"], dh["encoding"]["y"]);
  EXPECT_EQ(dv["encoding"]["y"], dh["encoding"]["x"]);
  dv.erase("encoding");
  dh.erase("encoding");
  EXPECT_EQ(dv, dh);
}

TEST(VegaLite, StackedBar) {
  DesignSpec s = base(ChartType::bar, Alignment::vertical);
  s.sub_chart_type = SubChartType::stacked;
  const Json doc = Json::parse(emit_vegalite(s, cdt::sample_table()).content);
  EXPECT_EQ(doc["encoding"]["y"]["stack"], "zero");
  EXPECT_EQ(doc["encoding"]["y"]["type"], "quantitative");
}

TEST(VegaLite, GroupedBarUsesOffset) {
  DesignSpec s = base(ChartType::bar, Alignment::horizontal);
  s.sub_chart_type = SubChartType::grouped;
  const Json doc = Json::parse(emit_vegalite(s, cdt::sample_table()).content);
  EXPECT_TRUE(doc["encoding"].contains("yOffset"));
  EXPECT_TRUE(doc["encoding"]["x"]["stack"].is_null());
}

TEST(VegaLite, HiddenLegendAndDottedPattern) {
  DesignSpec s = base(ChartType::bar, Alignment::vertical);
  s.legend = Legend{false, LegendPosition::top, {}};
  s.bars_or_data_points = MarkStyle{std::nullopt, std::nullopt, std::nullopt, Pattern::dotted};
  const auto r = emit_vegalite(s, cdt::sample_table());
  const Json doc = Json::parse(r.content);
  EXPECT_TRUE(doc["encoding"]["color"]["legend"].is_null());
  const auto paths = warned_paths(r);
  EXPECT_NE(std::find(paths.begin(), paths.end(), "legend.position"), paths.end());
  EXPECT_NE(std::find(paths.begin(), paths.end(), "bars_or_data_points.pattern"), paths.end());
  EXPECT_TRUE(cdt::reverse_mismatches(s, r).empty());
}

TEST(VegaLite, BoxStyle) {
  DesignSpec s = base(ChartType::box, Alignment::vertical);
  s.boxplot_style = BoxplotStyle{"min-max", false, true};
  const auto r = emit_vegalite(s, cdt::sample_table());
  const Json doc = Json::parse(r.content);
  EXPECT_EQ(doc["mark"]["type"], "boxplot");
  EXPECT_EQ(doc["mark"]["extent"], "min-max");
  EXPECT_EQ(doc["mark"]["outliers"], false);
  EXPECT_EQ(warned_paths(r), std::vector<std::string>{"boxplot_style.mean_marker"});
}

TEST(VegaLite, HistogramBins) {
  const auto r = emit_vegalite(base(ChartType::histogram, Alignment::vertical), cdt::sample_table(20, 1));
  const Json doc = Json::parse(r.content);
  EXPECT_EQ(doc["encoding"]["x"]["bin"], true);
  EXPECT_EQ(doc["encoding"]["y"]["aggregate"], "count");
  EXPECT_TRUE(cdt::validate_vegalite(doc).empty());
}

TEST(VegaLite, PieHasNoAxes) {
  const Json doc = Json::parse(emit_vegalite(base(ChartType::pie, Alignment::other), two_columns()).content);
  EXPECT_EQ(doc["mark"]["type"], "arc");
  EXPECT_TRUE(doc["encoding"].contains("theta"));
  EXPECT_FALSE(doc["encoding"].contains("x"));
}

TEST(VegaLite, FieldNamesWithDotsAreEscaped) {
  DataTable t;
  t.headers = {"a.b", "v[1]"};
  t.rows = {{std::string("x"), 1.0}};
  const Json doc = Json::parse(emit_vegalite(base(ChartType::bar, Alignment::vertical), t).content);
  EXPECT_EQ(doc["encoding"]["x"]["field"], "a\\.b");
  EXPECT_TRUE(cdt::validate_vegalite(doc).empty());
}

TEST(Emit, UnusableTables) {
  DataTable text;
  text.headers = {"a", "b"};
  text.rows = {{std::string("x"), std::string("y")}};
  EXPECT_THROW(emit_vegalite(base(ChartType::bar, Alignment::vertical), text), EmitError);
  DataTable one;
  one.headers = {"n"};
  one.rows = {{1.0}, {2.0}};
  EXPECT_THROW(emit_vegalite(base(ChartType::line, Alignment::horizontal), one), EmitError);
  EXPECT_NO_THROW(emit_vegalite(base(ChartType::histogram, Alignment::vertical), one));
  EXPECT_THROW(emit_script(base(ChartType::bar, Alignment::vertical), two_columns(), Backend::vegalite),
               PreconditionError);
}

TEST(Emit, InvalidSpecRejected) {
  DesignSpec s = base(ChartType::bar, Alignment::vertical);
  s.grid_lines = GridLines{-2, std::nullopt};
  EXPECT_THROW(emit_vegalite(s, two_columns()), SpecError);
  DesignSpec pie = base(ChartType::pie, Alignment::other);
  pie.axes = Axes{};
  EXPECT_THROW(emit_script(pie, two_columns(), Backend::matplotlib), SpecError);
}

TEST(Scripts, LineScriptMentionsTitleAndLabels) {
  DesignSpec s = base(ChartType::line, Alignment::horizontal);
  s.text_elements.title = "Revenue";
  s.text_elements.x_axis_label = "Year";
  s.text_elements.y_axis_label = "USD";
  const auto mpl = emit_script(s, cdt::sample_table(), Backend::matplotlib).content;
  EXPECT_TRUE(contains(mpl, "ax.plot("));
  EXPECT_TRUE(contains(mpl, "ax.set_title(\"Revenue\")"));
  EXPECT_TRUE(contains(mpl, "ax.set_xlabel(\"Year\")"));
  EXPECT_TRUE(contains(mpl, "ax.set_ylabel(\"USD\")"));
  const auto gg = emit_script(s, cdt::sample_table(), Backend::ggplot2).content;
  EXPECT_TRUE(contains(gg, "geom_line("));
  EXPECT_TRUE(contains(gg, "title = \"Revenue\""));
  EXPECT_TRUE(contains(gg, "x = \"Year\""));
  const auto alt = emit_script(s, cdt::sample_table(), Backend::altair).content;
  EXPECT_TRUE(contains(alt, ".mark_line("));
  EXPECT_TRUE(contains(alt, "title=\"Revenue\""));
}

TEST(Scripts, PieHasNoAxisLabels) {
  DesignSpec s = base(ChartType::pie, Alignment::other);
  s.text_elements.title = "Share";
  s.text_elements.x_axis_label = "ignored";
  for (auto b : {Backend::matplotlib, Backend::ggplot2, Backend::altair}) {
    const auto r = emit_script(s, two_columns(), b);
    EXPECT_FALSE(contains(r.content, "set_xlabel")) << to_string(b);
    EXPECT_FALSE(contains(r.content, "set_ylabel")) << to_string(b);
    EXPECT_FALSE(contains(r.content, "x = \"ignored\"")) << to_string(b);
    EXPECT_FALSE(contains(r.content, "ignored")) << to_string(b);
    const auto paths = warned_paths(r);
    EXPECT_NE(std::find(paths.begin(), paths.end(), "text_elements.x_axis_label"), paths.end());
  }
}

TEST(Scripts, SwappedOrientation) {
  DesignSpec s = base(ChartType::bar, Alignment::horizontal);
  EXPECT_TRUE(contains(emit_script(s, two_columns(), Backend::matplotlib).content, "ax.barh("));
  EXPECT_TRUE(contains(emit_script(s, two_columns(), Backend::ggplot2).content, "coord_flip()"));
}

TEST(Scripts, Deterministic) {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const auto s = cdt::random_spec(rng);
    for (auto b : kAllBackends) EXPECT_EQ(emit(s, cdt::sample_table(), b).content,
                                          emit(s, cdt::sample_table(), b).content);
  }
}

// Random specs through every backend; Vega-Lite output validated and read back.
TEST(EmitProperty, RandomSpecsAllBackends) {
  Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    const auto s = cdt::random_spec(rng);
    const auto table = cdt::sample_table(4 + i % 5, 1 + i % 3);
    for (auto b : kAllBackends) {
      EmitResult r;
      ASSERT_NO_THROW(r = emit(s, table, b)) << serialize(normalize(s));
      EXPECT_FALSE(r.content.empty());
      if (b == Backend::vegalite) {
        const Json doc = Json::parse(r.content);
        const auto errors = cdt::validate_vegalite(doc);
        EXPECT_TRUE(errors.empty()) << errors.front() << "\n" << serialize(normalize(s));
        const auto miss = cdt::reverse_mismatches(s, r);
        EXPECT_TRUE(miss.empty()) << miss.front() << "\n" << serialize(normalize(s));
      }
    }
  }
}
