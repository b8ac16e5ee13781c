#include "chartdesign/schema.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "chartdesign/synonyms.hpp"

namespace chartdesign {

namespace {

template <typename E, std::size_t N>
std::optional<E> enum_from_canonical(const std::array<std::pair<E, std::string_view>, N>& names,
                                     std::string_view value) {
  for (const auto& [e, name] : names)
    if (name == value) return e;
  return std::nullopt;
}

constexpr std::array<std::pair<ChartType, std::string_view>, 7> kChartTypeNames{{
    {ChartType::bar, "bar"},
    {ChartType::line, "line"},
    {ChartType::area, "area"},
    {ChartType::scatter, "scatter"},
    {ChartType::pie, "pie"},
    {ChartType::box, "box"},
    {ChartType::histogram, "histogram"},
}};
constexpr std::array<std::pair<SubChartType, std::string_view>, 3> kSubChartTypeNames{{
    {SubChartType::simple, "simple"},
    {SubChartType::grouped, "grouped"},
    {SubChartType::stacked, "stacked"},
}};
constexpr std::array<std::pair<Alignment, std::string_view>, 3> kAlignmentNames{{
    {Alignment::horizontal, "horizontal"},
    {Alignment::vertical, "vertical"},
    {Alignment::other, "other"},
}};
constexpr std::array<std::pair<LegendPosition, std::string_view>, 5> kLegendPositionNames{{
    {LegendPosition::top, "top"},
    {LegendPosition::bottom, "bottom"},
    {LegendPosition::left, "left"},
    {LegendPosition::right, "right"},
    {LegendPosition::none, "none"},
}};
constexpr std::array<std::pair<MarkLayout, std::string_view>, 2> kMarkLayoutNames{{
    {MarkLayout::grouped, "grouped"},
    {MarkLayout::stacked, "stacked"},
}};
constexpr std::array<std::pair<Pattern, std::string_view>, 3> kPatternNames{{
    {Pattern::solid, "solid"},
    {Pattern::striped, "striped"},
    {Pattern::dotted, "dotted"},
}};
constexpr std::array<std::pair<AxisKind, std::string_view>, 2> kAxisKindNames{{
    {AxisKind::categorical, "categorical"},
    {AxisKind::numeric, "numeric"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& names, E value) {
  for (const auto& [e, name] : names)
    if (e == value) return name;
  return "?";
}

std::string join_path(std::string_view parent, std::string_view key) {
  if (parent.empty()) return std::string(key);
  std::string out(parent);
  out += '.';
  out += key;
  return out;
}

std::string describe_type(const Json& v) { return v.type_name(); }

/// Accumulates issues while walking a document so that one parse reports
/// every problem, not just the first.
class Reader {
 public:
  std::vector<ValidationIssue> issues;
  std::vector<std::string> unknown;

  void issue(std::string path, IssueCode code, std::string message) {
    issues.push_back({std::move(path), code, std::move(message)});
  }

  bool expect_object(const Json& v, const std::string& path) {
    if (v.is_object()) return true;
    issue(path, IssueCode::bad_type, "expected an object, got " + describe_type(v));
    return false;
  }

  void check_known(const Json& obj, const std::string& path,
                   std::initializer_list<std::string_view> known) {
    for (const auto& [key, _] : obj.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end())
        unknown.push_back(join_path(path, key));
    }
  }

  const Json* find(const Json& obj, std::string_view key) {
    auto it = obj.find(std::string(key));
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::optional<std::string> text(const Json& obj, std::string_view key, const std::string& parent) {
    const Json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      issue(join_path(parent, key), IssueCode::bad_type, "expected a string, got " + describe_type(*v));
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<std::string>> text_list(const Json& obj, std::string_view key,
                                                    const std::string& parent) {
    const Json* v = find(obj, key);
    if (!v) return std::nullopt;
    const std::string path = join_path(parent, key);
    if (!v->is_array()) {
      issue(path, IssueCode::bad_type, "expected a list of strings, got " + describe_type(*v));
      return std::nullopt;
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Json& item = (*v)[i];
      if (item.is_string()) {
        out.push_back(item.get<std::string>());
      } else if (item.is_number()) {
        // Category labels such as years are commonly written as numbers.
        out.push_back(item.dump());
      } else {
        issue(join_path(path, std::to_string(i)), IssueCode::bad_type,
              "expected a string, got " + describe_type(item));
      }
    }
    return out;
  }

  std::optional<double> number(const Json& obj, std::string_view key, const std::string& parent) {
    const Json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      issue(join_path(parent, key), IssueCode::bad_type, "expected a number, got " + describe_type(*v));
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::int64_t> count(const Json& obj, std::string_view key, const std::string& parent) {
    const Json* v = find(obj, key);
    if (!v) return std::nullopt;
    const std::string path = join_path(parent, key);
    if (v->is_number_integer()) return v->get<std::int64_t>();
    if (v->is_number_float()) {
      const double d = v->get<double>();
      if (std::isfinite(d) && std::floor(d) == d && std::fabs(d) < 9.0e15)
        return static_cast<std::int64_t>(d);
    }
    issue(path, IssueCode::bad_type, "expected an integer count, got " + v->dump());
    return std::nullopt;
  }

  std::optional<bool> flag(const Json& obj, std::string_view key, const std::string& parent) {
    const Json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (v->is_boolean()) return v->get<bool>();
    if (v->is_string()) {
      const std::string t = normalize_text(v->get<std::string>());
      if (t == "true" || t == "yes" || t == "visible" || t == "shown") return true;
      if (t == "false" || t == "no" || t == "hidden") return false;
    }
    issue(join_path(parent, key), IssueCode::bad_type, "expected a boolean, got " + v->dump());
    return std::nullopt;
  }

  template <typename E, std::size_t N>
  std::optional<E> enumeration(const Json& obj, std::string_view key, const std::string& parent,
                               std::string_view category,
                               const std::array<std::pair<E, std::string_view>, N>& names) {
    const Json* v = find(obj, key);
    if (!v) return std::nullopt;
    const std::string path = join_path(parent, key);
    if (!v->is_string()) {
      issue(path, IssueCode::bad_type, "expected a string, got " + describe_type(*v));
      return std::nullopt;
    }
    const std::string raw = v->get<std::string>();
    if (auto canonical = SynonymTable::builtin().lookup(category, raw)) {
      if (auto e = enum_from_canonical(names, *canonical)) return e;
    }
    issue(path, IssueCode::bad_enum, "unrecognised value '" + raw + "'");
    return std::nullopt;
  }

  void require(const Json& obj, std::string_view key, const std::string& parent) {
    if (!find(obj, key))
      issue(join_path(parent, key), IssueCode::missing_required, "required key is missing");
  }

  std::optional<AxisSpec> axis(const Json& obj, std::string_view key, const std::string& parent) {
    const std::string path = join_path(parent, key);
    const Json* v = find(obj, key);
    if (!v) {
      issue(path, IssueCode::missing_required, "required key is missing");
      return std::nullopt;
    }
    if (!expect_object(*v, path)) return std::nullopt;
    check_known(*v, path, {"kind", "categories", "range"});
    AxisSpec out;
    require(*v, "kind", path);
    auto kind = enumeration(*v, "kind", path, "axis_kind", kAxisKindNames);
    if (kind) out.kind = *kind;
    out.categories = text_list(*v, "categories", path);
    if (const Json* r = find(*v, "range")) {
      const std::string rpath = join_path(path, "range");
      if (expect_object(*r, rpath)) {
        check_known(*r, rpath, {"min", "max"});
        require(*r, "min", rpath);
        require(*r, "max", rpath);
        auto lo = number(*r, "min", rpath);
        auto hi = number(*r, "max", rpath);
        if (lo && hi) out.range = NumericRange{*lo, *hi};
      }
    }
    if (!kind) return std::nullopt;
    return out;
  }
};

}  // namespace

std::string_view to_string(ChartType v) { return name_of(kChartTypeNames, v); }
std::string_view to_string(SubChartType v) { return name_of(kSubChartTypeNames, v); }
std::string_view to_string(Alignment v) { return name_of(kAlignmentNames, v); }
std::string_view to_string(LegendPosition v) { return name_of(kLegendPositionNames, v); }
std::string_view to_string(MarkLayout v) { return name_of(kMarkLayoutNames, v); }
std::string_view to_string(Pattern v) { return name_of(kPatternNames, v); }
std::string_view to_string(AxisKind v) { return name_of(kAxisKindNames, v); }

std::string_view to_string(IssueCode code) {
  switch (code) {
    case IssueCode::missing_required: return "missing_required";
    case IssueCode::inapplicable_key: return "inapplicable_key";
    case IssueCode::bad_enum: return "bad_enum";
    case IssueCode::bad_range: return "bad_range";
    case IssueCode::bad_type: return "bad_type";
  }
  return "?";
}

std::optional<ChartType> chart_type_from_string(std::string_view text) {
  auto canonical = SynonymTable::builtin().lookup("chart_type", text);
  if (!canonical) return std::nullopt;
  return enum_from_canonical(kChartTypeNames, *canonical);
}

namespace {
std::string summarize(const std::vector<ValidationIssue>& issues) {
  std::string out = "invalid design spec";
  for (const auto& i : issues) {
    out += "\n  ";
    out += i.path.empty() ? "<root>" : i.path;
    out += ": ";
    out += to_string(i.code);
    out += " (" + i.message + ")";
  }
  return out;
}

void sort_issues(std::vector<ValidationIssue>& issues) {
  std::stable_sort(issues.begin(), issues.end(),
                   [](const ValidationIssue& a, const ValidationIssue& b) { return a.path < b.path; });
}
}  // namespace

SpecError::SpecError(std::vector<ValidationIssue> issues)
    : Error(summarize(issues)), issues_(std::move(issues)) {}

DesignSpec parse_design(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(e.what(), e.byte);
  }
  return parse_design(doc);
}

DesignSpec parse_design(const Json& doc) {
  Reader rd;
  DesignSpec spec;
  if (!rd.expect_object(doc, "")) throw SpecError(std::move(rd.issues));

  rd.check_known(doc, "", {"chart_type", "sub_chart_type", "chart_alignment", "text_elements",
                           "axes", "legend", "bars_or_data_points", "grid_lines",
                           "size_and_spacing", "boxplot_style"});

  rd.require(doc, "chart_type", "");
  if (auto t = rd.enumeration(doc, "chart_type", "", "chart_type", kChartTypeNames))
    spec.chart_type = *t;
  spec.sub_chart_type = rd.enumeration(doc, "sub_chart_type", "", "sub_chart_type", kSubChartTypeNames);
  rd.require(doc, "chart_alignment", "");
  if (auto a = rd.enumeration(doc, "chart_alignment", "", "chart_alignment", kAlignmentNames))
    spec.chart_alignment = *a;

  if (const Json* te = rd.find(doc, "text_elements"); te && rd.expect_object(*te, "text_elements")) {
    const std::string p = "text_elements";
    rd.check_known(*te, p, {"title", "x_axis_label", "y_axis_label", "annotations"});
    spec.text_elements.title = rd.text(*te, "title", p);
    spec.text_elements.x_axis_label = rd.text(*te, "x_axis_label", p);
    spec.text_elements.y_axis_label = rd.text(*te, "y_axis_label", p);
    spec.text_elements.annotations = rd.text_list(*te, "annotations", p);
  }

  if (const Json* ax = rd.find(doc, "axes"); ax && rd.expect_object(*ax, "axes")) {
    rd.check_known(*ax, "axes", {"x", "y"});
    auto x = rd.axis(*ax, "x", "axes");
    auto y = rd.axis(*ax, "y", "axes");
    if (x && y) spec.axes = Axes{*x, *y};
  }

  if (const Json* lg = rd.find(doc, "legend"); lg && rd.expect_object(*lg, "legend")) {
    const std::string p = "legend";
    rd.check_known(*lg, p, {"visible", "position", "labels"});
    rd.require(*lg, "visible", p);
    Legend legend;
    auto visible = rd.flag(*lg, "visible", p);
    legend.visible = visible.value_or(true);
    legend.position = rd.enumeration(*lg, "position", p, "legend_position", kLegendPositionNames);
    legend.labels = rd.text_list(*lg, "labels", p).value_or(std::vector<std::string>{});
    if (visible) spec.legend = std::move(legend);
  }

  if (const Json* bd = rd.find(doc, "bars_or_data_points");
      bd && rd.expect_object(*bd, "bars_or_data_points")) {
    const std::string p = "bars_or_data_points";
    rd.check_known(*bd, p, {"alignment", "width", "spacing", "pattern"});
    MarkStyle m;
    m.alignment = rd.enumeration(*bd, "alignment", p, "mark_alignment", kMarkLayoutNames);
    m.width = rd.number(*bd, "width", p);
    m.spacing = rd.number(*bd, "spacing", p);
    m.pattern = rd.enumeration(*bd, "pattern", p, "pattern", kPatternNames);
    spec.bars_or_data_points = m;
  }

  if (const Json* gl = rd.find(doc, "grid_lines"); gl && rd.expect_object(*gl, "grid_lines")) {
    rd.check_known(*gl, "grid_lines", {"horizontal", "vertical"});
    spec.grid_lines = GridLines{rd.count(*gl, "horizontal", "grid_lines"),
                                rd.count(*gl, "vertical", "grid_lines")};
  }

  if (const Json* ss = rd.find(doc, "size_and_spacing");
      ss && rd.expect_object(*ss, "size_and_spacing")) {
    rd.check_known(*ss, "size_and_spacing", {"mark_width", "intra_group_spacing"});
    spec.size_and_spacing = SizeAndSpacing{rd.number(*ss, "mark_width", "size_and_spacing"),
                                           rd.number(*ss, "intra_group_spacing", "size_and_spacing")};
  }

  if (const Json* bs = rd.find(doc, "boxplot_style"); bs && rd.expect_object(*bs, "boxplot_style")) {
    const std::string p = "boxplot_style";
    rd.check_known(*bs, p, {"whisker_rule", "outlier_marker_visible", "mean_marker"});
    spec.boxplot_style = BoxplotStyle{rd.text(*bs, "whisker_rule", p),
                                      rd.flag(*bs, "outlier_marker_visible", p),
                                      rd.flag(*bs, "mean_marker", p)};
  }

  if (!rd.issues.empty()) {
    sort_issues(rd.issues);
    throw SpecError(std::move(rd.issues));
  }
  spec.unknown_keys = std::move(rd.unknown);
  return spec;
}

std::set<std::string> applicability(ChartType type) {
  std::set<std::string> keys{"chart_type", "sub_chart_type", "chart_alignment", "text_elements",
                             "legend"};
  if (type == ChartType::pie) return keys;
  keys.insert({"axes", "grid_lines"});
  if (type == ChartType::bar || type == ChartType::box)
    keys.insert({"bars_or_data_points", "size_and_spacing"});
  if (type == ChartType::box) keys.insert("boxplot_style");
  return keys;
}

std::set<std::string> present_keys(const DesignSpec& spec) {
  std::set<std::string> keys{"chart_type", "chart_alignment"};
  if (spec.sub_chart_type) keys.insert("sub_chart_type");
  if (!spec.text_elements.empty()) keys.insert("text_elements");
  if (spec.axes) keys.insert("axes");
  if (spec.legend) keys.insert("legend");
  if (spec.bars_or_data_points) keys.insert("bars_or_data_points");
  if (spec.grid_lines) keys.insert("grid_lines");
  if (spec.size_and_spacing) keys.insert("size_and_spacing");
  if (spec.boxplot_style) keys.insert("boxplot_style");
  return keys;
}

namespace {

void validate_axis(const AxisSpec& axis, const std::string& path, std::vector<ValidationIssue>& out) {
  if (axis.kind == AxisKind::categorical) {
    if (!axis.categories || axis.categories->empty())
      out.push_back({path + ".categories", IssueCode::missing_required,
                     "categorical axis needs a non-empty category list"});
    if (axis.range)
      out.push_back({path + ".range", IssueCode::inapplicable_key, "range on a categorical axis"});
  } else {
    if (!axis.range)
      out.push_back({path + ".range", IssueCode::missing_required, "numeric axis needs a range"});
    else if (!(axis.range->min <= axis.range->max))
      out.push_back({path + ".range", IssueCode::bad_range, "range min exceeds max"});
    if (axis.categories)
      out.push_back({path + ".categories", IssueCode::inapplicable_key,
                     "categories on a numeric axis"});
  }
}

void check_fraction(const std::optional<double>& v, const std::string& path, bool allow_zero,
                    bool capped, std::vector<ValidationIssue>& out) {
  if (!v) return;
  const double x = *v;
  const bool ok = std::isfinite(x) && (allow_zero ? x >= 0 : x > 0) && (!capped || x <= 1.0);
  if (!ok) {
    out.push_back({path, IssueCode::bad_range,
                   capped ? "expected a fraction in (0, 1]" : "expected a nonnegative fraction"});
  }
}

void check_count(const std::optional<std::int64_t>& v, const std::string& path,
                 std::vector<ValidationIssue>& out) {
  if (v && *v < 0) out.push_back({path, IssueCode::bad_range, "count must be nonnegative"});
}

}  // namespace

std::vector<ValidationIssue> validate(const DesignSpec& spec) {
  std::vector<ValidationIssue> out;
  const auto allowed = applicability(spec.chart_type);
  for (const auto& key : present_keys(spec)) {
    if (!allowed.count(key))
      out.push_back({key, IssueCode::inapplicable_key,
                     "not applicable to " + std::string(to_string(spec.chart_type)) + " charts"});
  }
  if (spec.sub_chart_type && *spec.sub_chart_type != SubChartType::simple &&
      spec.chart_type != ChartType::bar) {
    out.push_back({"sub_chart_type", IssueCode::bad_enum,
                   std::string(to_string(*spec.sub_chart_type)) + " only applies to bar charts"});
  }
  if (spec.axes) {
    validate_axis(spec.axes->x, "axes.x", out);
    validate_axis(spec.axes->y, "axes.y", out);
  }
  if (spec.bars_or_data_points) {
    check_fraction(spec.bars_or_data_points->width, "bars_or_data_points.width", false, true, out);
    check_fraction(spec.bars_or_data_points->spacing, "bars_or_data_points.spacing", true, false, out);
  }
  if (spec.grid_lines) {
    check_count(spec.grid_lines->horizontal, "grid_lines.horizontal", out);
    check_count(spec.grid_lines->vertical, "grid_lines.vertical", out);
  }
  if (spec.size_and_spacing) {
    check_fraction(spec.size_and_spacing->mark_width, "size_and_spacing.mark_width", false, true, out);
    check_fraction(spec.size_and_spacing->intra_group_spacing,
                   "size_and_spacing.intra_group_spacing", true, false, out);
  }
  sort_issues(out);
  return out;
}

DesignSpec normalize(const DesignSpec& spec) {
  DesignSpec out = spec;
  out.unknown_keys.clear();

  const auto allowed = applicability(out.chart_type);
  if (!allowed.count("axes")) out.axes.reset();
  if (!allowed.count("grid_lines")) out.grid_lines.reset();
  if (!allowed.count("bars_or_data_points")) out.bars_or_data_points.reset();
  if (!allowed.count("size_and_spacing")) out.size_and_spacing.reset();
  if (!allowed.count("boxplot_style")) out.boxplot_style.reset();

  if (out.axes) {
    for (AxisSpec* a : {&out.axes->x, &out.axes->y}) {
      if (a->kind == AxisKind::categorical) a->range.reset();
      else a->categories.reset();
    }
  }
  if (out.text_elements.annotations && out.text_elements.annotations->empty())
    out.text_elements.annotations.reset();
  if (out.grid_lines && !out.grid_lines->horizontal && !out.grid_lines->vertical)
    out.grid_lines.reset();
  if (out.bars_or_data_points && *out.bars_or_data_points == MarkStyle{})
    out.bars_or_data_points.reset();
  if (out.size_and_spacing && *out.size_and_spacing == SizeAndSpacing{})
    out.size_and_spacing.reset();
  if (out.boxplot_style && *out.boxplot_style == BoxplotStyle{}) out.boxplot_style.reset();

  if (auto issues = validate(out); !issues.empty()) throw SpecError(std::move(issues));
  return out;
}

namespace {

Json axis_json(const AxisSpec& axis) {
  Json j = Json::object();
  j["kind"] = to_string(axis.kind);
  if (axis.categories) j["categories"] = *axis.categories;
  if (axis.range) j["range"] = Json{{"min", axis.range->min}, {"max", axis.range->max}};
  return j;
}

}  // namespace

Json to_json(const DesignSpec& spec) {
  Json j = Json::object();
  j["chart_type"] = to_string(spec.chart_type);
  if (spec.sub_chart_type) j["sub_chart_type"] = to_string(*spec.sub_chart_type);
  j["chart_alignment"] = to_string(spec.chart_alignment);

  if (!spec.text_elements.empty()) {
    const auto& te = spec.text_elements;
    Json t = Json::object();
    if (te.title) t["title"] = *te.title;
    if (te.x_axis_label) t["x_axis_label"] = *te.x_axis_label;
    if (te.y_axis_label) t["y_axis_label"] = *te.y_axis_label;
    if (te.annotations) t["annotations"] = *te.annotations;
    j["text_elements"] = std::move(t);
  }
  if (spec.axes) j["axes"] = Json{{"x", axis_json(spec.axes->x)}, {"y", axis_json(spec.axes->y)}};
  if (spec.legend) {
    Json l = Json::object();
    l["visible"] = spec.legend->visible;
    if (spec.legend->position) l["position"] = to_string(*spec.legend->position);
    if (!spec.legend->labels.empty()) l["labels"] = spec.legend->labels;
    j["legend"] = std::move(l);
  }
  if (spec.bars_or_data_points) {
    const auto& m = *spec.bars_or_data_points;
    Json b = Json::object();
    if (m.alignment) b["alignment"] = to_string(*m.alignment);
    if (m.width) b["width"] = *m.width;
    if (m.spacing) b["spacing"] = *m.spacing;
    if (m.pattern) b["pattern"] = to_string(*m.pattern);
    j["bars_or_data_points"] = std::move(b);
  }
  if (spec.grid_lines) {
    Json g = Json::object();
    if (spec.grid_lines->horizontal) g["horizontal"] = *spec.grid_lines->horizontal;
    if (spec.grid_lines->vertical) g["vertical"] = *spec.grid_lines->vertical;
    j["grid_lines"] = std::move(g);
  }
  if (spec.size_and_spacing) {
    Json s = Json::object();
    if (spec.size_and_spacing->mark_width) s["mark_width"] = *spec.size_and_spacing->mark_width;
    if (spec.size_and_spacing->intra_group_spacing)
      s["intra_group_spacing"] = *spec.size_and_spacing->intra_group_spacing;
    j["size_and_spacing"] = std::move(s);
  }
  if (spec.boxplot_style) {
    const auto& bs = *spec.boxplot_style;
    Json b = Json::object();
    if (bs.whisker_rule) b["whisker_rule"] = *bs.whisker_rule;
    if (bs.outlier_marker_visible) b["outlier_marker_visible"] = *bs.outlier_marker_visible;
    if (bs.mean_marker) b["mean_marker"] = *bs.mean_marker;
    j["boxplot_style"] = std::move(b);
  }
  return j;
}

std::string serialize(const DesignSpec& spec) { return to_json(spec).dump(2) + "\n"; }

}  // namespace chartdesign
