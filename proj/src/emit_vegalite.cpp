#include <algorithm>
#include <regex>
#include <set>

#include "chartdesign/flatten.hpp"
#include "chartdesign/synonyms.hpp"
#include "emit_model.hpp"

namespace chartdesign {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::vegalite: return "vegalite";
    case Backend::matplotlib: return "matplotlib";
    case Backend::ggplot2: return "ggplot2";
    case Backend::altair: return "altair";
  }
  return "?";
}

std::optional<Backend> backend_from_string(std::string_view name) {
  const std::string n = normalize_text(name);
  if (n == "vegalite" || n == "vega lite" || n == "vl") return Backend::vegalite;
  if (n == "matplotlib" || n == "mpl") return Backend::matplotlib;
  if (n == "ggplot2" || n == "ggplot") return Backend::ggplot2;
  if (n == "altair") return Backend::altair;
  return std::nullopt;
}

std::string_view file_extension(Backend b) {
  switch (b) {
    case Backend::vegalite: return ".vl.json";
    case Backend::matplotlib: return ".py";
    case Backend::ggplot2: return ".R";
    case Backend::altair: return ".altair.py";
  }
  return "";
}

std::vector<std::string> warned_paths(const EmitResult& result) {
  std::vector<std::string> out;
  for (const auto& w : result.warnings) out.push_back(w.substr(0, w.find(':')));
  return out;
}

EmitResult emit(const DesignSpec& spec, const DataTable& table, Backend backend) {
  return backend == Backend::vegalite ? emit_vegalite(spec, table) : emit_script(spec, table, backend);
}

namespace detail {

PlotModel build_plot_model(const DesignSpec& spec, const DataTable& table) {
  if (auto issues = validate(spec); !issues.empty()) throw SpecError(std::move(issues));
  PlotModel m;
  m.spec = normalize(spec);
  m.table = &table;
  m.kinds = infer_column_kinds(table);

  std::set<std::string> used;
  for (std::size_t c = 0; c < table.columns(); ++c) {
    std::string name = table.headers[c].empty() ? "column_" + std::to_string(c + 1) : table.headers[c];
    if (used.count(name)) {
      std::string base = name;
      for (int k = 2; used.count(name); ++k) name = base + "_" + std::to_string(k);
      m.data_warnings.push_back("data: duplicate column name '" + base + "' renamed to '" + name + "'");
    }
    used.insert(name);
    m.names.push_back(std::move(name));
  }
  while (used.count(m.series_field)) m.series_field += "_";
  while (used.count(m.value_field)) m.value_field += "_";

  const ChartType type = m.spec.chart_type;
  const Alignment align = m.spec.chart_alignment;
  if (type == ChartType::bar || type == ChartType::box || type == ChartType::histogram)
    m.swapped = align == Alignment::horizontal;
  else if (type != ChartType::pie)
    m.swapped = align == Alignment::vertical;

  std::vector<std::size_t> numeric;
  for (std::size_t c = 0; c < m.kinds.size(); ++c)
    if (m.kinds[c] == ColumnKind::numeric) numeric.push_back(c);
  auto numeric_after_first = [&] {
    std::vector<std::size_t> out;
    for (auto c : numeric)
      if (c != 0) out.push_back(c);
    return out;
  };
  const std::string chart = std::string(to_string(type));

  switch (type) {
    case ChartType::pie: {
      if (table.columns() < 2) throw EmitError("pie charts need a label column and a value column");
      auto values = numeric_after_first();
      if (values.empty()) throw EmitError("pie chart: no numeric value column after the label column");
      m.category_col = 0;
      m.value_cols = {values.front()};
      if (values.size() > 1)
        m.data_warnings.push_back("data: pie chart uses only column '" + m.names[values.front()] + "'");
      break;
    }
    case ChartType::histogram:
      if (numeric.empty()) throw EmitError("histogram: table has no numeric column");
      m.value_cols = numeric;
      m.category_is_series = true;
      break;
    case ChartType::box:
      if (!m.kinds.empty() && m.kinds[0] != ColumnKind::numeric) {
        m.category_col = 0;
        m.value_cols = numeric_after_first();
      } else {
        m.value_cols = numeric;
        m.category_is_series = true;
      }
      if (m.value_cols.empty()) throw EmitError("box plot: table has no numeric column");
      break;
    default:
      if (table.columns() < 2) throw EmitError(chart + " charts need at least two columns");
      m.category_col = 0;
      m.value_cols = numeric_after_first();
      if (m.value_cols.empty()) throw EmitError(chart + " chart: no numeric column after the first column");
      break;
  }
  return m;
}

void hidden_legend_warnings(const DesignSpec& spec, std::vector<std::string>& warnings) {
  if (!spec.legend || spec.legend->visible) return;
  if (spec.legend->position) warnings.push_back("legend.position: legend is hidden");
  if (!spec.legend->labels.empty()) warnings.push_back("legend.labels: legend is hidden");
}

std::optional<WhiskerRule> parse_whisker_rule(const std::string& text) {
  const std::string n = normalize_text(text);
  if (n == "min max" || n == "minmax" || n == "range" || n == "min to max")
    return WhiskerRule{std::nullopt, "min-max"};
  static const std::regex re(R"(^\s*(\d+(?:\.\d+)?)\s*(?:\*|x|×)?\s*iqr\s*$)", std::regex::icase);
  std::smatch m;
  if (std::regex_match(text, m, re)) {
    const double k = std::stod(m[1].str());
    return WhiskerRule{k, format_number(k) + "*IQR"};
  }
  return std::nullopt;
}

}  // namespace detail

namespace {

using detail::PlotModel;

std::string vl_field(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (c == '.' || c == '[' || c == ']' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

Json cell_json(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return *d;
  if (auto* s = std::get_if<std::string>(&c)) return *s;
  return nullptr;
}

std::string category_type(const PlotModel& m) {
  if (m.category_is_series) return "nominal";
  const ChartType t = m.spec.chart_type;
  const ColumnKind k = m.kinds[*m.category_col];
  if (k == ColumnKind::numeric)
    return (t == ChartType::bar || t == ChartType::box) ? "ordinal" : "quantitative";
  if (k == ColumnKind::temporal) {
    bool all_numbers = true;
    for (const auto& row : m.table->rows)
      if (is_text(row[*m.category_col])) all_numbers = false;
    return all_numbers ? "ordinal" : "temporal";
  }
  return "nominal";
}

// Type of a channel that carries an axis spec: categorical axes keep a
// discrete type, numeric axes are quantitative.
std::string axis_type(const AxisSpec& axis, const std::string& current) {
  if (axis.kind == AxisKind::numeric) return "quantitative";
  return (current == "nominal" || current == "ordinal") ? current : "ordinal";
}

Json domain_json(const AxisSpec& axis) {
  if (axis.kind == AxisKind::categorical) return Json(*axis.categories);
  return Json::array({axis.range->min, axis.range->max});
}

void warn(std::vector<std::string>& w, std::string path, std::string reason) {
  w.push_back(std::move(path) + ": " + std::move(reason));
}

}  // namespace

namespace detail {

// Builds the Vega-Lite document and its warnings. Shared with the Altair
// emitter, which transliterates the same document into Python.
Json build_vegalite(const PlotModel& m, std::vector<std::string>& warnings) {
  const DesignSpec& s = m.spec;
  const ChartType type = s.chart_type;
  const bool pie = type == ChartType::pie;
  const bool bar = type == ChartType::bar;
  const bool box = type == ChartType::box;
  const bool histogram = type == ChartType::histogram;

  warnings.insert(warnings.end(), m.data_warnings.begin(), m.data_warnings.end());

  Json doc = Json::object();
  doc["$schema"] = "https://vega.github.io/schema/vega-lite/v5.json";

  // title, annotations
  const auto& te = s.text_elements;
  if (te.title && te.title->empty()) warn(warnings, "text_elements.title", "empty title is not rendered");
  const bool has_title = te.title && !te.title->empty();
  if (te.annotations) {
    Json title = Json::object();
    title["text"] = has_title ? *te.title : std::string();
    title["subtitle"] = *te.annotations;
    doc["title"] = std::move(title);
  } else if (has_title) {
    doc["title"] = *te.title;
  }

  // data
  Json values = Json::array();
  for (const auto& row : m.table->rows) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[m.names[c]] = cell_json(row[c]);
    values.push_back(std::move(obj));
  }
  doc["data"] = Json{{"values", std::move(values)}};

  Json fold = Json::array();
  for (auto c : m.value_cols) fold.push_back(vl_field(m.names[c]));
  doc["transform"] = Json::array(
      {Json{{"fold", std::move(fold)}, {"as", Json::array({m.series_field, m.value_field})}}});

  // mark
  Json mark = Json::object();
  static const std::map<ChartType, std::string> kMark{
      {ChartType::bar, "bar"},   {ChartType::line, "line"}, {ChartType::area, "area"},
      {ChartType::scatter, "point"}, {ChartType::pie, "arc"}, {ChartType::box, "boxplot"},
      {ChartType::histogram, "bar"}};
  mark["type"] = kMark.at(type);

  // orientation
  if (pie) {
    warn(warnings, "chart_alignment", "pie charts have no orientation");
  } else if (s.chart_alignment == Alignment::other) {
    warn(warnings, "chart_alignment", "'other' has no portable orientation; default layout used");
  }

  Json encoding = Json::object();
  const std::string cat_ch = m.swapped ? "y" : "x";
  const std::string val_ch = m.swapped ? "x" : "y";
  const std::string offset_ch = m.swapped ? "yOffset" : "xOffset";
  Json offset;  // set when marks are dodged by series

  if (pie) {
    encoding["theta"] = Json{{"field", m.value_field}, {"type", "quantitative"}};
    encoding["color"] = Json{{"field", vl_field(m.category_name())}, {"type", "nominal"}};
    if (te.x_axis_label) warn(warnings, "text_elements.x_axis_label", "pie charts have no axes");
    if (te.y_axis_label) warn(warnings, "text_elements.y_axis_label", "pie charts have no axes");
    if (s.sub_chart_type) warn(warnings, "sub_chart_type", "no distinct rendering for pie charts");
  } else {
    Json cat = Json::object();
    Json val = Json::object();
    if (histogram) {
      cat["field"] = m.value_field;
      cat["bin"] = true;
      cat["type"] = "quantitative";
      val["aggregate"] = "count";
      val["type"] = "quantitative";
    } else {
      cat["field"] = vl_field(m.category_name());
      cat["type"] = category_type(m);
      val["field"] = m.value_field;
      val["type"] = "quantitative";
    }
    Json& x = m.swapped ? val : cat;
    Json& y = m.swapped ? cat : val;

    const AxisSpec* bin_axis = !s.axes || !histogram ? nullptr : m.swapped ? &s.axes->y : &s.axes->x;
    if (bin_axis && bin_axis->kind == AxisKind::categorical) {
      warn(warnings, "axes", "binned histogram axis cannot take a categorical domain");
    } else if (s.axes) {
      x["type"] = axis_type(s.axes->x, x["type"].get<std::string>());
      y["type"] = axis_type(s.axes->y, y["type"].get<std::string>());
      x["scale"]["domain"] = domain_json(s.axes->x);
      y["scale"]["domain"] = domain_json(s.axes->y);
    }
    if (te.x_axis_label) x["title"] = *te.x_axis_label;
    if (te.y_axis_label) y["title"] = *te.y_axis_label;
    if (s.grid_lines) {
      if (auto h = s.grid_lines->horizontal) y["axis"] = Json{{"tickCount", *h}, {"grid", *h > 0}};
      if (auto v = s.grid_lines->vertical) x["axis"] = Json{{"tickCount", *v}, {"grid", *v > 0}};
    }

    // series layout
    if (s.sub_chart_type) {
      if (pie || box || histogram) {
        warn(warnings, "sub_chart_type", "no distinct rendering for " + std::string(to_string(type)) + " charts");
      } else {
        switch (*s.sub_chart_type) {
          case SubChartType::stacked: val["stack"] = "zero"; break;
          case SubChartType::grouped:
            val["stack"] = nullptr;
            offset = Json{{"field", m.series_field}, {"type", "nominal"}};
            break;
          case SubChartType::simple: val["stack"] = nullptr; break;
        }
      }
    }

    if (const auto& bd = s.bars_or_data_points) {
      if (bd->alignment) {
        if (bar) {
          warn(warnings, "bars_or_data_points.alignment", "layout is rendered from sub_chart_type");
        } else if (*bd->alignment == MarkLayout::grouped) {
          offset = Json{{"field", m.series_field}, {"type", "nominal"}};
        } else {
          warn(warnings, "bars_or_data_points.alignment", "stacked box plots are not supported");
        }
      }
      if (bd->width) {
        if (bar) mark["width"] = Json{{"band", *bd->width}};
        else warn(warnings, "bars_or_data_points.width", "boxplot width is not band-relative in Vega-Lite");
      }
      if (bd->spacing) {
        if (*bd->spacing <= 1.0) cat["scale"]["paddingInner"] = *bd->spacing;
        else warn(warnings, "bars_or_data_points.spacing", "padding above 1 is not representable");
      }
      if (bd->pattern) {
        if (*bd->pattern == Pattern::solid) {
          mark["fillOpacity"] = 1;
        } else {
          mark["fillOpacity"] = 0.5;
          mark["stroke"] = "black";
          mark["strokeDash"] = *bd->pattern == Pattern::striped ? Json::array({6, 3}) : Json::array({1, 3});
          warn(warnings, "bars_or_data_points.pattern",
               std::string(to_string(*bd->pattern)) + " fill approximated with a dashed outline");
        }
      }
    }

    if (const auto& ss = s.size_and_spacing) {
      if (ss->mark_width) warn(warnings, "size_and_spacing.mark_width", "no band-relative mark size");
      if (ss->intra_group_spacing) {
        if (offset.is_null()) {
          warn(warnings, "size_and_spacing.intra_group_spacing", "marks are not grouped");
        } else if (*ss->intra_group_spacing > 1.0) {
          warn(warnings, "size_and_spacing.intra_group_spacing", "padding above 1 is not representable");
        } else {
          offset["scale"] = Json{{"paddingInner", *ss->intra_group_spacing}};
        }
      }
    }

    if (const auto& bs = s.boxplot_style) {
      if (bs->whisker_rule) {
        const auto rule = detail::parse_whisker_rule(*bs->whisker_rule);
        if (rule) {
          if (rule->iqr_multiple) mark["extent"] = *rule->iqr_multiple;
          else mark["extent"] = "min-max";
        }
        if (!rule || rule->canonical != *bs->whisker_rule)
          warn(warnings, "boxplot_style.whisker_rule",
               rule ? "rendered as " + rule->canonical : "unrecognised rule; default whiskers used");
      }
      if (bs->outlier_marker_visible) mark["outliers"] = *bs->outlier_marker_visible;
      if (bs->mean_marker) warn(warnings, "boxplot_style.mean_marker", "boxplot mark has no mean marker");
    }

    encoding[cat_ch] = cat;
    encoding[val_ch] = val;
    // Keep x before y regardless of orientation.
    Json ordered = Json::object();
    ordered["x"] = encoding["x"];
    ordered["y"] = encoding["y"];
    encoding = std::move(ordered);
    encoding["color"] = Json{{"field", m.series_field}, {"type", "nominal"}};
    if (!offset.is_null()) encoding[offset_ch] = offset;
  }

  detail::hidden_legend_warnings(s, warnings);
  if (const auto& lg = s.legend) {
    // Vega-Lite hides a legend with null.
    Json legend = Json::object();
    if (lg->position) legend["orient"] = to_string(*lg->position);
    if (!lg->labels.empty()) legend["values"] = lg->labels;
    encoding["color"]["legend"] = lg->visible ? std::move(legend) : Json(nullptr);
  }

  doc["mark"] = std::move(mark);
  doc["encoding"] = std::move(encoding);
  return doc;
}

}  // namespace detail

EmitResult emit_vegalite(const DesignSpec& spec, const DataTable& table) {
  const PlotModel model = detail::build_plot_model(spec, table);
  EmitResult r;
  r.backend = Backend::vegalite;
  const Json doc = detail::build_vegalite(model, r.warnings);
  r.content = doc.dump(2) + "\n";
  return r;
}

namespace {

std::optional<std::string> chart_type_of_mark(const Json& doc) {
  const Json& mark = doc.at("mark");
  const std::string t = mark.is_string() ? mark.get<std::string>() : mark.at("type").get<std::string>();
  if (t == "bar") {
    const Json& enc = doc.at("encoding");
    for (const char* ch : {"x", "y"})
      if (enc.contains(ch) && enc[ch].value("bin", false)) return "histogram";
    return "bar";
  }
  if (t == "line" || t == "area") return t;
  if (t == "point") return "scatter";
  if (t == "arc") return "pie";
  if (t == "boxplot") return "box";
  return std::nullopt;
}

Json axis_from_channel(const Json& ch) {
  Json a = Json::object();
  const std::string type = ch.value("type", "");
  const Json& domain = ch.at("scale").at("domain");
  if (type == "quantitative") {
    a["kind"] = "numeric";
    a["range"] = Json{{"min", domain.at(0)}, {"max", domain.at(1)}};
  } else {
    a["kind"] = "categorical";
    a["categories"] = domain;
  }
  return a;
}

bool has_domain(const Json& enc, const char* ch) {
  return enc.contains(ch) && enc[ch].contains("scale") && enc[ch]["scale"].contains("domain");
}

}  // namespace

Json recover_design(const Json& vl) {
  Json d = Json::object();
  const auto type = chart_type_of_mark(vl);
  if (!type) return d;
  d["chart_type"] = *type;
  const Json& enc = vl.at("encoding");
  const Json mark = vl.at("mark").is_object() ? vl.at("mark") : Json{{"type", vl.at("mark")}};

  const bool pie = *type == "pie";
  const bool histogram = *type == "histogram";
  const bool box = *type == "box";
  const bool bar = *type == "bar";

  std::string cat_ch, val_ch;
  if (!pie) {
    std::string value_field;
    if (vl.contains("transform"))
      for (const auto& t : vl["transform"])
        if (t.contains("fold")) value_field = t.at("as").at(1).get<std::string>();
    auto is_value = [&](const Json& ch) {
      return histogram ? !ch.value("bin", false) : ch.value("field", "") == value_field;
    };
    val_ch = is_value(enc.at("x")) ? "x" : "y";
    cat_ch = val_ch == "x" ? "y" : "x";
    const bool upright_default = bar || box || histogram;
    const bool swapped = cat_ch == "y";
    if (upright_default) d["chart_alignment"] = swapped ? "horizontal" : "vertical";
    else d["chart_alignment"] = swapped ? "vertical" : "horizontal";

    const Json& val = enc.at(val_ch);
    const std::string offset_ch = cat_ch == "x" ? "xOffset" : "yOffset";
    const bool offset = enc.contains(offset_ch);
    if (!box && val.contains("stack")) {
      if (val["stack"].is_null()) d["sub_chart_type"] = offset ? "grouped" : "simple";
      else d["sub_chart_type"] = "stacked";
    }

    Json te = Json::object();
    if (vl.contains("title")) {
      const Json& t = vl["title"];
      if (t.is_string()) te["title"] = t;
      else {
        if (!t.value("text", "").empty()) te["title"] = t["text"];
        if (t.contains("subtitle")) te["annotations"] = t["subtitle"];
      }
    }
    if (enc["x"].contains("title")) te["x_axis_label"] = enc["x"]["title"];
    if (enc["y"].contains("title")) te["y_axis_label"] = enc["y"]["title"];
    if (!te.empty()) d["text_elements"] = std::move(te);

    if (has_domain(enc, "x") && has_domain(enc, "y"))
      d["axes"] = Json{{"x", axis_from_channel(enc["x"])}, {"y", axis_from_channel(enc["y"])}};
  } else {
    Json te = Json::object();
    if (vl.contains("title")) {
      const Json& t = vl["title"];
      if (t.is_string()) te["title"] = t;
      else {
        if (!t.value("text", "").empty()) te["title"] = t["text"];
        if (t.contains("subtitle")) te["annotations"] = t["subtitle"];
      }
    }
    if (!te.empty()) d["text_elements"] = std::move(te);
  }

  if (enc.contains("color") && enc["color"].contains("legend")) {
    const Json& l = enc["color"]["legend"];
    Json legend = Json::object();
    legend["visible"] = !l.is_null();
    if (l.is_object() && l.contains("orient")) legend["position"] = l["orient"];
    if (l.is_object() && l.contains("values")) legend["labels"] = l["values"];
    d["legend"] = std::move(legend);
  }

  if (!pie) {
    Json bd = Json::object();
    const std::string offset_ch = cat_ch == "x" ? "xOffset" : "yOffset";
    if (box && enc.contains(offset_ch)) bd["alignment"] = "grouped";
    if (bar && mark.contains("width") && mark["width"].is_object()) bd["width"] = mark["width"]["band"];
    const Json& cat = enc.at(cat_ch);
    if ((bar || box) && cat.contains("scale") && cat["scale"].contains("paddingInner"))
      bd["spacing"] = cat["scale"]["paddingInner"];
    if ((bar || box) && mark.contains("fillOpacity") && !mark.contains("strokeDash") &&
        mark["fillOpacity"] == 1)
      bd["pattern"] = "solid";
    if (!bd.empty()) d["bars_or_data_points"] = std::move(bd);

    Json grid = Json::object();
    if (enc["y"].contains("axis") && enc["y"]["axis"].contains("tickCount"))
      grid["horizontal"] = enc["y"]["axis"]["tickCount"];
    if (enc["x"].contains("axis") && enc["x"]["axis"].contains("tickCount"))
      grid["vertical"] = enc["x"]["axis"]["tickCount"];
    if (!grid.empty()) d["grid_lines"] = std::move(grid);

    if (enc.contains(offset_ch) && enc[offset_ch].contains("scale") &&
        enc[offset_ch]["scale"].contains("paddingInner"))
      d["size_and_spacing"] = Json{{"intra_group_spacing", enc[offset_ch]["scale"]["paddingInner"]}};

    if (box) {
      Json bs = Json::object();
      if (mark.contains("extent")) {
        const Json& e = mark["extent"];
        bs["whisker_rule"] = e.is_string() ? e.get<std::string>() : format_number(e.get<double>()) + "*IQR";
      }
      if (mark.contains("outliers")) bs["outlier_marker_visible"] = mark["outliers"];
      if (!bs.empty()) d["boxplot_style"] = std::move(bs);
    }
  }
  return d;
}

}  // namespace chartdesign
