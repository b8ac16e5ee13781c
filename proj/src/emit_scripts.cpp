#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "emit_model.hpp"

namespace chartdesign {

namespace detail {
Json build_vegalite(const PlotModel& m, std::vector<std::string>& warnings);
}

namespace {

using detail::PlotModel;

void warn(std::vector<std::string>& w, std::string path, std::string reason) {
  w.push_back(std::move(path) + ": " + std::move(reason));
}

std::string quote(const std::string& s) {
  return Json(s).dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string cell_text(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (auto* s = std::get_if<std::string>(&c)) return *s;
  return {};
}

// ---- data shaping shared by the script backends -------------------------

struct Categorical {
  bool positional = true;  // category axis drawn at integer slots
  std::vector<Cell> categories;
  std::vector<std::string> series;                       // value column names
  std::map<std::string, std::vector<std::optional<double>>> values;  // per series, per category
};

// Data categories absent from the axis domain, in order of appearance.
std::vector<std::string> unlisted_categories(const PlotModel& m, const std::optional<std::vector<std::string>>& order) {
  std::vector<std::string> out;
  if (!order || !m.category_col) return out;
  std::set<std::string> seen(order->begin(), order->end());
  for (const auto& row : m.table->rows) {
    const Cell& c = row[*m.category_col];
    if (!is_empty(c) && seen.insert(cell_text(c)).second) out.push_back(cell_text(c));
  }
  return out;
}

void warn_unlisted(const std::vector<std::string>& extra, std::vector<std::string>& w) {
  if (!extra.empty())
    warn(w, "data", std::to_string(extra.size()) + " categories outside the axis domain appended after it");
}

// Wide layout keyed by the distinct category values (bar, line, area,
// scatter, pie). Later duplicates of a category overwrite earlier ones.
Categorical categorical_layout(const PlotModel& m, const std::optional<std::vector<std::string>>& order) {
  Categorical out;
  const std::size_t cc = *m.category_col;
  out.positional = order.has_value() || m.kinds[cc] != ColumnKind::numeric;
  std::vector<std::string> keys;
  std::map<std::string, std::size_t> index;
  if (order) {
    for (const auto& c : *order) {
      index.emplace(c, keys.size());
      keys.push_back(c);
      out.categories.push_back(c);
    }
    for (const auto& c : unlisted_categories(m, order)) {
      index.emplace(c, keys.size());
      keys.push_back(c);
      out.categories.push_back(c);
    }
  } else {
    for (const auto& row : m.table->rows) {
      if (is_empty(row[cc])) continue;
      const std::string k = cell_text(row[cc]);
      if (index.emplace(k, keys.size()).second) {
        keys.push_back(k);
        out.categories.push_back(row[cc]);
      }
    }
  }
  for (auto c : m.value_cols) {
    out.series.push_back(m.names[c]);
    out.values[m.names[c]].assign(keys.size(), std::nullopt);
  }
  for (const auto& row : m.table->rows) {
    if (is_empty(row[cc])) continue;
    auto it = index.find(cell_text(row[cc]));
    if (it == index.end()) continue;
    for (auto c : m.value_cols)
      if (auto* d = std::get_if<double>(&row[c])) out.values[m.names[c]][it->second] = *d;
  }
  return out;
}

struct Group {
  std::string label;
  std::string series;
  std::vector<double> samples;
};

// One sample list per (category, series) for box plots, or per series for
// histograms and category-less box plots.
std::vector<Group> grouped_samples(const PlotModel& m, const std::optional<std::vector<std::string>>& order) {
  std::vector<Group> groups;
  auto numbers = [&](std::size_t col, const std::function<bool(const std::vector<Cell>&)>& keep) {
    std::vector<double> v;
    for (const auto& row : m.table->rows)
      if (auto* d = std::get_if<double>(&row[col]); d && keep(row)) v.push_back(*d);
    return v;
  };
  if (m.category_is_series) {
    std::vector<std::size_t> cols = m.value_cols;
    if (order) {
      cols.clear();
      for (const auto& name : *order)
        for (auto c : m.value_cols)
          if (m.names[c] == name) cols.push_back(c);
    }
    for (auto c : cols) groups.push_back({m.names[c], m.names[c], numbers(c, [](const auto&) { return true; })});
    return groups;
  }
  const std::size_t cc = *m.category_col;
  std::vector<std::string> cats;
  if (order) {
    cats = *order;
  } else {
    std::set<std::string> seen;
    for (const auto& row : m.table->rows)
      if (!is_empty(row[cc]) && seen.insert(cell_text(row[cc])).second) cats.push_back(cell_text(row[cc]));
  }
  const bool many = m.value_cols.size() > 1;
  for (const auto& cat : cats)
    for (auto c : m.value_cols)
      groups.push_back({many ? cat + " / " + m.names[c] : cat, m.names[c],
                        numbers(c, [&](const auto& row) { return cell_text(row[cc]) == cat; })});
  return groups;
}

std::string py_cell(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (auto* s = std::get_if<std::string>(&c)) return quote(*s);
  return "None";
}

std::string py_number(std::optional<double> v) { return v ? format_number(*v) : "None"; }

std::string py_literal(const Json& j) {
  if (j.is_null()) return "None";
  if (j.is_boolean()) return j.get<bool>() ? "True" : "False";
  if (j.is_number_float()) return format_number(j.get<double>());
  if (j.is_number()) return j.dump();
  if (j.is_string()) return quote(j.get<std::string>());
  std::string out;
  if (j.is_array()) {
    out = "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + py_literal(j[i]);
    return out + "]";
  }
  out = "{";
  bool first = true;
  for (const auto& [k, v] : j.items()) {
    out += (first ? "" : ", ") + quote(k) + ": " + py_literal(v);
    first = false;
  }
  return out + "}";
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fmt, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + fmt(items[i]);
  return out;
}

// Which displayed axis ("x"/"y") carries the category or domain.
std::string category_axis(const PlotModel& m) { return m.swapped ? "y" : "x"; }

const AxisSpec* axis_for(const DesignSpec& s, const std::string& displayed) {
  if (!s.axes) return nullptr;
  return displayed == "x" ? &s.axes->x : &s.axes->y;
}

std::string orientation_warnings(const PlotModel& m, std::vector<std::string>& w) {
  if (m.spec.chart_type == ChartType::pie) warn(w, "chart_alignment", "pie charts have no orientation");
  else if (m.spec.chart_alignment == Alignment::other)
    warn(w, "chart_alignment", "'other' has no portable orientation; default layout used");
  return {};
}

// Effective layout when the spec leaves it open: bars and areas stack,
// lines and points overlay.
SubChartType effective_layout(const DesignSpec& s) {
  if (s.sub_chart_type) return *s.sub_chart_type;
  return (s.chart_type == ChartType::bar || s.chart_type == ChartType::area || s.chart_type == ChartType::histogram)
             ? SubChartType::stacked
             : SubChartType::simple;
}

// ---- matplotlib ----------------------------------------------------------

std::string emit_matplotlib(const PlotModel& m, std::vector<std::string>& w) {
  const DesignSpec& s = m.spec;
  const ChartType type = s.chart_type;
  const bool pie = type == ChartType::pie, box = type == ChartType::box, hist = type == ChartType::histogram,
             bar = type == ChartType::bar;
  const std::string cat_ax = category_axis(m);
  const std::string val_ax = cat_ax == "x" ? "y" : "x";
  orientation_warnings(m, w);

  const AxisSpec* cat_spec = pie ? nullptr : axis_for(s, cat_ax);
  std::optional<std::vector<std::string>> order;
  if (cat_spec && cat_spec->kind == AxisKind::categorical && !hist) order = cat_spec->categories;

  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
     << "\"\"\"" << to_string(type) << " chart rendered with matplotlib.\"\"\"\n"
     << "import sys\n\n"
     << "import matplotlib\n\nmatplotlib.use(\"Agg\")\n"
     << "import matplotlib.pyplot as plt\n"
     << "import numpy as np\n"
     << "from matplotlib.ticker import MaxNLocator\n\n";

  const SubChartType layout = effective_layout(s);
  const bool grouped_with_sub = s.sub_chart_type.has_value();
  std::string hatch = "None";
  if (const auto& bd = s.bars_or_data_points; bd && bd->pattern) {
    if (*bd->pattern == Pattern::striped) hatch = "\"//\"";
    else if (*bd->pattern == Pattern::dotted) hatch = "\"..\"";
  }
  bool positional_cat = false;

  if (pie || box || hist) {
    if (s.sub_chart_type && (pie || box))
      warn(w, "sub_chart_type", "no distinct rendering for " + std::string(to_string(type)) + " charts");
  }

  if (box || hist) {
    const auto groups = grouped_samples(m, order);
    py << "groups = [\n";
    for (const auto& g : groups)
      py << "    (" << quote(g.label) << ", ["
         << join(g.samples, [](double d) { return format_number(d); }) << "]),\n";
    py << "]\n\n";
    py << "fig, ax = plt.subplots(figsize=(8, 5))\n";
    if (box) {
      positional_cat = true;
      std::string whis = "1.5";
      bool showfliers = true, showmeans = false;
      if (const auto& bs = s.boxplot_style) {
        if (bs->whisker_rule) {
          const auto rule = detail::parse_whisker_rule(*bs->whisker_rule);
          if (rule) whis = rule->iqr_multiple ? format_number(*rule->iqr_multiple) : "(0, 100)";
          if (!rule) warn(w, "boxplot_style.whisker_rule", "unrecognised rule; default whiskers used");
        }
        if (bs->outlier_marker_visible) showfliers = *bs->outlier_marker_visible;
        if (bs->mean_marker) showmeans = *bs->mean_marker;
      }
      double band = 1.0;
      std::optional<double> width;
      if (const auto& bd = s.bars_or_data_points) {
        if (bd->spacing) band = std::max(0.05, 1.0 - *bd->spacing);
        if (bd->width) width = *bd->width;
        if (bd->alignment && *bd->alignment == MarkLayout::stacked)
          warn(w, "bars_or_data_points.alignment", "stacked box plots are not supported");
      }
      if (const auto& ss = s.size_and_spacing) {
        if (ss->mark_width && !width) width = ss->mark_width;
        else if (ss->mark_width) warn(w, "size_and_spacing.mark_width", "superseded by bars_or_data_points.width");
        if (ss->intra_group_spacing) warn(w, "size_and_spacing.intra_group_spacing", "boxes are placed in single slots");
      }
      py << "positions = np.arange(1, len(groups) + 1)\n"
         << "parts = ax.boxplot(\n    [g[1] for g in groups],\n    positions=positions,\n"
         << "    orientation=" << (m.swapped ? "\"horizontal\"" : "\"vertical\"") << ",\n"
         << "    whis=" << whis << ",\n"
         << "    showfliers=" << (showfliers ? "True" : "False") << ",\n"
         << "    showmeans=" << (showmeans ? "True" : "False") << ",\n";
      if (width || band < 1.0) py << "    widths=" << format_number(band * width.value_or(0.5)) << ",\n";
      py << "    patch_artist=True,\n)\n"
         << "for patch in parts[\"boxes\"]:\n"
         << "    patch.set_facecolor(\"#9ecae1\")\n";
      if (hatch != "None") py << "    patch.set_hatch(" << hatch << ")\n";
      py << "ax.set_" << cat_ax << "ticks(positions)\n"
         << "ax.set_" << cat_ax << "ticklabels([g[0] for g in groups])\n";
    } else {
      std::string extra;
      switch (layout) {
        case SubChartType::stacked: extra = ", stacked=True"; break;
        case SubChartType::grouped: extra = ", histtype=\"bar\""; break;
        case SubChartType::simple: extra = ", histtype=\"stepfilled\", alpha=0.5"; break;
      }
      py << "ax.hist(\n    [np.array(g[1], dtype=float) for g in groups],\n"
         << "    label=[g[0] for g in groups],\n"
         << "    orientation=" << (m.swapped ? "\"horizontal\"" : "\"vertical\"") << extra << ",\n)\n";
    }
  } else {
    const Categorical data = categorical_layout(m, order);
    warn_unlisted(unlisted_categories(m, order), w);
    positional_cat = data.positional;
    py << "categories = [" << join(data.categories, py_cell) << "]\n";
    py << "series = {\n";
    for (const auto& name : data.series)
      py << "    " << quote(name) << ": [" << join(data.values.at(name), py_number) << "],\n";
    py << "}\n\n";
    py << "fig, ax = plt.subplots(figsize=(8, 5))\n";

    if (pie) {
      py << "values = np.nan_to_num(np.array(series[" << quote(data.series.front()) << "], dtype=float))\n"
         << "ax.pie(values, labels=[str(c) for c in categories], startangle=90, counterclock=False)\n"
         << "ax.axis(\"equal\")\n";
    } else {
      if (data.positional) py << "x = np.arange(len(categories), dtype=float)\n";
      else py << "x = np.array(categories, dtype=float)\n";
      py << "names = list(series)\n"
         << "base = np.zeros(len(x))\n";
      if (bar) {
        double spacing = 0.2, width = 1.0, gap = 0.0;
        if (const auto& bd = s.bars_or_data_points) {
          if (bd->spacing) spacing = std::min(*bd->spacing, 0.95);
          if (bd->width) width = *bd->width;
          if (bd->alignment) warn(w, "bars_or_data_points.alignment", "layout is rendered from sub_chart_type");
        }
        if (const auto& ss = s.size_and_spacing) {
          if (ss->mark_width) {
            if (s.bars_or_data_points && s.bars_or_data_points->width)
              warn(w, "size_and_spacing.mark_width", "superseded by bars_or_data_points.width");
            else width = *ss->mark_width;
          }
          if (ss->intra_group_spacing) {
            if (layout == SubChartType::grouped) gap = std::min(*ss->intra_group_spacing, 0.95);
            else warn(w, "size_and_spacing.intra_group_spacing", "bars are not grouped");
          }
        }
        const std::string fn = m.swapped ? "barh" : "bar";
        const std::string base_kw = m.swapped ? "left" : "bottom";
        py << "slot = float(np.min(np.diff(np.unique(x)))) if len(np.unique(x)) > 1 else 1.0\n"
           << "bar_width = slot * (1 - " << format_number(spacing) << ") * " << format_number(width) << "\n"
           << "for i, name in enumerate(names):\n"
           << "    vals = np.array(series[name], dtype=float)\n";
        switch (layout) {
          case SubChartType::grouped:
            py << "    sub = bar_width / len(names)\n"
               << "    pos = x - bar_width / 2 + sub * (i + 0.5)\n"
               << "    ax." << fn << "(pos, vals, sub * (1 - " << format_number(gap) << "), label=name, hatch="
               << hatch << ")\n";
            break;
          case SubChartType::stacked:
            py << "    vals = np.nan_to_num(vals)\n"
               << "    ax." << fn << "(x, vals, bar_width, " << base_kw << "=base, label=name, hatch=" << hatch
               << ")\n"
               << "    base += vals\n";
            break;
          case SubChartType::simple:
            py << "    ax." << fn << "(x, vals, bar_width, label=name, hatch=" << hatch
               << ", alpha=0.7 if len(names) > 1 else 1.0)\n";
            break;
        }
      } else {
        if (layout == SubChartType::grouped)
          warn(w, "sub_chart_type", "grouped " + std::string(to_string(type)) + " series are drawn overlapping");
        const bool stacked = layout == SubChartType::stacked;
        py << "for name in names:\n"
           << "    vals = np.array(series[name], dtype=float)\n";
        if (stacked) py << "    vals = base + np.nan_to_num(vals)\n";
        const std::string a = m.swapped ? "vals, x" : "x, vals";
        if (type == ChartType::line) {
          py << "    ax.plot(" << a << ", marker=\"o\", label=name)\n";
        } else if (type == ChartType::scatter) {
          py << "    ax.scatter(" << a << ", label=name)\n";
        } else {
          const std::string fill = m.swapped ? "fill_betweenx" : "fill_between";
          py << "    ax." << fill << "(x, base, vals, alpha=" << (stacked ? "0.8" : "0.4") << ", label=name)\n";
        }
        if (stacked) py << "    base = vals\n";
      }
      (void)grouped_with_sub;
      if (data.positional) {
        py << "ax.set_" << cat_ax << "ticks(x)\n"
           << "ax.set_" << cat_ax << "ticklabels([str(c) for c in categories])\n";
      }
    }
  }

  // text
  const auto& te = s.text_elements;
  if (te.title) {
    if (te.title->empty()) warn(w, "text_elements.title", "empty title is not rendered");
    else py << "ax.set_title(" << quote(*te.title) << ")\n";
  }
  if (pie) {
    if (te.x_axis_label) warn(w, "text_elements.x_axis_label", "pie charts have no axes");
    if (te.y_axis_label) warn(w, "text_elements.y_axis_label", "pie charts have no axes");
  } else {
    if (te.x_axis_label) py << "ax.set_xlabel(" << quote(*te.x_axis_label) << ")\n";
    if (te.y_axis_label) py << "ax.set_ylabel(" << quote(*te.y_axis_label) << ")\n";
  }
  if (te.annotations) {
    for (std::size_t i = 0; i < te.annotations->size(); ++i)
      py << "ax.annotate(" << quote((*te.annotations)[i]) << ", xy=(0.01, " << format_number(0.97 - 0.05 * double(i))
         << "), xycoords=\"axes fraction\", va=\"top\", fontsize=9)\n";
  }

  // axes
  if (s.axes && !pie) {
    for (const std::string d : {"x", "y"}) {
      const AxisSpec& a = d == "x" ? s.axes->x : s.axes->y;
      const std::string path = "axes." + d;
      const bool is_cat = d == cat_ax && !hist;
      if (is_cat && a.kind == AxisKind::categorical) continue;  // applied as category order
      if (a.kind == AxisKind::categorical) {
        warn(w, path, "categorical domain on a continuous axis");
      } else if (is_cat && positional_cat) {
        warn(w, path, "numeric range on a discrete axis");
      } else {
        py << "ax.set_" << d << "lim(" << format_number(a.range->min) << ", " << format_number(a.range->max) << ")\n";
      }
    }
  }

  // grid
  if (s.grid_lines && !pie) {
    for (const auto& [count, d, name] :
         {std::tuple{s.grid_lines->horizontal, std::string("y"), std::string("horizontal")},
          std::tuple{s.grid_lines->vertical, std::string("x"), std::string("vertical")}}) {
      if (!count) continue;
      const bool discrete = d == cat_ax && positional_cat && !hist;
      if (*count > 0 && discrete) {
        warn(w, "grid_lines." + name, "lines follow the category ticks");
        py << "ax." << d << "axis.grid(True)\n";
      } else if (*count > 0) {
        py << "ax." << d << "axis.set_major_locator(MaxNLocator(nbins=" << *count << "))\n"
           << "ax." << d << "axis.grid(True)\n";
      } else {
        py << "ax." << d << "axis.grid(False)\n";
      }
    }
  }

  // legend
  static const std::map<LegendPosition, std::string> kLoc{{LegendPosition::top, "upper center"},
                                                          {LegendPosition::bottom, "lower center"},
                                                          {LegendPosition::left, "center left"},
                                                          {LegendPosition::right, "center right"},
                                                          {LegendPosition::none, "best"}};
  detail::hidden_legend_warnings(s, w);
  if (const auto& lg = s.legend) {
    if (lg->visible) {
      py << "handles, labels = ax.get_legend_handles_labels()\n";
      if (!lg->labels.empty()) {
        py << "labels = [" << join(lg->labels, quote) << "]\n"
           << "handles = handles[: len(labels)]\n";
      }
      py << "ax.legend(handles, labels, loc=" << quote(kLoc.at(lg->position.value_or(LegendPosition::none))) << ")\n";
    }
  } else if (!pie) {
    py << "if len(ax.get_legend_handles_labels()[0]) > 1:\n    ax.legend()\n";
  }

  py << "\nfig.tight_layout()\n"
     << "fig.savefig(sys.argv[1] if len(sys.argv) > 1 else \"chart.png\", dpi=150)\n";
  return py.str();
}

// ---- ggplot2 -------------------------------------------------------------

std::string r_cell(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (auto* s = std::get_if<std::string>(&c)) return quote(*s);
  return "NA";
}

std::string r_vec(const std::vector<std::string>& v) { return "c(" + join(v, quote) + ")"; }

std::string emit_ggplot2(const PlotModel& m, std::vector<std::string>& w) {
  const DesignSpec& s = m.spec;
  const ChartType type = s.chart_type;
  const bool pie = type == ChartType::pie, box = type == ChartType::box, hist = type == ChartType::histogram,
             bar = type == ChartType::bar;
  const bool colour_aes = type == ChartType::line || type == ChartType::scatter;
  const std::string fill = colour_aes ? "colour" : "fill";
  orientation_warnings(m, w);

  // Long data frame: category, series, value.
  std::vector<std::string> cat_col, ser_col, val_col;
  bool numeric_category = !m.category_is_series && m.kinds[*m.category_col] == ColumnKind::numeric;
  const AxisSpec* cat_spec = pie ? nullptr : axis_for(s, category_axis(m));
  const bool discrete_order = cat_spec && cat_spec->kind == AxisKind::categorical && !hist;
  if (discrete_order) numeric_category = false;
  for (const auto& row : m.table->rows) {
    for (auto c : m.value_cols) {
      if (!m.category_is_series && is_empty(row[*m.category_col])) continue;
      if (m.category_is_series) cat_col.push_back(quote(m.names[c]));
      else if (numeric_category) cat_col.push_back(r_cell(row[*m.category_col]));
      else cat_col.push_back(quote(cell_text(row[*m.category_col])));
      ser_col.push_back(quote(m.names[c]));
      val_col.push_back(r_cell(row[c]));
    }
  }
  auto id = [](const std::string& x) { return x; };

  std::ostringstream r;
  r << "#!/usr/bin/env Rscript\n"
    << "# " << to_string(type) << " chart rendered with ggplot2.\n"
    << "library(ggplot2)\n\n"
    << "args <- commandArgs(trailingOnly = TRUE)\n"
    << "out <- if (length(args) > 0) args[[1]] else \"chart.png\"\n\n"
    << "df <- data.frame(\n"
    << "  category = c(" << join(cat_col, id) << "),\n"
    << "  series = c(" << join(ser_col, id) << "),\n"
    << "  value = c(" << join(val_col, id) << "),\n"
    << "  stringsAsFactors = FALSE\n)\n";
  {
    std::vector<std::string> series_names;
    for (auto c : m.value_cols) series_names.push_back(m.names[c]);
    r << "df$series <- factor(df$series, levels = " << r_vec(series_names) << ")\n";
  }
  if (discrete_order) {
    auto levels = *cat_spec->categories;
    const auto extra = unlisted_categories(m, cat_spec->categories);
    warn_unlisted(extra, w);
    levels.insert(levels.end(), extra.begin(), extra.end());
    r << "df$category <- factor(df$category, levels = " << r_vec(levels) << ")\n";
  }
  else if (!numeric_category) r << "df$category <- factor(df$category, levels = unique(df$category))\n";
  r << "\n";

  const SubChartType layout = effective_layout(s);
  const std::string position = layout == SubChartType::stacked ? "\"stack\""
                               : layout == SubChartType::grouped ? "\"dodge\""
                                                                 : "\"identity\"";
  std::vector<std::string> layers;

  if (pie) {
    if (s.sub_chart_type) warn(w, "sub_chart_type", "no distinct rendering for pie charts");
    r << "df <- df[df$series == levels(df$series)[1], ]\n";
    layers.push_back("ggplot(df, aes(x = \"\", y = value, fill = category))");
    layers.push_back("geom_col(width = 1)");
    layers.push_back("coord_polar(theta = \"y\")");
    layers.push_back("theme_void()");
  } else if (hist) {
    layers.push_back("ggplot(df, aes(x = value, fill = series))");
    layers.push_back("geom_histogram(bins = 30, position = " + position +
                     (layout == SubChartType::simple ? ", alpha = 0.5" : "") + ")");
  } else if (box) {
    if (s.sub_chart_type) warn(w, "sub_chart_type", "no distinct rendering for box charts");
    std::string args;
    if (const auto& bs = s.boxplot_style) {
      if (bs->whisker_rule) {
        const auto rule = detail::parse_whisker_rule(*bs->whisker_rule);
        if (!rule) warn(w, "boxplot_style.whisker_rule", "unrecognised rule; default whiskers used");
        else args += "coef = " + (rule->iqr_multiple ? format_number(*rule->iqr_multiple) : std::string("Inf")) + ", ";
      }
      if (bs->outlier_marker_visible && !*bs->outlier_marker_visible) args += "outlier.shape = NA, ";
    }
    std::optional<double> width;
    double band = 1.0;
    if (const auto& bd = s.bars_or_data_points) {
      if (bd->width) width = bd->width;
      if (bd->spacing) band = std::max(0.05, 1.0 - *bd->spacing);
      if (bd->alignment && *bd->alignment == MarkLayout::stacked)
        warn(w, "bars_or_data_points.alignment", "stacked box plots are not supported");
      if (bd->pattern && *bd->pattern != Pattern::solid)
        warn(w, "bars_or_data_points.pattern", "patterned fills need an extension package");
    }
    if (const auto& ss = s.size_and_spacing) {
      if (ss->mark_width && !width) width = ss->mark_width;
      else if (ss->mark_width) warn(w, "size_and_spacing.mark_width", "superseded by bars_or_data_points.width");
      if (ss->intra_group_spacing) {
        if (m.value_cols.size() > 1) args += "position = position_dodge2(padding = " + format_number(*ss->intra_group_spacing) + "), ";
        else warn(w, "size_and_spacing.intra_group_spacing", "boxes are not grouped");
      }
    }
    if (width || band < 1.0) args += "width = " + format_number(band * width.value_or(0.75)) + ", ";
    if (!args.empty()) args.resize(args.size() - 2);
    layers.push_back("ggplot(df, aes(x = category, y = value, fill = series))");
    layers.push_back("geom_boxplot(" + args + ")");
    if (s.boxplot_style && s.boxplot_style->mean_marker.value_or(false))
      layers.push_back(
          "stat_summary(fun = mean, geom = \"point\", shape = 4, size = 3, position = position_dodge(width = 0.75))");
  } else {
    const std::string group = numeric_category ? "" : ", group = series";
    layers.push_back("ggplot(df, aes(x = category, y = value, " + fill + " = series" + group + "))");
    if (bar) {
      double width = 0.9;
      if (const auto& bd = s.bars_or_data_points) {
        if (bd->alignment) warn(w, "bars_or_data_points.alignment", "layout is rendered from sub_chart_type");
        double band = bd->spacing ? std::max(0.05, 1.0 - *bd->spacing) : 0.9;
        width = band * bd->width.value_or(1.0);
        if (bd->pattern && *bd->pattern != Pattern::solid)
          warn(w, "bars_or_data_points.pattern", "patterned fills need an extension package");
      }
      std::string pos = position;
      if (const auto& ss = s.size_and_spacing) {
        if (ss->mark_width) warn(w, "size_and_spacing.mark_width", "bar width follows bars_or_data_points.width");
        if (ss->intra_group_spacing) {
          if (layout == SubChartType::grouped)
            pos = "position_dodge2(padding = " + format_number(*ss->intra_group_spacing) + ")";
          else warn(w, "size_and_spacing.intra_group_spacing", "bars are not grouped");
        }
      }
      layers.push_back("geom_col(position = " + pos + ", width = " + format_number(width) +
                       (layout == SubChartType::simple ? ", alpha = 0.7" : "") + ")");
    } else if (type == ChartType::line) {
      if (layout == SubChartType::grouped) warn(w, "sub_chart_type", "grouped line series are drawn overlapping");
      layers.push_back(std::string("geom_line(position = ") + (layout == SubChartType::stacked ? "\"stack\"" : "\"identity\"") + ")");
    } else if (type == ChartType::area) {
      if (layout == SubChartType::grouped) warn(w, "sub_chart_type", "grouped area series are drawn overlapping");
      layers.push_back(std::string("geom_area(position = ") + (layout == SubChartType::stacked ? "\"stack\"" : "\"identity\", alpha = 0.4") + ")");
    } else {
      std::string pos = layout == SubChartType::stacked ? "\"stack\"" : layout == SubChartType::grouped ? "position_dodge(width = 0.5)" : "\"identity\"";
      layers.push_back("geom_point(position = " + pos + ")");
    }
  }

  // Aesthetic x is the category (value for histograms); coord_flip swaps
  // the display, so displayed axes map back to aesthetics here.
  auto aes_of = [&](const std::string& displayed) {
    if (!m.swapped) return displayed;
    return std::string(displayed == "x" ? "y" : "x");
  };
  auto aes_discrete = [&](const std::string& aes) { return aes == "x" && !hist && !numeric_category; };

  // labels
  const auto& te = s.text_elements;
  std::vector<std::string> labs;
  if (te.title) {
    if (te.title->empty()) warn(w, "text_elements.title", "empty title is not rendered");
    else labs.push_back("title = " + quote(*te.title));
  }
  if (te.annotations) {
    std::string joined;
    for (std::size_t i = 0; i < te.annotations->size(); ++i) joined += (i ? "\n" : "") + (*te.annotations)[i];
    labs.push_back("subtitle = " + quote(joined));
  }
  if (pie) {
    if (te.x_axis_label) warn(w, "text_elements.x_axis_label", "pie charts have no axes");
    if (te.y_axis_label) warn(w, "text_elements.y_axis_label", "pie charts have no axes");
  } else {
    if (te.x_axis_label) labs.push_back(aes_of("x") + " = " + quote(*te.x_axis_label));
    if (te.y_axis_label) labs.push_back(aes_of("y") + " = " + quote(*te.y_axis_label));
  }
  if (!labs.empty()) layers.push_back("labs(" + join(labs, [](const std::string& x) { return x; }) + ")");

  // scales and grids
  std::map<std::string, std::vector<std::string>> cont_args;  // aesthetic -> scale_*_continuous args
  std::vector<std::string> theme_args;
  if (!pie) {
    if (s.axes) {
      for (const std::string d : {"x", "y"}) {
        const AxisSpec& a = d == "x" ? s.axes->x : s.axes->y;
        const std::string aes = aes_of(d);
        if (a.kind == AxisKind::categorical) {
          if (aes_discrete(aes) && discrete_order) continue;  // factor levels carry the order
          warn(w, "axes." + d, "categorical domain on a continuous axis");
        } else if (aes_discrete(aes)) {
          warn(w, "axes." + d, "numeric range on a discrete axis");
        } else {
          cont_args[aes].push_back("limits = c(" + format_number(a.range->min) + ", " + format_number(a.range->max) + ")");
        }
      }
    }
    if (s.grid_lines) {
      for (const auto& [count, d, name] :
           {std::tuple{s.grid_lines->horizontal, std::string("y"), std::string("horizontal")},
            std::tuple{s.grid_lines->vertical, std::string("x"), std::string("vertical")}}) {
        if (!count) continue;
        const std::string aes = aes_of(d);
        if (*count == 0) {
          theme_args.push_back("panel.grid.major." + d + " = element_blank()");
          theme_args.push_back("panel.grid.minor." + d + " = element_blank()");
        } else if (aes_discrete(aes)) {
          warn(w, "grid_lines." + name, "lines follow the category ticks");
        } else {
          cont_args[aes].push_back("n.breaks = " + std::to_string(*count));
        }
      }
    }
  }
  for (const auto& [aes, args] : cont_args)
    layers.push_back("scale_" + aes + "_continuous(" + join(args, [](const std::string& x) { return x; }) + ")");

  detail::hidden_legend_warnings(s, w);
  if (const auto& lg = s.legend) {
    if (!lg->visible) theme_args.push_back("legend.position = \"none\"");
    else if (lg->position && *lg->position != LegendPosition::none)
      theme_args.push_back("legend.position = " + quote(std::string(to_string(*lg->position))));
    if (!lg->labels.empty()) layers.push_back("scale_" + fill + "_discrete(labels = " + r_vec(lg->labels) + ")");
  }
  if (m.swapped) layers.push_back("coord_flip()");
  if (!theme_args.empty()) layers.push_back("theme(" + join(theme_args, [](const std::string& x) { return x; }) + ")");

  r << "p <- " << join(layers, [](const std::string& x) { return x; }, " +\n  ") << "\n\n"
    << "ggsave(out, p, width = 8, height = 5, dpi = 150)\n";
  return r.str();
}

// ---- Altair --------------------------------------------------------------

std::string altair_kwargs(const Json& obj, const std::set<std::string>& skip = {}) {
  static const std::map<std::string, std::string> kWrap{
      {"scale", "alt.Scale"}, {"axis", "alt.Axis"}, {"legend", "alt.Legend"}};
  std::vector<std::string> parts;
  for (const auto& [k, v] : obj.items()) {
    if (skip.count(k)) continue;
    auto it = kWrap.find(k);
    if (it != kWrap.end() && v.is_object()) parts.push_back(k + "=" + it->second + "(" + altair_kwargs(v) + ")");
    else parts.push_back(k + "=" + py_literal(v));
  }
  return join(parts, [](const std::string& x) { return x; });
}

std::string emit_altair(const PlotModel& m, std::vector<std::string>& w) {
  const Json doc = detail::build_vegalite(m, w);
  static const std::map<std::string, std::string> kChannel{{"x", "alt.X"},         {"y", "alt.Y"},
                                                           {"color", "alt.Color"}, {"theta", "alt.Theta"},
                                                           {"xOffset", "alt.XOffset"}, {"yOffset", "alt.YOffset"}};
  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
     << "\"\"\"" << to_string(m.spec.chart_type) << " chart rendered with Altair.\"\"\"\n"
     << "import sys\n\n"
     << "import altair as alt\n\n";
  py << "values = [\n";
  for (const auto& row : doc["data"]["values"]) py << "    " << py_literal(row) << ",\n";
  py << "]\n\n";

  const Json& mark = doc["mark"];
  std::string mark_fn = mark["type"].get<std::string>();
  py << "chart = (\n    alt.Chart(alt.Data(values=values))\n";
  for (const auto& t : doc["transform"])
    py << "    .transform_fold(" << py_literal(t["fold"]) << ", as_=" << py_literal(t["as"]) << ")\n";
  py << "    .mark_" << mark_fn << "(" << altair_kwargs(mark, {"type"}) << ")\n";
  py << "    .encode(\n";
  for (const auto& [ch, spec] : doc["encoding"].items())
    py << "        " << ch << "=" << kChannel.at(ch) << "(" << altair_kwargs(spec) << "),\n";
  py << "    )\n";
  if (doc.contains("title")) {
    const Json& t = doc["title"];
    if (t.is_string()) py << "    .properties(title=" << py_literal(t) << ")\n";
    else py << "    .properties(title=alt.TitleParams(" << altair_kwargs(t) << "))\n";
  }
  py << ")\n\n"
     << "chart.save(sys.argv[1] if len(sys.argv) > 1 else \"chart.html\")\n";
  return py.str();
}

}  // namespace

EmitResult emit_script(const DesignSpec& spec, const DataTable& table, Backend backend) {
  if (backend == Backend::vegalite) throw PreconditionError("emit_script: use emit_vegalite for Vega-Lite");
  const PlotModel model = detail::build_plot_model(spec, table);
  EmitResult r;
  r.backend = backend;
  if (backend == Backend::altair) {
    r.content = emit_altair(model, r.warnings);
    return r;
  }
  r.warnings = model.data_warnings;
  r.content = backend == Backend::matplotlib ? emit_matplotlib(model, r.warnings) : emit_ggplot2(model, r.warnings);
  return r;
}

}  // namespace chartdesign
