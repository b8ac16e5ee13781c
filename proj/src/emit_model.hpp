#pragma once

// Backend-neutral view of a (spec, table) pair shared by all emitters.

#include <optional>
#include <string>
#include <vector>

#include "chartdesign/emitters.hpp"

namespace chartdesign::detail {

struct PlotModel {
  DesignSpec spec;  // normalized
  const DataTable* table = nullptr;
  std::vector<ColumnKind> kinds;
  std::vector<std::string> names;  // column names: unique and non-empty

  /// Category/domain sits on the vertical axis. Bar, box and histogram
  /// charts are upright when vertical; line, area and scatter charts run
  /// left to right when horizontal.
  bool swapped = false;

  std::optional<std::size_t> category_col;
  std::vector<std::size_t> value_cols;
  /// Box plots over purely numeric tables and histograms use the series
  /// name as their category.
  bool category_is_series = false;

  std::string series_field = "series";
  std::string value_field = "value";
  std::vector<std::string> data_warnings;

  const std::string& category_name() const {
    return category_is_series ? series_field : names[*category_col];
  }
};

/// Throws SpecError (invalid spec) or EmitError (unusable table).
PlotModel build_plot_model(const DesignSpec& spec, const DataTable& table);

/// Position and labels of a hidden legend cannot be shown by any backend.
void hidden_legend_warnings(const DesignSpec& spec, std::vector<std::string>& warnings);

/// Parsed whisker rule: nullopt extent means min-max.
struct WhiskerRule {
  std::optional<double> iqr_multiple;
  std::string canonical;  // "min-max" or "<k>*IQR"
};
std::optional<WhiskerRule> parse_whisker_rule(const std::string& text);

}  // namespace chartdesign::detail
