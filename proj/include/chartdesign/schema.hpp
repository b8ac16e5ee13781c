#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartdesign/error.hpp"

namespace chartdesign {

/// Documents are kept in insertion order so canonical key order survives.
using Json = nlohmann::ordered_json;

enum class ChartType { bar, line, area, scatter, pie, box, histogram };
enum class SubChartType { simple, grouped, stacked };
enum class Alignment { horizontal, vertical, other };
enum class LegendPosition { top, bottom, left, right, none };
enum class MarkLayout { grouped, stacked };
enum class Pattern { solid, striped, dotted };
enum class AxisKind { categorical, numeric };

inline constexpr ChartType kAllChartTypes[] = {
    ChartType::bar, ChartType::line,  ChartType::area,     ChartType::scatter,
    ChartType::pie, ChartType::box,   ChartType::histogram};

std::string_view to_string(ChartType v);
std::string_view to_string(SubChartType v);
std::string_view to_string(Alignment v);
std::string_view to_string(LegendPosition v);
std::string_view to_string(MarkLayout v);
std::string_view to_string(Pattern v);
std::string_view to_string(AxisKind v);

/// Resolves free text (canonical name or synonym, any case) to a chart type.
std::optional<ChartType> chart_type_from_string(std::string_view text);

struct TextElements {
  std::optional<std::string> title;
  std::optional<std::string> x_axis_label;
  std::optional<std::string> y_axis_label;
  std::optional<std::vector<std::string>> annotations;

  bool empty() const {
    return !title && !x_axis_label && !y_axis_label && !annotations;
  }
  bool operator==(const TextElements&) const = default;
};

struct NumericRange {
  double min = 0;
  double max = 0;
  bool operator==(const NumericRange&) const = default;
};

struct AxisSpec {
  AxisKind kind = AxisKind::categorical;
  std::optional<std::vector<std::string>> categories;
  std::optional<NumericRange> range;
  bool operator==(const AxisSpec&) const = default;
};

struct Axes {
  AxisSpec x;
  AxisSpec y;
  bool operator==(const Axes&) const = default;
};

struct Legend {
  bool visible = true;
  std::optional<LegendPosition> position;
  std::vector<std::string> labels;
  bool operator==(const Legend&) const = default;
};

/// Width and spacing are unitless fractions of one category slot.
struct MarkStyle {
  std::optional<MarkLayout> alignment;
  std::optional<double> width;
  std::optional<double> spacing;
  std::optional<Pattern> pattern;
  bool operator==(const MarkStyle&) const = default;
};

/// Counts are signed so that negative input survives parsing and is reported
/// by validate() as bad_range.
struct GridLines {
  std::optional<std::int64_t> horizontal;
  std::optional<std::int64_t> vertical;
  bool operator==(const GridLines&) const = default;
};

struct SizeAndSpacing {
  std::optional<double> mark_width;
  std::optional<double> intra_group_spacing;
  bool operator==(const SizeAndSpacing&) const = default;
};

struct BoxplotStyle {
  std::optional<std::string> whisker_rule;
  std::optional<bool> outlier_marker_visible;
  std::optional<bool> mean_marker;
  bool operator==(const BoxplotStyle&) const = default;
};

/// The hierarchical chart-design record. Optional members model keys that
/// may be omitted; an inapplicable key is represented by an empty optional,
/// never by a placeholder value.
struct DesignSpec {
  ChartType chart_type = ChartType::bar;
  std::optional<SubChartType> sub_chart_type;
  Alignment chart_alignment = Alignment::vertical;
  TextElements text_elements;
  std::optional<Axes> axes;
  std::optional<Legend> legend;
  std::optional<MarkStyle> bars_or_data_points;
  std::optional<GridLines> grid_lines;
  std::optional<SizeAndSpacing> size_and_spacing;
  std::optional<BoxplotStyle> boxplot_style;

  /// Paths of keys the parser did not recognise. Not part of the canonical
  /// form; normalize() clears them.
  std::vector<std::string> unknown_keys;

  bool operator==(const DesignSpec&) const = default;
};

enum class IssueCode { missing_required, inapplicable_key, bad_enum, bad_range, bad_type };
std::string_view to_string(IssueCode code);

struct ValidationIssue {
  std::string path;
  IssueCode code;
  std::string message;
  bool operator==(const ValidationIssue&) const = default;
};

/// Raised when a document cannot be turned into a DesignSpec (or cannot be
/// normalized); carries every issue found, ordered by path.
class SpecError : public Error {
 public:
  explicit SpecError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Top-level keys in canonical serialization order.
inline constexpr std::string_view kTopLevelKeys[] = {
    "chart_type", "sub_chart_type", "chart_alignment", "text_elements",
    "axes",       "legend",         "bars_or_data_points", "grid_lines",
    "size_and_spacing", "boxplot_style"};

/// Parses a design document. Enum strings are matched case-insensitively and
/// through the synonym table. Throws SyntaxError for malformed JSON and
/// SpecError for missing keys, wrong types and unknown enum values.
DesignSpec parse_design(std::string_view text);
DesignSpec parse_design(const Json& document);

/// Semantic checks: applicability, ranges, axis consistency. The result is
/// ordered by path and is empty iff the spec is valid.
std::vector<ValidationIssue> validate(const DesignSpec& spec);

/// Top-level keys permitted for a chart family.
std::set<std::string> applicability(ChartType type);

/// Top-level keys present in a spec.
std::set<std::string> present_keys(const DesignSpec& spec);

/// Canonical form: inapplicable keys and unknown keys dropped, empty
/// optional lists removed. Throws SpecError when any other issue remains.
DesignSpec normalize(const DesignSpec& spec);

/// JSON view of a spec with keys in canonical order. Absent optionals are
/// omitted; empty text_elements and empty legend labels are omitted.
Json to_json(const DesignSpec& spec);

/// Canonical text: 2-space indentation, canonical key order, trailing newline.
std::string serialize(const DesignSpec& spec);

}  // namespace chartdesign
