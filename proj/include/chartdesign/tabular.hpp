#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chartdesign {

/// An empty cell (nothing between the separators). A quoted "" is text.
struct EmptyCell {
  bool operator==(const EmptyCell&) const = default;
};

/// Numbers are finite doubles.
using Cell = std::variant<EmptyCell, double, std::string>;

inline bool is_empty(const Cell& c) { return std::holds_alternative<EmptyCell>(c); }
inline bool is_number(const Cell& c) { return std::holds_alternative<double>(c); }
inline bool is_text(const Cell& c) { return std::holds_alternative<std::string>(c); }

struct DataTable {
  std::string name;  // "Chart 1", or empty for an unlabeled document
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;
  /// Set when the block had no header row; headers are then synthesized as
  /// column_1 .. column_n and are not written back out.
  bool headerless = false;

  std::size_t columns() const { return headers.size(); }
  std::size_t cell_count() const { return headers.size() * rows.size(); }
  bool operator==(const DataTable&) const = default;
};

struct CsvBundle {
  std::vector<DataTable> tables;
  std::vector<std::string> warnings;
};

/// Splits a document on `Chart <n>:` label lines and parses each block as
/// comma-separated values. Blank lines are ignored. Short rows are padded
/// with empty cells and long rows widen the table; both emit warnings.
/// Throws chartdesign::Error when no table can be parsed.
CsvBundle parse_csv_bundle(std::string_view text);

/// CSV text for one table: header row (unless headerless) then body rows.
/// Text that would otherwise read back differently is quoted.
std::string serialize_csv(const DataTable& table);

/// Several tables, each preceded by its `Chart <n>:` label when named and
/// separated by one blank line.
std::string serialize_csv_bundle(const std::vector<DataTable>& tables);

std::string format_number(double value);

enum class ColumnKind { numeric, categorical, temporal };
std::string_view to_string(ColumnKind kind);

/// Numeric: at least 90% of non-empty cells are numbers. Temporal: all
/// values look like dates, or a time-like header ("Year", "Date", ...) over
/// year-like integers or text. Everything else is categorical.
std::vector<ColumnKind> infer_column_kinds(const DataTable& table);

/// Sets floor(fraction * cell_count) distinct, previously non-empty body
/// cells to empty. fraction must lie in [0, 0.10].
DataTable perturb_missing(const DataTable& table, double fraction, std::uint64_t seed);

struct OutlierOptions {
  /// Replacements are drawn from Uniform(scale * column_min, scale * column_max).
  double scale = 10.0;
};

/// Replaces floor(fraction * numeric_cell_count) distinct numeric cells with
/// draws from the column's scaled range. Throws PreconditionError when the
/// table has no numeric cells or fraction is outside [0, 1].
DataTable perturb_outliers(const DataTable& table, double fraction, std::uint64_t seed,
                           const OutlierOptions& options = {});

/// Serializes without the header row and with 1 to 3 blank lines inserted
/// at seeded positions.
std::string perturb_format(const DataTable& table, std::uint64_t seed);

inline constexpr std::string_view kMaskToken = "<MASKED>";

/// Replaces every numeric body cell by kMaskToken.
DataTable mask_numeric(const DataTable& table);

}  // namespace chartdesign
