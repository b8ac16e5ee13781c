#include "chartdesign/tabular.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <regex>

#include "chartdesign/error.hpp"
#include "chartdesign/random.hpp"
#include "chartdesign/synonyms.hpp"

namespace chartdesign {

namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

struct Record {
  std::vector<Field> fields;
  std::string raw;        // source text of the record, without the newline
  bool multiline = false;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

// Splits the whole document into records, honouring quoted fields that span
// lines. Line endings are normalised to \n first.
std::vector<Record> tokenize(std::string_view input) {
  std::string text;
  text.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] == '\r') {
      text.push_back('\n');
      if (i + 1 < input.size() && input[i + 1] == '\n') ++i;
    } else {
      text.push_back(input[i]);
    }
  }

  std::vector<Record> records;
  Record rec;
  Field field;
  bool in_quotes = false;
  bool after_quote = false;  // closing quote seen; only separators may follow
  std::size_t record_start = 0;

  auto end_field = [&] {
    if (!field.quoted) field.text = std::string(trim(field.text));
    rec.fields.push_back(std::move(field));
    field = Field{};
    after_quote = false;
  };
  auto end_record = [&](std::size_t pos) {
    end_field();
    rec.raw = text.substr(record_start, pos - record_start);
    records.push_back(std::move(rec));
    rec = Record{};
    record_start = pos + 1;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.text.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') rec.multiline = true;
        field.text.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_record(i);
    } else if (c == '"' && !after_quote && trim(field.text).empty() && !field.quoted) {
      field.text.clear();
      field.quoted = true;
      in_quotes = true;
    } else if (after_quote) {
      // Stray text after a closing quote is kept verbatim.
      field.text.push_back(c);
    } else {
      field.text.push_back(c);
    }
  }
  if (record_start < text.size() || !rec.fields.empty() || !field.text.empty() || field.quoted)
    end_record(text.size());
  return records;
}

const std::regex& label_pattern() {
  static const std::regex re(R"(^\s*chart\s*(\d+)\s*:\s*(.*)$)", std::regex::icase);
  return re;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

Cell to_cell(const Field& f) {
  if (f.quoted) return f.text;
  if (f.text.empty()) return EmptyCell{};
  if (auto n = parse_number(f.text)) return *n;
  return f.text;
}

bool year_like(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return std::floor(*d) == *d && *d >= 1000 && *d <= 2999;
  return false;
}

bool field_is_number(const Field& f) { return !f.quoted && parse_number(f.text).has_value(); }

// Decides whether the first record of a block is a header row. Each column
// whose body is numeric votes: a numeric first cell suggests data, a text
// first cell suggests a header. Year-like first cells above non-year bodies
// are treated as header labels ("Country,2019,2020").
bool first_record_is_header(const std::vector<Record>& recs) {
  const auto& first = recs.front().fields;
  if (recs.size() == 1) {
    return !std::any_of(first.begin(), first.end(), field_is_number);
  }
  int header_votes = 0;
  int data_votes = 0;
  for (std::size_t c = 0; c < first.size(); ++c) {
    std::size_t nonempty = 0, numeric = 0, years = 0;
    for (std::size_t r = 1; r < recs.size(); ++r) {
      if (c >= recs[r].fields.size()) continue;
      const Cell cell = to_cell(recs[r].fields[c]);
      if (is_empty(cell)) continue;
      ++nonempty;
      if (is_number(cell)) ++numeric;
      if (year_like(cell)) ++years;
    }
    if (nonempty == 0 || numeric != nonempty) continue;
    const Cell head = to_cell(first[c]);
    if (is_number(head)) {
      if (year_like(head) && years != nonempty) ++header_votes;
      else ++data_votes;
    } else if (is_text(head)) {
      ++header_votes;
    }
  }
  return data_votes <= header_votes;
}

std::string synthesized_header(std::size_t index) { return "column_" + std::to_string(index + 1); }

DataTable build_table(std::string name, const std::vector<Record>& recs,
                      std::vector<std::string>& warnings) {
  DataTable t;
  t.name = std::move(name);
  const std::string label = t.name.empty() ? std::string("table") : t.name;

  std::size_t body_start = 0;
  if (first_record_is_header(recs)) {
    for (const auto& f : recs.front().fields) t.headers.push_back(f.text);
    body_start = 1;
  } else {
    t.headerless = true;
    warnings.push_back(label + ": no header row detected; columns named column_1..column_n");
  }

  std::size_t width = t.headers.size();
  for (std::size_t r = body_start; r < recs.size(); ++r) width = std::max(width, recs[r].fields.size());
  if (t.headerless) {
    for (std::size_t c = 0; c < width; ++c) t.headers.push_back(synthesized_header(c));
  } else if (width > t.headers.size()) {
    warnings.push_back(label + ": rows wider than the header; added " +
                       std::to_string(width - t.headers.size()) + " column(s)");
    for (std::size_t c = t.headers.size(); c < width; ++c) t.headers.push_back(synthesized_header(c));
  }

  for (std::size_t r = body_start; r < recs.size(); ++r) {
    std::vector<Cell> row;
    row.reserve(width);
    for (const auto& f : recs[r].fields) row.push_back(to_cell(f));
    if (row.size() < width) {
      warnings.push_back(label + ": row " + std::to_string(r + 1 - body_start) + " has " +
                         std::to_string(row.size()) + " of " + std::to_string(width) +
                         " cells; padded with empty cells");
      row.resize(width, EmptyCell{});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

CsvBundle parse_csv_bundle(std::string_view text) {
  struct Block {
    std::string name;
    std::vector<Record> records;
  };
  std::vector<Block> blocks(1);

  for (auto& rec : tokenize(text)) {
    if (!rec.multiline && (rec.fields.empty() || !rec.fields.front().quoted)) {
      std::smatch m;
      if (std::regex_match(rec.raw, m, label_pattern())) {
        blocks.push_back(Block{"Chart " + m[1].str(), {}});
        const std::string rest = m[2].str();
        if (!is_blank(rest)) {
          for (auto& r : tokenize(rest)) blocks.back().records.push_back(std::move(r));
        }
        continue;
      }
    }
    if (!rec.multiline && is_blank(rec.raw)) continue;
    blocks.back().records.push_back(std::move(rec));
  }

  CsvBundle out;
  for (auto& b : blocks) {
    if (b.records.empty()) {
      if (!b.name.empty()) out.warnings.push_back(b.name + ": empty block skipped");
      continue;
    }
    out.tables.push_back(build_table(b.name, b.records, out.warnings));
  }
  if (out.tables.empty()) throw Error("no table found in CSV input");
  return out;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

namespace {

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  if (s.find_first_of(",\"\n\r") != std::string::npos) return true;
  if (s.front() == ' ' || s.front() == '\t' || s.back() == ' ' || s.back() == '\t') return true;
  if (parse_number(s)) return true;
  return std::regex_match(s, label_pattern());
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

std::string encode(const Cell& cell) {
  if (is_empty(cell)) return {};
  if (auto* d = std::get_if<double>(&cell)) return format_number(*d);
  const auto& s = std::get<std::string>(cell);
  return needs_quotes(s) ? quote(s) : s;
}

std::string encode_header(const std::string& h) { return needs_quotes(h) ? quote(h) : h; }

std::vector<std::string> body_lines(const DataTable& table) {
  std::vector<std::string> lines;
  for (const auto& row : table.rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += ',';
      line += encode(row[c]);
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

std::string serialize_csv(const DataTable& table) {
  std::string out;
  if (!table.headerless) {
    for (std::size_t c = 0; c < table.headers.size(); ++c) {
      if (c) out += ',';
      out += encode_header(table.headers[c]);
    }
    out += '\n';
  }
  for (const auto& line : body_lines(table)) {
    out += line;
    out += '\n';
  }
  return out;
}

std::string serialize_csv_bundle(const std::vector<DataTable>& tables) {
  std::string out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out += '\n';
    if (!tables[i].name.empty()) out += tables[i].name + ":\n";
    out += serialize_csv(tables[i]);
  }
  return out;
}

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::temporal: return "temporal";
  }
  return "?";
}

namespace {

bool date_like_text(const std::string& s) {
  static const std::regex re(
      R"(^\s*(\d{4}-\d{1,2}(-\d{1,2})?|\d{1,2}/\d{1,2}/\d{2,4}|)"
      R"((jan|feb|mar|apr|may|jun|jul|aug|sep|sept|oct|nov|dec)[a-z]*\.?(\s+\d{1,2},?)?(\s+\d{2,4})?|)"
      R"(q[1-4]\s*'?\d{2,4}|\d{4}\s*q[1-4]|fy\s*'?\d{2,4})\s*$)",
      std::regex::icase);
  return std::regex_match(s, re);
}

bool time_like_header(const std::string& header) {
  static const std::array<std::string_view, 11> words{"year",  "years", "date",   "month", "quarter",
                                                      "time",  "day",   "week",   "period", "decade",
                                                      "dates"};
  const std::string norm = normalize_text(header);
  std::size_t start = 0;
  while (start <= norm.size()) {
    auto end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    const std::string_view word(norm.data() + start, end - start);
    if (std::find(words.begin(), words.end(), word) != words.end()) return true;
    start = end + 1;
  }
  return false;
}

}  // namespace

std::vector<ColumnKind> infer_column_kinds(const DataTable& table) {
  std::vector<ColumnKind> kinds;
  for (std::size_t c = 0; c < table.columns(); ++c) {
    std::size_t nonempty = 0, numeric = 0, years = 0, dates = 0, texts = 0;
    for (const auto& row : table.rows) {
      const Cell& cell = row[c];
      if (is_empty(cell)) continue;
      ++nonempty;
      if (is_number(cell)) {
        ++numeric;
        if (year_like(cell)) ++years;
      } else {
        ++texts;
        if (date_like_text(std::get<std::string>(cell))) ++dates;
      }
    }
    ColumnKind kind = ColumnKind::categorical;
    const bool header_time = !table.headerless && time_like_header(table.headers[c]);
    if (nonempty > 0 && dates == nonempty) {
      kind = ColumnKind::temporal;
    } else if (nonempty > 0 && header_time && (years == nonempty || texts == nonempty)) {
      kind = ColumnKind::temporal;
    } else if (nonempty > 0 && numeric * 10 >= nonempty * 9) {
      kind = ColumnKind::numeric;
    }
    kinds.push_back(kind);
  }
  return kinds;
}

namespace {

// floor(fraction * n), absorbing representation error such as 0.1 * 30.
std::size_t floor_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

// Partial Fisher-Yates: k distinct picks from `pool`, in draw order.
template <typename T>
std::vector<T> choose(std::vector<T> pool, std::size_t k, Rng& rng) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

DataTable perturb_missing(const DataTable& table, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 0.10))
    throw PreconditionError("missing-cell fraction must lie in [0, 0.10]");
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    for (std::size_t c = 0; c < table.rows[r].size(); ++c)
      if (!is_empty(table.rows[r][c])) candidates.emplace_back(r, c);

  Rng rng(seed);
  DataTable out = table;
  for (const auto& [r, c] : choose(std::move(candidates), floor_count(fraction, table.cell_count()), rng))
    out.rows[r][c] = EmptyCell{};
  return out;
}

DataTable perturb_outliers(const DataTable& table, double fraction, std::uint64_t seed,
                           const OutlierOptions& options) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw PreconditionError("outlier fraction must lie in [0, 1]");
  std::vector<std::pair<std::size_t, std::size_t>> numeric;
  std::vector<double> lo(table.columns(), INFINITY), hi(table.columns(), -INFINITY);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      if (auto* d = std::get_if<double>(&table.rows[r][c])) {
        numeric.emplace_back(r, c);
        lo[c] = std::min(lo[c], *d);
        hi[c] = std::max(hi[c], *d);
      }
    }
  }
  if (numeric.empty()) throw PreconditionError("table has no numeric cells to perturb");

  Rng rng(seed);
  DataTable out = table;
  const std::size_t k = floor_count(fraction, numeric.size());
  for (const auto& [r, c] : choose(std::move(numeric), k, rng)) {
    double a = options.scale * lo[c];
    double b = options.scale * hi[c];
    if (a > b) std::swap(a, b);
    out.rows[r][c] = a + (b - a) * rng.unit();
  }
  return out;
}

std::string perturb_format(const DataTable& table, std::uint64_t seed) {
  Rng rng(seed);
  const auto lines = body_lines(table);
  const std::size_t blanks = 1 + static_cast<std::size_t>(rng.below(3));
  // blank_before[i]: blank lines emitted before body line i (i == size: at the end).
  std::vector<std::size_t> blank_before(lines.size() + 1, 0);
  for (std::size_t b = 0; b < blanks; ++b) ++blank_before[rng.below(lines.size() + 1)];

  std::string out;
  for (std::size_t i = 0; i <= lines.size(); ++i) {
    out.append(blank_before[i], '\n');
    if (i < lines.size()) {
      out += lines[i];
      out += '\n';
    }
  }
  return out;
}

DataTable mask_numeric(const DataTable& table) {
  DataTable out = table;
  for (auto& row : out.rows)
    for (auto& cell : row)
      if (is_number(cell)) cell = std::string(kMaskToken);
  return out;
}

}  // namespace chartdesign
