#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chartdesign {

/// Trim, lowercase, and collapse every run of whitespace or punctuation into
/// a single space. "  Bar-Chart!! " becomes "bar chart".
std::string normalize_text(std::string_view text);

/// Enum synonym table loaded from data/synonyms.json (compiled in).
///
/// Each category maps canonical enum values to accepted aliases. Lookups
/// normalize their input with normalize_text first, so matching is
/// case-insensitive and tolerant of separators.
class SynonymTable {
 public:
  static const SynonymTable& builtin();

  /// Parses a table document; throws chartdesign::Error on malformed input or
  /// when one alias maps to two different canonical values.
  static SynonymTable from_json(std::string_view document);

  int version() const noexcept { return version_; }

  /// Canonical value of `text` within `category`, if known.
  std::optional<std::string> lookup(std::string_view category,
                                    std::string_view text) const;

  /// Canonical value of `text` in any category, if known.
  std::optional<std::string> lookup_any(std::string_view text) const;

  std::vector<std::string> categories() const;
  /// Canonical values of one category in file order.
  std::vector<std::string> canonical_values(std::string_view category) const;

 private:
  struct Category {
    std::vector<std::string> canonical;
    std::map<std::string, std::string, std::less<>> alias;  // normalized -> canonical
  };
  int version_ = 0;
  std::map<std::string, Category, std::less<>> categories_;
  std::map<std::string, std::string, std::less<>> global_;
};

}  // namespace chartdesign
