#pragma once

// Seeded generators for property tests and the acceptance suite.

#include <optional>
#include <string>

#include "chartdesign/random.hpp"
#include "chartdesign/schema.hpp"
#include "chartdesign/tabular.hpp"

namespace chartdesign::testing {

/// A random spec that passes validate(). With `type` unset the chart type is
/// drawn uniformly. Only applicable keys are filled.
DesignSpec random_spec(Rng& rng, std::optional<ChartType> type = std::nullopt);

/// Like random_spec but also adds a few inapplicable keys, so normalize()
/// has something to drop.
DesignSpec random_spec_with_noise(Rng& rng, std::optional<ChartType> type = std::nullopt);

/// A table shaped for the chart type: a text category column followed by
/// `series` numeric columns and `rows` rows.
DataTable sample_table(std::size_t rows = 5, std::size_t series = 2);

/// Awkward text: quotes, commas, unicode, digits, leading spaces.
std::string random_text(Rng& rng);

}  // namespace chartdesign::testing

namespace chartdesign::testing {

/// Synthetic corpus with the source composition of the curated training set:
/// 1,101 survey charts and 1,017 academic plots.
struct TaggedCorpus {
  std::vector<DesignSpec> specs;
  std::vector<std::string> tags;
};
inline constexpr const char* kSurveyTag = "survey";
inline constexpr const char* kAcademicTag = "academic";
TaggedCorpus curated_corpus();

}  // namespace chartdesign::testing
