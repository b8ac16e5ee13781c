#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chartdesign/flatten.hpp"
#include "chartdesign/verdict.hpp"

namespace chartdesign {

struct AlignedPair {
  std::string path;
  Scalar truth_value;
  std::optional<Scalar> pred_value;  // empty when the prediction omits the path
  bool operator==(const AlignedPair&) const = default;
};

struct AlignmentResult {
  std::vector<AlignedPair> pairs;     // one per truth path, truth order
  std::vector<FlatAttribute> extras;  // predicted paths with no truth counterpart
};

/// Pairs predicted leaves with truth leaves by path. Throws PreconditionError
/// when a path repeats within one side.
AlignmentResult align(std::span<const FlatAttribute> truth, std::span<const FlatAttribute> pred);

struct TolerancePolicy {
  /// Two non-integer numbers match when |a - b| <= tolerance * min(|a|, |b|).
  double relative_tolerance = 0.05;
};

struct RuleDecision {
  Verdict verdict;
  std::string rationale;
};

/// Deterministic equivalence rules. Returns nullopt when the rules cannot
/// decide, which makes the pair a candidate for the judge.
///
///  - numbers: exact when either side is an integer, otherwise within the
///    relative tolerance; numeric strings are read as numbers;
///  - booleans: exact, also against yes/no/true/false/visible/hidden text;
///  - text: equal after normalize_text, or both known to the synonym table
///    (MATCH when they share a canonical value, NO_MATCH otherwise).
std::optional<RuleDecision> match_rule(const Scalar& truth, const Scalar& pred,
                                       const TolerancePolicy& policy = {});

/// Coerces leaves whose schema type is known: continuous fields become
/// doubles, counts become integers when integral.
void coerce_schema_types(std::vector<FlatAttribute>& flat);

struct ChartEvaluation {
  std::vector<MatchVerdict> verdicts;  // alignment order
  std::vector<std::string> extras;     // predicted-only paths, reported but not scored
};

/// flatten -> align -> rules -> judge for undecided pairs. Without a judge,
/// undecided pairs score NO_MATCH. Absent predictions always score NO_MATCH.
ChartEvaluation evaluate_chart(const Json& truth, const Json& pred, Judge* judge = nullptr,
                               const TolerancePolicy& policy = {});

std::vector<MatchVerdict> evaluate(const Json& truth, const Json& pred, Judge* judge = nullptr,
                                   const TolerancePolicy& policy = {});
std::vector<MatchVerdict> evaluate(const DesignSpec& truth, const DesignSpec& pred,
                                   Judge* judge = nullptr, const TolerancePolicy& policy = {});

struct PathCount {
  std::size_t matches = 0;
  std::size_t total = 0;
};

struct EvalReport {
  std::map<std::string, double> per_attribute;
  std::map<std::string, PathCount> counts;
  double macro = 0;
  /// Pooled accuracy per top-level key ("legend" covers legend.*).
  std::map<std::string, double> top_level;
  std::vector<std::string> extras;
  std::size_t judge_errors = 0;

  Json to_json() const;
};

/// Pools matches per path across all verdicts, then averages the per-path
/// accuracies with equal weight. Throws PreconditionError on empty input.
EvalReport score(std::span<const MatchVerdict> verdicts, std::span<const std::string> extras = {});

/// Fraction of positions where the verdict equals the human label.
double agreement(std::span<const MatchVerdict> verdicts, std::span<const Verdict> labels);

}  // namespace chartdesign
