#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chartdesign {

enum class Verdict { match, no_match };
enum class VerdictSource { rule, judge };

std::string_view to_string(Verdict v);   // "MATCH" / "NO_MATCH"
std::string_view to_string(VerdictSource s);

/// Decision for one ground-truth attribute path.
struct MatchVerdict {
  std::string path;
  Verdict verdict = Verdict::no_match;
  VerdictSource source = VerdictSource::rule;
  std::string rationale;
  /// Set when the judge could not be reached or answered unparseably; the
  /// verdict is then NO_MATCH.
  bool error = false;

  bool operator==(const MatchVerdict&) const = default;
};

/// One undecided pair sent to a judge. Values are scalar renderings; the path
/// is carried for logging only and never influences the decision.
struct JudgeRequest {
  std::string truth_value;
  std::string pred_value;
  std::string path;
};

/// Anything that can decide semantic equivalence for a batch of pairs.
/// Results must be index-aligned with the requests.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual std::vector<MatchVerdict> judge_pairs(std::span<const JudgeRequest> requests) = 0;
};

}  // namespace chartdesign
