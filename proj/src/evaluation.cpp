#include "chartdesign/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_map>

#include "chartdesign/synonyms.hpp"

namespace chartdesign {

std::string_view to_string(Verdict v) { return v == Verdict::match ? "MATCH" : "NO_MATCH"; }
std::string_view to_string(VerdictSource s) { return s == VerdictSource::rule ? "rule" : "judge"; }

AlignmentResult align(std::span<const FlatAttribute> truth, std::span<const FlatAttribute> pred) {
  std::unordered_map<std::string, const Scalar*> pred_by_path;
  for (const auto& p : pred) {
    if (!pred_by_path.emplace(p.path, &p.value).second)
      throw PreconditionError("duplicate path in prediction: " + p.path);
  }
  AlignmentResult out;
  std::set<std::string> truth_paths;
  for (const auto& t : truth) {
    if (!truth_paths.insert(t.path).second)
      throw PreconditionError("duplicate path in ground truth: " + t.path);
    AlignedPair pair{t.path, t.value, std::nullopt};
    if (auto it = pred_by_path.find(t.path); it != pred_by_path.end()) pair.pred_value = *it->second;
    out.pairs.push_back(std::move(pair));
  }
  for (const auto& p : pred)
    if (!truth_paths.count(p.path)) out.extras.push_back(p);
  return out;
}

namespace {

struct Number {
  double value;
  bool integer;
};

std::optional<Number> as_number(const Scalar& s) {
  if (auto* i = std::get_if<std::int64_t>(&s)) return Number{static_cast<double>(*i), true};
  if (auto* d = std::get_if<double>(&s)) return Number{*d, false};
  if (auto* str = std::get_if<std::string>(&s)) {
    auto first = str->find_first_not_of(" \t");
    auto last = str->find_last_not_of(" \t");
    if (first == std::string::npos) return std::nullopt;
    const char* b = str->data() + first;
    const char* e = str->data() + last + 1;
    std::int64_t iv = 0;
    if (auto [p, ec] = std::from_chars(b, e, iv); ec == std::errc() && p == e)
      return Number{static_cast<double>(iv), true};
    double dv = 0;
    if (auto [p, ec] = std::from_chars(b, e, dv); ec == std::errc() && p == e && std::isfinite(dv))
      return Number{dv, false};
  }
  return std::nullopt;
}

std::optional<bool> as_bool(const Scalar& s) {
  if (auto* b = std::get_if<bool>(&s)) return *b;
  if (auto* str = std::get_if<std::string>(&s)) {
    const std::string t = normalize_text(*str);
    if (t == "true" || t == "yes" || t == "visible" || t == "shown") return true;
    if (t == "false" || t == "no" || t == "hidden") return false;
  }
  return std::nullopt;
}

std::string fmt(double v) { return Json(v).dump(); }

}  // namespace

std::optional<RuleDecision> match_rule(const Scalar& truth, const Scalar& pred,
                                       const TolerancePolicy& policy) {
  const bool truth_bool = std::holds_alternative<bool>(truth);
  const bool pred_bool = std::holds_alternative<bool>(pred);
  if (truth_bool || pred_bool) {
    auto a = as_bool(truth);
    auto b = as_bool(pred);
    if (!a || !b) return std::nullopt;
    if (*a == *b) return RuleDecision{Verdict::match, "equal booleans"};
    return RuleDecision{Verdict::no_match, "different booleans"};
  }

  const auto na = as_number(truth);
  const auto nb = as_number(pred);
  if (na && nb) {
    if (na->value == nb->value) return RuleDecision{Verdict::match, "equal numbers"};
    if (na->integer || nb->integer)
      return RuleDecision{Verdict::no_match, "integers differ (" + render(truth) + " vs " + render(pred) + ")"};
    const double diff = std::fabs(na->value - nb->value);
    const double scale = std::min(std::fabs(na->value), std::fabs(nb->value));
    if (diff <= policy.relative_tolerance * scale)
      return RuleDecision{Verdict::match, "within relative tolerance " + fmt(policy.relative_tolerance)};
    return RuleDecision{Verdict::no_match,
                        "outside relative tolerance " + fmt(policy.relative_tolerance)};
  }
  if (na || nb) {
    // A number against non-numeric text ("3" vs "three") is left to the judge.
    return std::nullopt;
  }

  const auto& ta = std::get<std::string>(truth);
  const auto& tb = std::get<std::string>(pred);
  if (normalize_text(ta) == normalize_text(tb))
    return RuleDecision{Verdict::match, "equal after text normalization"};
  const auto& table = SynonymTable::builtin();
  auto ca = table.lookup_any(ta);
  auto cb = table.lookup_any(tb);
  if (ca && cb) {
    if (*ca == *cb) return RuleDecision{Verdict::match, "synonyms of '" + *ca + "'"};
    return RuleDecision{Verdict::no_match, "distinct values '" + *ca + "' and '" + *cb + "'"};
  }
  return std::nullopt;
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool continuous_path(std::string_view p) {
  return p == "bars_or_data_points.width" || p == "bars_or_data_points.spacing" ||
         p == "size_and_spacing.mark_width" || p == "size_and_spacing.intra_group_spacing" ||
         ((p.rfind("axes.x.range.", 0) == 0 || p.rfind("axes.y.range.", 0) == 0) &&
          (ends_with(p, ".min") || ends_with(p, ".max")));
}

bool count_path(std::string_view p) {
  return p == "grid_lines.horizontal" || p == "grid_lines.vertical";
}

}  // namespace

void coerce_schema_types(std::vector<FlatAttribute>& flat) {
  for (auto& attr : flat) {
    if (continuous_path(attr.path)) {
      if (auto* i = std::get_if<std::int64_t>(&attr.value)) attr.value = static_cast<double>(*i);
    } else if (count_path(attr.path)) {
      if (auto* d = std::get_if<double>(&attr.value); d && std::floor(*d) == *d && std::fabs(*d) < 9e15)
        attr.value = static_cast<std::int64_t>(*d);
    }
  }
}

ChartEvaluation evaluate_chart(const Json& truth, const Json& pred, Judge* judge,
                               const TolerancePolicy& policy) {
  auto truth_flat = flatten(truth);
  auto pred_flat = flatten(pred);
  coerce_schema_types(truth_flat);
  coerce_schema_types(pred_flat);
  const AlignmentResult aligned = align(truth_flat, pred_flat);

  ChartEvaluation out;
  out.verdicts.reserve(aligned.pairs.size());
  std::vector<std::size_t> undecided;
  std::vector<JudgeRequest> requests;
  for (const auto& pair : aligned.pairs) {
    MatchVerdict v{pair.path, Verdict::no_match, VerdictSource::rule, "", false};
    if (!pair.pred_value) {
      v.rationale = "absent from prediction";
    } else if (auto d = match_rule(pair.truth_value, *pair.pred_value, policy)) {
      v.verdict = d->verdict;
      v.rationale = std::move(d->rationale);
    } else {
      undecided.push_back(out.verdicts.size());
      requests.push_back({render(pair.truth_value), render(*pair.pred_value), pair.path});
      v.rationale = "undecided, no judge";
    }
    out.verdicts.push_back(std::move(v));
  }

  if (judge && !requests.empty()) {
    auto judged = judge->judge_pairs(requests);
    if (judged.size() != requests.size())
      throw Error("judge returned " + std::to_string(judged.size()) + " verdicts for " +
                  std::to_string(requests.size()) + " requests");
    for (std::size_t i = 0; i < undecided.size(); ++i) {
      MatchVerdict& slot = out.verdicts[undecided[i]];
      std::string path = slot.path;
      slot = std::move(judged[i]);
      slot.path = std::move(path);
      slot.source = VerdictSource::judge;
      if (slot.error) slot.verdict = Verdict::no_match;
    }
  }
  for (const auto& e : aligned.extras) out.extras.push_back(e.path);
  return out;
}

std::vector<MatchVerdict> evaluate(const Json& truth, const Json& pred, Judge* judge,
                                   const TolerancePolicy& policy) {
  return evaluate_chart(truth, pred, judge, policy).verdicts;
}

std::vector<MatchVerdict> evaluate(const DesignSpec& truth, const DesignSpec& pred, Judge* judge,
                                   const TolerancePolicy& policy) {
  return evaluate(to_json(truth), to_json(pred), judge, policy);
}

EvalReport score(std::span<const MatchVerdict> verdicts, std::span<const std::string> extras) {
  if (verdicts.empty()) throw PreconditionError("cannot score an empty verdict set");
  EvalReport report;
  std::map<std::string, PathCount> top;
  for (const auto& v : verdicts) {
    auto& c = report.counts[v.path];
    ++c.total;
    const std::string head = v.path.substr(0, v.path.find('.'));
    auto& t = top[head];
    ++t.total;
    if (v.verdict == Verdict::match) {
      ++c.matches;
      ++t.matches;
    }
    if (v.error) ++report.judge_errors;
  }
  double sum = 0;
  for (const auto& [path, c] : report.counts) {
    const double acc = static_cast<double>(c.matches) / static_cast<double>(c.total);
    report.per_attribute[path] = acc;
    sum += acc;
  }
  report.macro = sum / static_cast<double>(report.counts.size());
  for (const auto& [head, c] : top)
    report.top_level[head] = static_cast<double>(c.matches) / static_cast<double>(c.total);

  std::set<std::string> unique(extras.begin(), extras.end());
  report.extras.assign(unique.begin(), unique.end());
  return report;
}

Json EvalReport::to_json() const {
  Json j = Json::object();
  j["per_attribute"] = Json(per_attribute);
  j["macro"] = macro;
  Json c = Json::object();
  for (const auto& [path, pc] : counts) c[path] = Json{{"matches", pc.matches}, {"total", pc.total}};
  j["counts"] = std::move(c);
  j["extras"] = extras;
  j["top_level"] = Json(top_level);
  j["judge_errors"] = judge_errors;
  return j;
}

double agreement(std::span<const MatchVerdict> verdicts, std::span<const Verdict> labels) {
  if (verdicts.size() != labels.size())
    throw PreconditionError("verdict and label lists differ in length");
  if (verdicts.empty()) throw PreconditionError("cannot compute agreement over zero pairs");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (verdicts[i].verdict == labels[i]) ++agree;
  return static_cast<double>(agree) / static_cast<double>(labels.size());
}

}  // namespace chartdesign
