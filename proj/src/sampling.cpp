#include "chartdesign/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "chartdesign/random.hpp"

namespace chartdesign {

CountTable attribute_counts(std::span<const DesignSpec> corpus) {
  if (corpus.empty()) throw PreconditionError("attribute counts need a non-empty corpus");
  CountTable table;
  table.total = corpus.size();
  for (const auto& spec : corpus) {
    std::set<std::string> seen;
    for (const auto& attr : flatten(spec)) seen.insert(attribute_key(attr));
    for (const auto& key : seen) ++table.counts[key];
  }
  return table;
}

double value_weight(std::size_t n_k, std::size_t total) {
  if (n_k == 0) throw PreconditionError("attribute value was never observed (n_k = 0)");
  if (n_k > total) throw PreconditionError("n_k exceeds corpus size");
  return std::log1p(static_cast<double>(total) / static_cast<double>(n_k));
}

WeightTable weight_table(const CountTable& counts) {
  WeightTable w;
  for (const auto& [key, n] : counts.counts) w.weights[key] = value_weight(n, counts.total);
  return w;
}

double example_weight(const DesignSpec& spec, const WeightTable& weights, double penalty) {
  if (!(penalty > 0.0 && penalty <= 1.0))
    throw PreconditionError("missing-attribute penalty must lie in (0, 1]");
  double w = 1.0;
  std::set<std::string> seen;
  for (const auto& attr : flatten(spec)) {
    const std::string key = attribute_key(attr);
    if (!seen.insert(key).second) continue;
    auto it = weights.weights.find(key);
    if (it == weights.weights.end())
      throw PreconditionError("attribute value " + key + " has no weight");
    w *= it->second;
  }
  const auto present = present_keys(spec);
  for (const auto& key : applicability(spec.chart_type))
    if (!present.count(key)) w *= penalty;
  return w;
}

SampleDistribution normalize_weights(std::span<const double> raw) {
  if (raw.empty()) throw PreconditionError("cannot normalize an empty weight list");
  long double sum = 0;
  for (double w : raw) {
    if (!(w > 0.0) || !std::isfinite(w)) throw PreconditionError("weights must be positive and finite");
    sum += w;
  }
  SampleDistribution d;
  d.probabilities.reserve(raw.size());
  for (double w : raw) d.probabilities.push_back(static_cast<double>(w / sum));
  return d;
}

SampleDistribution sampling_distribution(std::span<const DesignSpec> corpus, double penalty) {
  const WeightTable weights = weight_table(attribute_counts(corpus));
  std::vector<double> raw;
  raw.reserve(corpus.size());
  for (const auto& spec : corpus) raw.push_back(example_weight(spec, weights, penalty));
  return normalize_weights(raw);
}

std::vector<Batch> sample_batches(const SampleDistribution& dist, std::size_t batch_size,
                                  std::size_t num_batches, std::uint64_t seed) {
  if (batch_size == 0) throw PreconditionError("batch size must be at least 1");
  if (dist.probabilities.empty()) throw PreconditionError("empty sampling distribution");

  std::vector<double> cumulative(dist.probabilities.size());
  double acc = 0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (!(dist.probabilities[i] >= 0.0)) throw PreconditionError("negative probability");
    acc += dist.probabilities[i];
    cumulative[i] = acc;
  }
  if (!(acc > 0.0)) throw PreconditionError("distribution has no mass");

  Rng rng(seed);
  std::vector<Batch> batches(num_batches);
  for (auto& batch : batches) {
    batch.reserve(batch_size);
    for (std::size_t i = 0; i < batch_size; ++i) {
      const double u = rng.unit() * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      if (it == cumulative.end()) --it;
      batch.push_back(static_cast<std::size_t>(it - cumulative.begin()));
    }
  }
  return batches;
}

CoverageLog coverage_log(std::span<const Batch> batches, std::span<const DesignSpec> corpus) {
  std::vector<std::vector<std::string>> keys_of(corpus.size());
  std::vector<bool> cached(corpus.size(), false);
  CoverageLog log;
  for (const auto& batch : batches) {
    std::map<std::string, std::size_t> freq;
    for (std::size_t idx : batch) {
      if (idx >= corpus.size())
        throw PreconditionError("batch index " + std::to_string(idx) + " is out of range");
      if (!cached[idx]) {
        for (const auto& attr : flatten(corpus[idx])) keys_of[idx].push_back(attribute_key(attr));
        cached[idx] = true;
      }
      for (const auto& key : keys_of[idx]) {
        ++freq[key];
        ++log.aggregate[key];
      }
    }
    log.per_batch.push_back(std::move(freq));
  }
  return log;
}

Json CoverageLog::to_json() const {
  Json j = Json::object();
  Json batches = Json::array();
  for (const auto& b : per_batch) batches.push_back(Json(b));
  j["batches"] = std::move(batches);
  j["aggregate"] = Json(aggregate);
  return j;
}

namespace {

SourceStats empty_stats() {
  SourceStats s;
  for (ChartType t : kAllChartTypes) s.chart_types[std::string(to_string(t))] = 0;
  for (const char* sub : {"simple", "grouped", "stacked", "unspecified"}) s.sub_types[sub] = 0;
  return s;
}

void widen(std::optional<std::pair<std::int64_t, std::int64_t>>& range, std::int64_t v) {
  if (!range) range = std::pair{v, v};
  else range = std::pair{std::min(range->first, v), std::max(range->second, v)};
}

void add(SourceStats& s, const DesignSpec& spec) {
  ++s.total;
  ++s.chart_types[std::string(to_string(spec.chart_type))];
  ++s.sub_types[spec.sub_chart_type ? std::string(to_string(*spec.sub_chart_type)) : "unspecified"];
  ++s.alignments[std::string(to_string(spec.chart_alignment))];
  if (spec.grid_lines) {
    if (spec.grid_lines->horizontal) widen(s.horizontal_grid_range, *spec.grid_lines->horizontal);
    if (spec.grid_lines->vertical) widen(s.vertical_grid_range, *spec.grid_lines->vertical);
  }
}

Json range_json(const std::optional<std::pair<std::int64_t, std::int64_t>>& r) {
  if (!r) return nullptr;
  return Json{{"min", r->first}, {"max", r->second}};
}

}  // namespace

Json SourceStats::to_json() const {
  Json j = Json::object();
  j["total"] = total;
  j["chart_types"] = Json(chart_types);
  j["sub_types"] = Json(sub_types);
  j["alignment_values"] = alignments.size();
  j["alignments"] = Json(alignments);
  j["horizontal_grid_lines"] = range_json(horizontal_grid_range);
  j["vertical_grid_lines"] = range_json(vertical_grid_range);
  return j;
}

Json StatsReport::to_json() const {
  Json j = Json::object();
  Json sources = Json::object();
  for (const auto& [tag, s] : per_source) sources[tag] = s.to_json();
  j["sources"] = std::move(sources);
  j["overall"] = overall.to_json();
  return j;
}

StatsReport corpus_stats(std::span<const DesignSpec> corpus, std::span<const std::string> source_tags) {
  if (corpus.empty()) throw PreconditionError("corpus statistics need a non-empty corpus");
  if (corpus.size() != source_tags.size())
    throw PreconditionError("expected one source tag per spec (" + std::to_string(corpus.size()) +
                            " specs, " + std::to_string(source_tags.size()) + " tags)");
  StatsReport report;
  report.overall = empty_stats();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto [it, inserted] = report.per_source.try_emplace(source_tags[i]);
    if (inserted) it->second = empty_stats();
    add(it->second, corpus[i]);
    add(report.overall, corpus[i]);
  }
  return report;
}

}  // namespace chartdesign
