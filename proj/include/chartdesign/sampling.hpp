#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chartdesign/flatten.hpp"
#include "chartdesign/schema.hpp"

namespace chartdesign {

/// Document frequency of every flattened "path=value" key.
struct CountTable {
  std::map<std::string, std::size_t> counts;  // n_k
  std::size_t total = 0;                      // N, corpus size
};

struct WeightTable {
  std::map<std::string, double> weights;  // w_k
};

/// Per-example probabilities, index-aligned with the corpus.
struct SampleDistribution {
  std::vector<double> probabilities;
};

inline constexpr double kDefaultMissingPenalty = 0.9;
inline constexpr std::size_t kDefaultBatchSize = 4;

/// Counts each (path, value) pair at most once per document. Throws
/// PreconditionError for an empty corpus.
CountTable attribute_counts(std::span<const DesignSpec> corpus);

/// Inverse-frequency importance ln(1 + N / n_k). Natural log.
double value_weight(std::size_t n_k, std::size_t total);

WeightTable weight_table(const CountTable& counts);

/// Product of the weights of the spec's flattened pairs, times `penalty`
/// once for every applicable top-level key the spec omits.
double example_weight(const DesignSpec& spec, const WeightTable& weights,
                      double penalty = kDefaultMissingPenalty);

/// Divides every weight by the total. Throws PreconditionError for empty
/// input or any weight that is not strictly positive and finite.
SampleDistribution normalize_weights(std::span<const double> raw);

/// counts -> weights -> per-example weights -> normalized distribution.
SampleDistribution sampling_distribution(std::span<const DesignSpec> corpus,
                                         double penalty = kDefaultMissingPenalty);

using Batch = std::vector<std::size_t>;

/// i.i.d. draws with replacement by inverse-CDF lookup over the cumulative
/// distribution, using the Rng engine seeded with `seed`.
std::vector<Batch> sample_batches(const SampleDistribution& dist, std::size_t batch_size,
                                  std::size_t num_batches, std::uint64_t seed);

struct CoverageLog {
  std::vector<std::map<std::string, std::size_t>> per_batch;  // "path=value" -> draws
  std::map<std::string, std::size_t> aggregate;

  Json to_json() const;
};

/// Attribute-value frequencies of each sampled batch and across all batches.
CoverageLog coverage_log(std::span<const Batch> batches, std::span<const DesignSpec> corpus);

struct SourceStats {
  std::size_t total = 0;
  std::map<std::string, std::size_t> chart_types;  // all seven types, zeros included
  std::map<std::string, std::size_t> sub_types;    // simple/grouped/stacked/unspecified
  std::map<std::string, std::size_t> alignments;   // observed values only
  std::optional<std::pair<std::int64_t, std::int64_t>> horizontal_grid_range;
  std::optional<std::pair<std::int64_t, std::int64_t>> vertical_grid_range;

  Json to_json() const;
};

struct StatsReport {
  std::map<std::string, SourceStats> per_source;
  SourceStats overall;

  Json to_json() const;
};

/// Corpus composition per source tag. Throws PreconditionError when the
/// corpus is empty or the tag count differs from the spec count.
StatsReport corpus_stats(std::span<const DesignSpec> corpus, std::span<const std::string> source_tags);

}  // namespace chartdesign
