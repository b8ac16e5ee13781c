// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "chartdesign/cli.hpp"
#include "chartdesign/emitters.hpp"
#include "chartdesign/evaluation.hpp"
#include "chartdesign/flatten.hpp"
#include "chartdesign/judge.hpp"
#include "chartdesign/sampling.hpp"
#include "chartdesign/tabular.hpp"
#include "generators.hpp"
#include "reverse_check.hpp"
#include "stub_judge.hpp"
#include "temp_dir.hpp"
#include "vl_validator.hpp"

using namespace chartdesign;
namespace cdt = chartdesign::testing;

namespace {

/// Collects failure reasons for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// ln x by the atanh series, x > 0. Shares nothing with std::log1p.
long double series_log(long double x) {
  const long double y = (x - 1) / (x + 1);
  const long double y2 = y * y;
  long double term = y, sum = 0;
  for (int k = 1; k < 2000; k += 2) {
    sum += term / k;
    term *= y2;
    if (std::fabs(term) < 1e-30L) break;
  }
  return 2 * sum;
}

void criterion_weight(Check& c) {
  const auto t0 = Clock::now();
  const double ln2 = static_cast<double>(series_log(2.0L));
  c.expect(std::fabs(value_weight(2118, 2118) - ln2) <= 1e-12, "value_weight(N,N) != ln 2");
  c.expect(std::fabs(value_weight(7, 7) - 0.6931471805599453) <= 1e-12, "value_weight(7,7) != ln 2");
  for (std::size_t n : {180u, 17u}) {
    const long double oracle = series_log(1.0L + 2118.0L / n);
    const double got = value_weight(n, 2118);
    std::ostringstream msg;
    msg.precision(17);
    msg << "value_weight(" << n << ",2118) = " << got << ", oracle " << static_cast<double>(oracle);
    c.expect(std::fabs(got - static_cast<double>(oracle)) <= 1e-12, msg.str());
  }
  c.expect(ms_since(t0) < 1000, "runtime over 1 s");
}

void criterion_sampler(Check& c) {
  const auto t0 = Clock::now();
  const std::vector<double> raw{1, 2, 4};
  const auto dist = normalize_weights(raw);
  const auto batches = sample_batches(dist, 4, 25000, 20240601);
  std::size_t total = 0;
  std::vector<std::size_t> hits(3, 0);
  for (const auto& b : batches)
    for (auto i : b) {
      ++hits.at(i);
      ++total;
    }
  c.expect(total == 100000, "expected 100000 draws, got " + std::to_string(total));
  const double expected[] = {1.0 / 7, 2.0 / 7, 4.0 / 7};
  for (int k = 0; k < 3; ++k) {
    const double f = double(hits[k]) / double(total);
    c.expect(std::fabs(f - expected[k]) <= 0.01, "frequency of index " + std::to_string(k) + " = " + std::to_string(f));
  }
  c.expect(ms_since(t0) < 5000, "runtime over 5 s");
}

void criterion_roundtrip(Check& c) {
  Rng rng(314159);
  int bad = 0;
  for (int i = 0; i < 500; ++i) {
    const DesignSpec s = cdt::random_spec_with_noise(rng);
    if (serialize(unflatten(flatten(s))) != serialize(normalize(s))) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " of 500 specs did not round-trip");
}

Scalar to_scalar(const Json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number()) return v.get<double>();
  return v.get<std::string>();
}

void criterion_matcher(Check& c) {
  const auto canonical = match_rule(Scalar{std::string("bar")}, Scalar{std::string("bar chart")});
  c.expect(canonical && canonical->verdict == Verdict::match, "(bar, bar chart) is not MATCH");

  std::ifstream in(cdt::fixture("matcher_pairs.json"));
  const Json doc = Json::parse(in);
  const auto& pairs = doc.at("pairs");
  std::vector<MatchVerdict> verdicts;
  std::vector<Verdict> labels;
  for (const auto& p : pairs) {
    const auto d = match_rule(to_scalar(p.at("truth")), to_scalar(p.at("pred")));
    MatchVerdict mv;
    mv.verdict = d ? d->verdict : Verdict::no_match;  // undecided without a judge
    verdicts.push_back(mv);
    labels.push_back(p.at("label") == "MATCH" ? Verdict::match : Verdict::no_match);
  }
  const std::size_t hand = doc.at("expected_agreements").get<std::size_t>();
  const double rate = agreement(verdicts, labels);
  c.expect(pairs.size() == 120, "fixture has " + std::to_string(pairs.size()) + " pairs");
  c.expect(rate == double(hand) / double(pairs.size()),
           "agreement " + std::to_string(rate) + " != " + std::to_string(hand) + "/120");
  // Determinism: a second pass gives the same verdicts.
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto again = match_rule(to_scalar(pairs[i].at("truth")), to_scalar(pairs[i].at("pred")));
    c.expect((again ? again->verdict : Verdict::no_match) == verdicts[i].verdict,
             "pair " + std::to_string(i) + " not deterministic");
  }
}

void criterion_macro(Check& c) {
  auto v = [](const char* path, bool m) {
    MatchVerdict x;
    x.path = path;
    x.verdict = m ? Verdict::match : Verdict::no_match;
    return x;
  };
  const std::vector<MatchVerdict> mixed{v("a", true), v("a", true), v("b", true), v("b", false)};
  c.expect(score(mixed).macro == 0.75, "{2/2, 1/2} macro != 0.75");
  const std::vector<MatchVerdict> hit{v("a", true), v("b", true), v("c", true)};
  c.expect(score(hit).macro == 1.0, "all-match macro != 1.0");
  const std::vector<MatchVerdict> miss{v("a", false), v("b", false)};
  c.expect(score(miss).macro == 0.0, "all-miss macro != 0.0");
}

void criterion_reflexive(Check& c) {
  cdt::TempDir dir;
  Rng rng(50);
  std::set<ChartType> types;
  for (int i = 0; i < 50; ++i) {
    const ChartType t = kAllChartTypes[i % 7];
    types.insert(t);
    dir.write("specs/chart_" + std::to_string(i) + ".json", serialize(cdt::random_spec(rng, t)));
  }
  c.expect(types.size() == 7, "fixture misses a chart type");
  std::ostringstream out, err;
  const auto specs = (dir.path() / "specs").string();
  const int status = cli::run({"eval", "--truth", specs, "--pred", specs, "--rules-only"}, out, err);
  c.expect(status == cli::kSuccess, "eval exit status " + std::to_string(status) + ": " + err.str());
  if (status != cli::kSuccess) return;
  const Json report = Json::parse(out.str());
  c.expect(report.at("charts") == 50, "eval paired " + report.at("charts").dump() + " charts");
  c.expect(report.at("macro").get<double>() == 1.0, "macro " + report.at("macro").dump());
}

void criterion_emitters(Check& c) {
  const DataTable table = cdt::sample_table(6, 2);
  std::size_t emitted = 0;
  Rng rng(7);
  for (ChartType t : kAllChartTypes)
    for (Alignment a : {Alignment::vertical, Alignment::horizontal}) {
      // Plain spec plus a fully populated random spec of the same shape.
      DesignSpec plain;
      plain.chart_type = t;
      plain.chart_alignment = a;
      DesignSpec rich = cdt::random_spec(rng, t);
      rich.chart_alignment = a;
      for (const DesignSpec& s : {plain, rich}) {
        const std::string label = std::string(to_string(t)) + "/" + std::string(to_string(a));
        for (Backend b : kAllBackends) {
          try {
            const EmitResult r = emit(s, table, b);
            ++emitted;
            if (b != Backend::vegalite) {
              c.expect(!r.content.empty(), label + " " + std::string(to_string(b)) + ": empty script");
              continue;
            }
            const Json doc = Json::parse(r.content);
            for (const auto& e : cdt::validate_vegalite(doc)) c.expect(false, label + " vega-lite: " + e);
            for (const auto& m : cdt::reverse_mismatches(s, r)) c.expect(false, label + " reverse: " + m);
          } catch (const std::exception& e) {
            c.expect(false, label + " " + std::string(to_string(b)) + ": " + e.what());
          }
        }
      }
    }
  c.expect(emitted == 7 * 2 * 2 * 4, "emitted " + std::to_string(emitted) + " of 112");
}

DataTable numeric_table(std::size_t rows, std::size_t cols, bool text_column) {
  DataTable t;
  if (text_column) t.headers.push_back("Label");
  for (std::size_t j = 0; j < cols; ++j) t.headers.push_back("c" + std::to_string(j + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<Cell> row;
    if (text_column) row.push_back(std::string("row ") + std::to_string(i));
    for (std::size_t j = 0; j < cols; ++j) row.push_back(double(i * 10 + j + 1));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::size_t changed_cells(const DataTable& a, const DataTable& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (std::size_t j = 0; j < a.rows[i].size(); ++j) n += a.rows[i][j] != b.rows[i][j];
  return n;
}

void criterion_perturb(Check& c) {
  const DataTable grid = numeric_table(10, 10, false);
  const DataTable holes = perturb_missing(grid, 0.10, 42);
  std::size_t empty = 0;
  for (const auto& r : holes.rows)
    for (const auto& cell : r) empty += is_empty(cell);
  c.expect(empty == 10, "missing: " + std::to_string(empty) + " empty cells");
  c.expect(serialize_csv(perturb_missing(grid, 0.10, 42)) == serialize_csv(holes), "missing: not reproducible");

  const DataTable mixed = numeric_table(10, 5, true);  // 50 numeric cells
  const DataTable noisy = perturb_outliers(mixed, 0.20, 42);
  c.expect(changed_cells(mixed, noisy) == 10, "outliers: " + std::to_string(changed_cells(mixed, noisy)) + " changed");
  c.expect(serialize_csv(perturb_outliers(mixed, 0.20, 42)) == serialize_csv(noisy), "outliers: not reproducible");

  const std::string text = perturb_format(grid, 42);
  c.expect(text == perturb_format(grid, 42), "format: not reproducible");
  const CsvBundle back = parse_csv_bundle(text);
  c.expect(back.tables.size() == 1 && back.tables[0].headerless && back.tables[0].rows == grid.rows,
           "format: output does not re-parse as the headerless table");
}

void criterion_mask(Check& c) {
  const DataTable t = numeric_table(6, 4, true);
  const DataTable m = mask_numeric(t);
  std::size_t numbers = 0;
  for (const auto& r : m.rows)
    for (const auto& cell : r) numbers += is_number(cell);
  c.expect(numbers == 0, std::to_string(numbers) + " numeric cells survived");
  c.expect(mask_numeric(m) == m, "not idempotent");
  c.expect(m.headers == t.headers, "headers changed");
}

void criterion_stats(Check& c) {
  const auto corpus = cdt::curated_corpus();
  const StatsReport r = corpus_stats(corpus.specs, corpus.tags);
  auto eq = [&](std::size_t got, std::size_t want, const std::string& what) {
    c.expect(got == want, what + " = " + std::to_string(got) + ", want " + std::to_string(want));
  };
  eq(r.overall.total, 2118, "total");
  eq(r.per_source.at(cdt::kSurveyTag).total, 1101, "survey total");
  eq(r.per_source.at(cdt::kAcademicTag).total, 1017, "academic total");
  eq(r.overall.chart_types.at("scatter"), 180, "scatter");
  eq(r.overall.chart_types.at("histogram"), 17, "histogram");
  // Independent recount straight from the generated specs.
  std::map<std::string, std::map<std::string, std::size_t>> recount;
  for (std::size_t i = 0; i < corpus.specs.size(); ++i)
    ++recount[corpus.tags[i]][std::string(to_string(corpus.specs[i].chart_type))];
  for (const auto& [tag, types] : recount)
    for (const auto& [type, n] : types) eq(r.per_source.at(tag).chart_types.at(type), n, tag + "." + type);
  const std::map<std::string, std::size_t> academic{{"bar", 200}, {"line", 420}, {"pie", 20},       {"area", 110},
                                                    {"scatter", 180}, {"box", 70}, {"histogram", 17}};
  for (const auto& [type, n] : academic) eq(r.per_source.at(cdt::kAcademicTag).chart_types.at(type), n, "academic." + type);
}

void criterion_multichart(Check& c) {
  std::ifstream in(cdt::fixture("two_charts.csv"));
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const CsvBundle b = parse_csv_bundle(text);
  c.expect(b.tables.size() == 2, std::to_string(b.tables.size()) + " tables");
  if (b.tables.size() != 2) return;
  c.expect(b.tables[0].name == "Chart 1" && b.tables[1].name == "Chart 2", "table names");
  c.expect(b.tables[0].headers == std::vector<std::string>{"Year", "Revenue", "Costs"}, "first header");
  c.expect(b.tables[0].rows.size() == 3 && b.tables[1].rows.size() == 3, "row counts");
}

void criterion_judge(Check& c) {
  cdt::StubJudgeServer server;
  JudgeConfig cfg;
  cfg.endpoint_url = server.url();
  cfg.max_in_flight = 3;
  cfg.backoff_base = std::chrono::milliseconds(5);
  JudgeClient client(cfg);
  std::vector<JudgeRequest> reqs;
  for (int i = 0; i < 20; ++i) reqs.push_back({"t" + std::to_string(i), (i % 2 ? "wrong " : "fine ") + std::to_string(i), "p"});
  reqs.push_back(reqs[3]);  // duplicate pair
  const auto out = client.judge_pairs(reqs);
  c.expect(out.size() == reqs.size(), "verdict count");
  for (std::size_t i = 0; i < 20 && i < out.size(); ++i)
    c.expect(out[i].verdict == (i % 2 ? Verdict::no_match : Verdict::match), "order broken at " + std::to_string(i));
  c.expect(out.size() == 21 && out[20].verdict == out[3].verdict, "duplicate verdict differs");
  c.expect(server.calls() == 20, "upstream calls " + std::to_string(server.calls()) + ", want 20");
  c.expect(server.max_in_flight() <= 3, "in flight " + std::to_string(server.max_in_flight()));
  c.expect(server.max_in_flight() >= 2, "requests never overlapped");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"weight formula", criterion_weight},
      {"sampler distribution", criterion_sampler},
      {"flatten round-trip", criterion_roundtrip},
      {"matcher fixture", criterion_matcher},
      {"macro accuracy oracle", criterion_macro},
      {"reflexive eval", criterion_reflexive},
      {"emitter grid", criterion_emitters},
      {"perturbation exactness", criterion_perturb},
      {"masking", criterion_mask},
      {"corpus stats", criterion_stats},
      {"multi-chart csv", criterion_multichart},
      {"judge client", criterion_judge},
  };
  const auto start = Clock::now();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s %2zu %-24s %8.1f ms\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), ms_since(t0));
    for (std::size_t k = 0; k < c.failures.size() && k < 10; ++k) std::printf("       %s\n", c.failures[k].c_str());
  }
  const double total = ms_since(start);
  std::printf("%d of %zu criteria passed in %.1f ms\n", int(criteria.size()) - failed, criteria.size(), total);
  if (total > 60000) {
    std::printf("FAIL total runtime over one minute\n");
    return 1;
  }
  return failed == 0 ? 0 : 1;
}
