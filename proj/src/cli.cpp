#include "chartdesign/cli.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "chartdesign/emitters.hpp"
#include "chartdesign/evaluation.hpp"
#include "chartdesign/judge.hpp"
#include "chartdesign/sampling.hpp"
#include "chartdesign/schema.hpp"
#include "chartdesign/synonyms.hpp"
#include "chartdesign/tabular.hpp"

namespace chartdesign::cli {

namespace fs = std::filesystem;

namespace {

// I/O failure; maps to kUsageOrIo.
class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed for " + path);
}

std::string report_text(const Json& j) { return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n"; }

Json issues_json(const std::vector<ValidationIssue>& issues) {
  Json arr = Json::array();
  for (const auto& i : issues)
    arr.push_back(Json{{"path", i.path}, {"code", std::string(to_string(i.code))}, {"message", i.message}});
  return arr;
}

// JSON files under `root`, sorted by relative path.
std::vector<fs::path> json_files(const fs::path& root) {
  if (!fs::is_directory(root)) throw IoError("not a directory: " + root.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

struct Corpus {
  std::vector<DesignSpec> specs;
  std::vector<std::string> names;  // relative paths
  std::vector<std::string> tags;   // first directory under the root
};

Corpus load_corpus(const fs::path& root, std::ostream& err) {
  Corpus c;
  for (const auto& file : json_files(root)) {
    const fs::path rel = fs::relative(file, root);
    try {
      c.specs.push_back(normalize(parse_design(std::string_view(read_file(file)))));
    } catch (const SpecError& e) {
      err << "skipping " << rel.string() << ": " << e.what() << "\n";
      continue;
    } catch (const SyntaxError& e) {
      err << "skipping " << rel.string() << ": " << e.what() << "\n";
      continue;
    }
    c.names.push_back(rel.generic_string());
    const auto first = rel.begin();
    c.tags.push_back(std::next(first) == rel.end() ? std::string("default") : first->string());
  }
  if (c.specs.empty()) throw IoError("no valid specs under " + root.string());
  return c;
}

const DataTable& pick_table(const CsvBundle& bundle, const std::string& which) {
  if (which.empty()) return bundle.tables.front();
  for (const auto& t : bundle.tables)
    if (normalize_text(t.name) == normalize_text(which)) return t;
  try {
    std::size_t pos = 0;
    const auto n = std::stoul(which, &pos);
    if (pos == which.size() && n >= 1 && n <= bundle.tables.size()) return bundle.tables[n - 1];
  } catch (const std::exception&) {
  }
  throw IoError("no table named " + which);
}

// ---- subcommands ----------------------------------------------------------

int cmd_validate(const std::string& path, const std::string& output, std::ostream& out) {
  Json report = Json::object();
  report["file"] = path;
  std::vector<ValidationIssue> issues;
  try {
    issues = validate(parse_design(std::string_view(read_file(path))));
  } catch (const SpecError& e) {
    issues = e.issues();
  } catch (const SyntaxError& e) {
    report["valid"] = false;
    report["syntax_error"] = Json{{"message", e.what()}, {"offset", e.offset()}};
    write_output(report_text(report), output, out);
    return kValidationFailure;
  }
  report["valid"] = issues.empty();
  report["issues"] = issues_json(issues);
  write_output(report_text(report), output, out);
  return issues.empty() ? kSuccess : kValidationFailure;
}

int cmd_flatten(const std::string& path, const std::string& output, std::ostream& out, std::ostream& err) {
  DesignSpec spec;
  try {
    spec = normalize(parse_design(std::string_view(read_file(path))));
  } catch (const SpecError& e) {
    err << path << ": " << e.what() << "\n";
    out << report_text(Json{{"valid", false}, {"issues", issues_json(e.issues())}});
    return kValidationFailure;
  } catch (const SyntaxError& e) {
    err << path << ": " << e.what() << "\n";
    return kValidationFailure;
  }
  Json obj = Json::object();
  for (const auto& a : flatten(spec)) obj[a.path] = to_json(a.value);
  write_output(report_text(obj), output, out);
  return kSuccess;
}

struct EvalOptions {
  std::string truth, pred, report, judge_url, judge_model = "judge", judge_cache;
  bool rules_only = false;
  double tolerance = 0.05;
  std::size_t max_in_flight = 4;
  std::size_t workers = 4;
};

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  std::map<std::string, fs::path> truth_files, pred_files;
  for (const auto& f : json_files(o.truth)) truth_files.emplace(f.filename().string(), f);
  for (const auto& f : json_files(o.pred)) pred_files.emplace(f.filename().string(), f);

  std::vector<std::pair<std::string, std::string>> unmatched;
  std::vector<std::string> names;
  for (const auto& [name, _] : truth_files) {
    if (pred_files.count(name)) names.push_back(name);
    else unmatched.push_back({name, "truth"});
  }
  for (const auto& [name, _] : pred_files)
    if (!truth_files.count(name)) unmatched.push_back({name, "pred"});
  for (const auto& [name, side] : unmatched) err << "unmatched " << side << " file skipped: " << name << "\n";
  if (names.empty()) throw IoError("no files with matching names in " + o.truth + " and " + o.pred);

  std::unique_ptr<JudgeClient> judge;
  if (!o.rules_only) {
    JudgeConfig cfg = JudgeConfig::from_environment();
    if (!o.judge_url.empty()) cfg.endpoint_url = o.judge_url;
    cfg.model_name = o.judge_model;
    cfg.max_in_flight = std::max<std::size_t>(1, o.max_in_flight);
    if (!o.judge_cache.empty()) cfg.cache_path = o.judge_cache;
    if (!cfg.endpoint_url.empty()) judge = std::make_unique<JudgeClient>(cfg);
    else err << "no judge configured; undecided pairs score NO_MATCH\n";
  }

  const TolerancePolicy policy{o.tolerance};
  std::vector<ChartEvaluation> results(names.size());
  std::vector<std::string> failures(names.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < names.size(); i = next++) {
      try {
        const Json truth = Json::parse(read_file(truth_files.at(names[i])));
        Json pred;
        try {
          pred = Json::parse(read_file(pred_files.at(names[i])));
        } catch (const Json::parse_error&) {
          pred = Json::object();  // malformed prediction: every attribute is absent
          failures[i] = "prediction is not valid JSON; scored as empty";
        }
        results[i] = evaluate_chart(truth, pred, judge.get(), policy);
      } catch (const std::exception& e) {
        failures[i] = std::string("fatal: ") + e.what();
      }
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(o.workers, 1, names.size());
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  std::vector<MatchVerdict> all;
  std::vector<std::string> extras;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!failures[i].empty()) {
      err << names[i] << ": " << failures[i] << "\n";
      if (failures[i].rfind("fatal: ", 0) == 0) throw IoError(names[i] + ": " + failures[i].substr(7));
    }
    all.insert(all.end(), results[i].verdicts.begin(), results[i].verdicts.end());
    extras.insert(extras.end(), results[i].extras.begin(), results[i].extras.end());
  }
  if (all.empty()) throw IoError("ground-truth files contain no attributes");

  const EvalReport report = score(all, extras);
  Json j = report.to_json();
  j["charts"] = names.size();
  Json um = Json::array();
  for (const auto& [name, side] : unmatched) um.push_back(Json{{"file", name}, {"side", side}});
  j["unmatched_files"] = std::move(um);
  if (judge) j["judge"] = Json{{"upstream_calls", judge->upstream_calls()}, {"cache_hits", judge->cache_hits()}};
  write_output(report_text(j), o.report, out);
  if (report.judge_errors > 0) {
    err << report.judge_errors << " judge error(s); affected pairs scored NO_MATCH\n";
    return kJudgeFailure;
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chart design specification toolkit", "chartdesign"};
  app.require_subcommand(1);
  std::string output;

  auto* validate_cmd = app.add_subcommand("validate", "Check a design spec; lists issues, exit 1 when invalid");
  std::string spec_path;
  validate_cmd->add_option("spec", spec_path, "Design spec JSON file")->required();
  validate_cmd->add_option("-o,--output", output, "Write the report here");

  auto* flatten_cmd = app.add_subcommand("flatten", "Print the path=value attributes of a normalized spec");
  flatten_cmd->add_option("spec", spec_path, "Design spec JSON file")->required();
  flatten_cmd->add_option("-o,--output", output, "Write here");

  EvalOptions eo;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted specs against ground truth, paired by file name");
  eval_cmd->add_option("--truth", eo.truth, "Ground-truth directory")->required();
  eval_cmd->add_option("--pred", eo.pred, "Prediction directory")->required();
  auto* rules_flag = eval_cmd->add_flag("--rules-only", eo.rules_only, "Never contact a judge");
  eval_cmd->add_option("--judge-url", eo.judge_url, "Chat-completion endpoint (default: $CHARTDESIGN_JUDGE_URL)")
      ->excludes(rules_flag);
  eval_cmd->add_option("--judge-model", eo.judge_model, "Model name sent to the judge");
  eval_cmd->add_option("--judge-cache", eo.judge_cache, "NDJSON cache of judge answers");
  eval_cmd->add_option("--max-in-flight", eo.max_in_flight, "Concurrent judge requests")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--workers", eo.workers, "Charts evaluated concurrently")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--tolerance", eo.tolerance, "Relative numeric tolerance")->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--report,-o", eo.report, "Write the report here");

  std::string corpus, coverage;
  std::size_t batch_size = kDefaultBatchSize, batches = 1;
  std::uint64_t seed = 0;
  double penalty = kDefaultMissingPenalty;
  auto* sample_cmd = app.add_subcommand("sample", "Draw weighted training batches from a spec corpus");
  sample_cmd->add_option("--corpus", corpus, "Directory of design specs")->required();
  sample_cmd->add_option("--batch-size", batch_size, "Examples per batch")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--batches", batches, "Number of batches")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", seed, "PRNG seed")->required();
  sample_cmd->add_option("--penalty", penalty, "Factor per missing applicable key")->check(CLI::Range(1e-9, 1.0));
  sample_cmd->add_option("--coverage", coverage, "Also write the coverage log here");
  sample_cmd->add_option("-o,--output", output, "Write here");

  auto* stats_cmd = app.add_subcommand("stats", "Corpus composition per source directory");
  stats_cmd->add_option("--corpus", corpus, "Directory of design specs")->required();
  stats_cmd->add_option("-o,--output", output, "Write here");

  std::string data_path, backend_name, table_name;
  auto* emit_cmd = app.add_subcommand("emit", "Render a spec and a table as a chart program");
  emit_cmd->add_option("--spec", spec_path, "Design spec JSON file")->required();
  emit_cmd->add_option("--data", data_path, "CSV data file")->required();
  emit_cmd->add_option("--backend", backend_name, "vegalite, matplotlib, ggplot2 or altair")->required();
  emit_cmd->add_option("--table", table_name, "Table name or 1-based index (default: first)");
  emit_cmd->add_option("-o,--output", output, "Write here");

  std::string mode;
  double fraction = 0;
  auto* perturb_cmd = app.add_subcommand("perturb", "Inject missing values, outliers or format noise");
  perturb_cmd->add_option("--data", data_path, "CSV data file")->required();
  perturb_cmd->add_option("--mode", mode, "missing, outliers or format")
      ->required()
      ->check(CLI::IsMember({"missing", "outliers", "format"}));
  auto* fraction_opt = perturb_cmd->add_option("--fraction", fraction, "Share of cells to alter");
  perturb_cmd->add_option("--seed", seed, "PRNG seed")->required();
  perturb_cmd->add_option("-o,--output", output, "Write here");

  auto* mask_cmd = app.add_subcommand("mask", "Replace every numeric cell with a mask token");
  mask_cmd->add_option("--data", data_path, "CSV data file")->required();
  mask_cmd->add_option("-o,--output", output, "Write here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::Success&) {
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageOrIo;
  }

  try {
    if (*validate_cmd) return cmd_validate(spec_path, output, out);
    if (*flatten_cmd) return cmd_flatten(spec_path, output, out, err);
    if (*eval_cmd) return cmd_eval(eo, out, err);

    if (*sample_cmd) {
      const Corpus c = load_corpus(corpus, err);
      const auto dist = sampling_distribution(c.specs, penalty);
      const auto drawn = sample_batches(dist, batch_size, batches, seed);
      Json j = Json::object();
      j["batches"] = drawn;
      Json files = Json::array();
      for (const auto& b : drawn) {
        Json row = Json::array();
        for (auto i : b) row.push_back(c.names[i]);
        files.push_back(std::move(row));
      }
      j["files"] = std::move(files);
      write_output(report_text(j), output, out);
      if (!coverage.empty()) write_output(report_text(coverage_log(drawn, c.specs).to_json()), coverage, out);
      return kSuccess;
    }

    if (*stats_cmd) {
      const Corpus c = load_corpus(corpus, err);
      write_output(report_text(corpus_stats(c.specs, c.tags).to_json()), output, out);
      return kSuccess;
    }

    if (*emit_cmd) {
      const auto backend = backend_from_string(backend_name);
      if (!backend) {
        err << "unknown backend: " << backend_name << "\n";
        return kUsageOrIo;
      }
      DesignSpec spec;
      try {
        spec = parse_design(std::string_view(read_file(spec_path)));
      } catch (const SyntaxError& e) {
        err << spec_path << ": " << e.what() << "\n";
        return kValidationFailure;
      }
      const CsvBundle bundle = parse_csv_bundle(read_file(data_path));
      for (const auto& w : bundle.warnings) err << "data: " << w << "\n";
      const EmitResult r = emit(spec, pick_table(bundle, table_name), *backend);
      for (const auto& w : r.warnings) err << "warning: " << w << "\n";
      write_output(r.content, output, out);
      return kSuccess;
    }

    if (*perturb_cmd) {
      if (mode != "format" && fraction_opt->count() == 0) {
        err << "--fraction is required for mode " << mode << "\n";
        return kUsageOrIo;
      }
      const CsvBundle bundle = parse_csv_bundle(read_file(data_path));
      std::string text;
      std::vector<DataTable> tables;
      for (std::size_t i = 0; i < bundle.tables.size(); ++i) {
        const DataTable& t = bundle.tables[i];
        const std::uint64_t s = seed + i;  // distinct stream per table
        if (mode == "missing") tables.push_back(perturb_missing(t, fraction, s));
        else if (mode == "outliers") tables.push_back(perturb_outliers(t, fraction, s));
        else {
          if (i > 0) text += "\n";
          if (!t.name.empty()) text += t.name + ":\n";
          text += perturb_format(t, s);
        }
      }
      if (mode != "format") text = serialize_csv_bundle(tables);
      write_output(text, output, out);
      return kSuccess;
    }

    if (*mask_cmd) {
      const CsvBundle bundle = parse_csv_bundle(read_file(data_path));
      std::vector<DataTable> tables;
      for (const auto& t : bundle.tables) tables.push_back(mask_numeric(t));
      write_output(serialize_csv_bundle(tables), output, out);
      return kSuccess;
    }
  } catch (const SpecError& e) {
    err << "invalid spec: " << e.what() << "\n";
    for (const auto& i : e.issues()) err << "  " << i.path << ": " << i.message << "\n";
    return kValidationFailure;
  } catch (const EmitError& e) {
    err << "cannot render: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrIo;
  }
  return kUsageOrIo;
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace chartdesign::cli
