#include "chartdesign/judge.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <regex>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "chartdesign/synonyms.hpp"

namespace chartdesign {

namespace {

constexpr std::string_view kInstruction =
    "You are evaluating the accuracy of predicted chart design attributes. For each pair of "
    "ground-truth and predicted values, respond with `MATCH` if they are semantically equivalent "
    "(e.g., “bar” and “bar chart”) and `NO_MATCH` otherwise. Use "
    "natural-language reasoning to decide semantic equivalence.";

constexpr std::size_t kMaxRationale = 400;

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

JudgeConfig JudgeConfig::from_environment() {
  JudgeConfig c;
  if (const char* url = std::getenv(std::string(kJudgeUrlEnv).c_str())) c.endpoint_url = url;
  if (const char* key = std::getenv(std::string(kJudgeKeyEnv).c_str())) c.api_key = key;
  return c;
}

std::string build_prompt(const JudgeRequest& request) {
  std::string prompt(kInstruction);
  prompt += "\n\nGround truth: ";
  prompt += request.truth_value;
  prompt += "\nPredicted: ";
  prompt += request.pred_value;
  prompt += "\n";
  return prompt;
}

Verdict parse_response(std::string_view text) {
  auto word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  };
  std::string previous;
  bool previous_adjacent = false;  // only whitespace between previous word and this one
  std::size_t i = 0;
  while (i < text.size()) {
    if (!word_char(text[i])) {
      if (!std::isspace(static_cast<unsigned char>(text[i]))) previous_adjacent = false;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && word_char(text[j])) ++j;
    const std::string word = upper(text.substr(i, j - i));
    if (word == "NO_MATCH" || word == "NO-MATCH" || word == "NOMATCH") return Verdict::no_match;
    if (word == "MATCH") return previous_adjacent && previous == "NO" ? Verdict::no_match : Verdict::match;
    previous = word;
    previous_adjacent = true;
    i = j;
  }
  throw UnparseableResponse("judge response contains neither MATCH nor NO_MATCH");
}

std::string judge_cache_key(std::string_view truth, std::string_view pred) {
  return normalize_text(truth) + '\x1f' + normalize_text(pred);
}

JudgeClient::JudgeClient(JudgeConfig config) : config_(std::move(config)) {
  if (config_.endpoint_url.empty()) throw PreconditionError("judge endpoint URL is empty");
  if (config_.max_in_flight == 0) throw PreconditionError("max_in_flight must be at least 1");
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(config_.endpoint_url, m, url_re))
    throw PreconditionError("judge endpoint must be an http(s) URL: " + config_.endpoint_url);
  base_url_ = m[1].str();
  path_ = m[2].matched && m[2].length() > 0 ? m[2].str() : "/";

  if (config_.cache_path) {
    std::ifstream in(*config_.cache_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        const auto rec = nlohmann::json::parse(line);
        const auto verdict = rec.at("verdict").get<std::string>() == "MATCH" ? Verdict::match
                                                                             : Verdict::no_match;
        cache_[judge_cache_key(rec.at("truth").get<std::string>(), rec.at("pred").get<std::string>())] =
            Answer{verdict, rec.value("raw", std::string())};
      } catch (const std::exception&) {
        // A torn last line from an interrupted run is skipped.
      }
    }
    cache_file_.open(*config_.cache_path, std::ios::app);
    if (!cache_file_) throw Error("cannot open judge cache " + config_.cache_path->string());
  }
}

JudgeClient::~JudgeClient() = default;

void JudgeClient::acquire_slot() {
  std::unique_lock lock(slot_mu_);
  slot_cv_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
  ++in_flight_;
}

void JudgeClient::release_slot() {
  {
    std::lock_guard lock(slot_mu_);
    --in_flight_;
  }
  slot_cv_.notify_one();
}

std::optional<JudgeClient::Answer> JudgeClient::cached(const std::string& key) {
  std::lock_guard lock(cache_mu_);
  auto it = cache_.find(key);
  if (it == cache_.end()) return std::nullopt;
  return it->second;
}

void JudgeClient::remember(const std::string& key, const JudgeRequest& request, const Answer& answer) {
  std::lock_guard lock(cache_mu_);
  cache_[key] = answer;
  if (cache_file_.is_open()) {
    const nlohmann::json rec{{"truth", request.truth_value},
                             {"pred", request.pred_value},
                             {"verdict", std::string(to_string(answer.verdict))},
                             {"raw", answer.raw}};
    cache_file_ << rec.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    cache_file_.flush();
  }
}

JudgeClient::Outcome JudgeClient::query(const JudgeRequest& request) {
  httplib::Client client(base_url_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  const nlohmann::json body{
      {"model", config_.model_name},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", build_prompt(request)}}})}};
  const std::string payload = body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);

  std::string last_error;
  for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.backoff_base * (1u << std::min<std::size_t>(attempt - 1, 16)));

    acquire_slot();
    ++upstream_calls_;
    auto res = client.Post(path_, headers, payload, "application/json");
    release_slot();

    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      return Outcome{std::nullopt, "HTTP " + std::to_string(res->status)};

    std::string content = res->body;
    try {
      const auto doc = nlohmann::json::parse(res->body);
      content = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception&) {
      // Plain-text bodies are accepted as the answer itself.
    }
    try {
      return Outcome{Answer{parse_response(content), content}, {}};
    } catch (const UnparseableResponse& e) {
      return Outcome{std::nullopt, std::string(e.what()) + ": " + content.substr(0, kMaxRationale)};
    }
  }
  return Outcome{std::nullopt, last_error + " after " + std::to_string(config_.max_retries + 1) + " attempt(s)"};
}

std::vector<MatchVerdict> JudgeClient::judge_pairs(std::span<const JudgeRequest> requests) {
  std::vector<MatchVerdict> out(requests.size());
  if (requests.empty()) return out;

  // Group identical pairs so each distinct key is resolved once.
  std::vector<std::string> keys;
  std::unordered_map<std::string, std::vector<std::size_t>> positions;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    auto key = judge_cache_key(requests[i].truth_value, requests[i].pred_value);
    auto [it, inserted] = positions.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(i);
  }

  std::vector<Outcome> outcomes(keys.size());
  std::vector<std::size_t> pending;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (auto hit = cached(keys[k])) {
      ++cache_hits_;
      outcomes[k].answer = std::move(*hit);
    } else {
      pending.push_back(k);
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t n = next++; n < pending.size(); n = next++) {
      const std::size_t k = pending[n];
      const JudgeRequest& req = requests[positions.at(keys[k]).front()];
      outcomes[k] = query(req);
      if (outcomes[k].answer) remember(keys[k], req, *outcomes[k].answer);
    }
  };
  const std::size_t workers = std::min(config_.max_in_flight, pending.size());
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  for (std::size_t k = 0; k < keys.size(); ++k) {
    for (std::size_t i : positions.at(keys[k])) {
      MatchVerdict& v = out[i];
      v.path = requests[i].path;
      v.source = VerdictSource::judge;
      if (outcomes[k].answer) {
        v.verdict = outcomes[k].answer->verdict;
        v.rationale = outcomes[k].answer->raw.substr(0, kMaxRationale);
      } else {
        v.verdict = Verdict::no_match;
        v.error = true;
        v.rationale = outcomes[k].error;
      }
    }
  }
  return out;
}

}  // namespace chartdesign
