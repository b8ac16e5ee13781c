#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chartdesign/error.hpp"
#include "chartdesign/verdict.hpp"

namespace chartdesign {

inline constexpr std::string_view kJudgeUrlEnv = "CHARTDESIGN_JUDGE_URL";
inline constexpr std::string_view kJudgeKeyEnv = "CHARTDESIGN_JUDGE_KEY";

struct JudgeConfig {
  /// Full URL of a chat-completion endpoint, e.g.
  /// http://localhost:8000/v1/chat/completions.
  std::string endpoint_url;
  std::string api_key;  // sent as a bearer token when non-empty
  std::string model_name = "judge";
  std::chrono::milliseconds timeout{30000};
  std::size_t max_in_flight = 4;
  std::optional<std::filesystem::path> cache_path;
  std::size_t max_retries = 3;
  std::chrono::milliseconds backoff_base{200};

  /// Fills endpoint_url and api_key from CHARTDESIGN_JUDGE_URL and
  /// CHARTDESIGN_JUDGE_KEY when set.
  static JudgeConfig from_environment();
};

/// The response contained neither MATCH nor NO_MATCH.
class UnparseableResponse : public Error {
 public:
  using Error::Error;
};

/// Instruction followed by the ground-truth and predicted values.
/// Deterministic; the attribute path is not included.
std::string build_prompt(const JudgeRequest& request);

/// Scans words left to right; the first standalone MATCH or NO_MATCH
/// (case-insensitive; NO-MATCH, NOMATCH and "NO MATCH" also read as
/// NO_MATCH) decides. Throws UnparseableResponse when neither occurs.
Verdict parse_response(std::string_view text);

/// Cache key for a pair: both values passed through normalize_text.
std::string judge_cache_key(std::string_view truth, std::string_view pred);

/// HTTP client for a chat-completion judging service.
///
/// Identical pairs (by normalized value) are sent once per client; answers
/// are kept in memory and, with cache_path set, appended to an NDJSON file
/// of {truth, pred, verdict, raw} records that is reloaded on construction.
/// At most max_in_flight requests are outstanding at any time across all
/// threads using the client. Transport failures and 5xx/429 responses are
/// retried with exponential backoff; exhausted retries and unparseable
/// answers give error-flagged NO_MATCH verdicts instead of exceptions.
class JudgeClient : public Judge {
 public:
  explicit JudgeClient(JudgeConfig config);
  ~JudgeClient() override;

  JudgeClient(const JudgeClient&) = delete;
  JudgeClient& operator=(const JudgeClient&) = delete;

  std::vector<MatchVerdict> judge_pairs(std::span<const JudgeRequest> requests) override;

  std::size_t upstream_calls() const noexcept { return upstream_calls_.load(); }
  std::size_t cache_hits() const noexcept { return cache_hits_.load(); }
  const JudgeConfig& config() const noexcept { return config_; }

 private:
  struct Answer {
    Verdict verdict;
    std::string raw;
  };
  struct Outcome {
    std::optional<Answer> answer;
    std::string error;
  };

  Outcome query(const JudgeRequest& request);
  void acquire_slot();
  void release_slot();
  std::optional<Answer> cached(const std::string& key);
  void remember(const std::string& key, const JudgeRequest& request, const Answer& answer);

  JudgeConfig config_;
  std::string base_url_;
  std::string path_;

  std::mutex slot_mu_;
  std::condition_variable slot_cv_;
  std::size_t in_flight_ = 0;

  std::mutex cache_mu_;
  std::map<std::string, Answer> cache_;
  std::ofstream cache_file_;

  std::atomic<std::size_t> upstream_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

}  // namespace chartdesign
