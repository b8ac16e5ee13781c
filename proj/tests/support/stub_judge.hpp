#pragma once

// Local chat-completion stand-in for judge tests. Answers MATCH unless the
// predicted value contains "wrong"; "garbled" gives an unparseable reply and
// "flaky" fails with 503 on the first attempt.

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

namespace chartdesign::testing {

class StubJudgeServer {
 public:
  explicit StubJudgeServer(std::chrono::milliseconds delay = std::chrono::milliseconds(15)) : delay_(delay) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const int now = ++in_flight_;
      for (int seen = max_in_flight_.load(); now > seen && !max_in_flight_.compare_exchange_weak(seen, now);) {
      }
      ++calls_;
      const auto body = nlohmann::json::parse(req.body);
      const std::string prompt = body["messages"][0]["content"];
      const std::string pred = prompt.substr(prompt.rfind("Predicted: ") + 11);
      {
        std::lock_guard lock(mu_);
        last_auth_ = req.get_header_value("Authorization");
        last_model_ = body.value("model", "");
      }
      // Vary latency so completion order differs from request order.
      std::this_thread::sleep_for(delay_ * (1 + static_cast<int>(pred.size() % 3)));
      --in_flight_;
      if (pred.find("flaky") != std::string::npos) {
        std::lock_guard lock(mu_);
        if (flaky_seen_.insert(pred).second) {
          res.status = 503;
          return;
        }
      }
      std::string answer = pred.find("wrong") != std::string::npos ? "Reasoning: differs. NO_MATCH" : "They agree. MATCH";
      if (pred.find("garbled") != std::string::npos) answer = "I am not sure.";
      const nlohmann::json reply{{"choices", {{{"message", {{"role", "assistant"}, {"content", answer}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubJudgeServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }
  int calls() const { return calls_.load(); }
  int max_in_flight() const { return max_in_flight_.load(); }
  std::string last_auth() {
    std::lock_guard lock(mu_);
    return last_auth_;
  }
  std::string last_model() {
    std::lock_guard lock(mu_);
    return last_model_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::chrono::milliseconds delay_;
  std::atomic<int> calls_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  std::mutex mu_;
  std::set<std::string> flaky_seen_;
  std::string last_auth_, last_model_;
};

}  // namespace chartdesign::testing
