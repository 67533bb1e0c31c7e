#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pulse {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
};

enum class BackendMode { Live, Record, Replay };

BackendMode parse_backend_mode(const std::string& name);
const char* backend_mode_name(BackendMode mode);

struct BackendConfig {
  BackendMode mode = BackendMode::Replay;
  std::string endpoint;         // "http://host:port" for Live/Record
  std::string transcript_path;  // JSONL for Record/Replay
  std::string api_key_env = "PULSE_API_KEY";
  int max_attempts = 3;         // attempts per request on 429/5xx
  int backoff_base_ms = 500;    // delay = base * 2^n, +-10% jitter
  unsigned jitter_seed = 0;
  int parallelism = 4;
};

/// Digest-keyed request/response store backing deterministic replays.
class Transcript {
 public:
  Transcript() = default;
  static Transcript load(const std::string& path);

  std::optional<nlohmann::json> lookup(const std::string& digest) const;
  /// Insert + append to the backing file (no-op for an already-known digest).
  void record(const std::string& digest, const nlohmann::json& response);
  void set_path(const std::string& path) { path_ = path; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, nlohmann::json> entries_;
  std::string path_;
  // keeps the class movable; load() returns by value
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
};

/// Uniform chat/embedding gateway. Replay mode never touches the network.
class Backend {
 public:
  explicit Backend(BackendConfig config);

  std::string complete(const ChatRequest& request);
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts,
                                         const std::string& model);

  const BackendConfig& config() const { return config_; }

  struct Stats {
    std::atomic<long> requests{0};
    std::atomic<long> network_attempts{0};
    std::atomic<long> transcript_hits{0};
    std::atomic<long> last_attempts{0};  // attempts used by the latest network call
  };
  const Stats& stats() const { return stats_; }

  /// Canonical serialization (sorted keys, no whitespace) of the request
  /// together with the operation tag, then FNV-1a 64 in hex.
  static std::string digest(const nlohmann::json& canonical_request);
  static nlohmann::json canonical_chat(const ChatRequest& request);
  static nlohmann::json canonical_embed(const std::vector<std::string>& texts,
                                        const std::string& model);
  /// Transcript keys as complete()/embed() compute them.
  static std::string chat_digest(const ChatRequest& request);
  static std::string embed_digest(const std::vector<std::string>& texts,
                                  const std::string& model);

 private:
  nlohmann::json roundtrip(const std::string& route, const nlohmann::json& body,
                           const std::string& digest);

  BackendConfig config_;
  Transcript transcript_;
  Stats stats_;
  std::mutex jitter_mutex_;
  unsigned long long jitter_state_;
};

}  // namespace pulse
