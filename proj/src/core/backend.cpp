#include "core/backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "core/error.hpp"
#include "core/io.hpp"

namespace pulse {

using nlohmann::json;

BackendMode parse_backend_mode(const std::string& name) {
  if (name == "live") return BackendMode::Live;
  if (name == "record") return BackendMode::Record;
  if (name == "replay") return BackendMode::Replay;
  raise(ErrorCode::Config, "unknown backend mode '" + name + "'");
}

const char* backend_mode_name(BackendMode mode) {
  switch (mode) {
    case BackendMode::Live: return "live";
    case BackendMode::Record: return "record";
    case BackendMode::Replay: return "replay";
  }
  return "replay";
}

Transcript Transcript::load(const std::string& path) {
  Transcript t;
  t.path_ = path;
  if (!std::filesystem::exists(path)) return t;
  std::ifstream in(path);
  if (!in) raise(ErrorCode::Io, "cannot open transcript: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json entry;
    try {
      entry = json::parse(line);
    } catch (const json::exception& e) {
      raise(ErrorCode::Io, "transcript line " + std::to_string(line_no) + " malformed: " + e.what());
    }
    if (!entry.contains("digest") || !entry.contains("response"))
      raise(ErrorCode::Io, "transcript line " + std::to_string(line_no) + " lacks digest/response");
    t.entries_[entry["digest"].get<std::string>()] = entry["response"];
  }
  return t;
}

std::optional<json> Transcript::lookup(const std::string& digest) const {
  std::lock_guard<std::mutex> lock(*mutex_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Transcript::record(const std::string& digest, const json& response) {
  std::lock_guard<std::mutex> lock(*mutex_);
  if (entries_.count(digest)) return;
  entries_[digest] = response;
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) raise(ErrorCode::Io, "cannot append to transcript: " + path_);
  json line;
  line["digest"] = digest;
  line["response"] = response;
  out << line.dump() << "\n";
}

Backend::Backend(BackendConfig config) : config_(std::move(config)) {
  if (config_.mode != BackendMode::Live) {
    if (config_.transcript_path.empty())
      raise(ErrorCode::Config, "record/replay backend needs a transcript path");
    transcript_ = Transcript::load(config_.transcript_path);
  }
  jitter_state_ = 0x9e3779b97f4a7c15ULL ^ config_.jitter_seed;
}

json Backend::canonical_chat(const ChatRequest& request) {
  if (request.messages.empty())
    raise(ErrorCode::Config, "chat request needs at least one message");
  if (request.temperature < 0.0)
    raise(ErrorCode::Config, "temperature must be nonnegative");
  json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  json messages = json::array();
  for (const auto& m : request.messages) {
    json msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    messages.push_back(msg);
  }
  body["messages"] = messages;
  return body;
}

json Backend::canonical_embed(const std::vector<std::string>& texts, const std::string& model) {
  json body;
  body["model"] = model;
  body["texts"] = texts;
  return body;
}

std::string Backend::digest(const json& canonical_request) {
  // nlohmann objects keep keys sorted; dump() emits no insignificant whitespace
  return fnv1a64_hex(canonical_request.dump());
}

namespace {

json tagged(const json& body, const char* op) {
  json keyed = body;
  keyed["op"] = op;
  return keyed;
}

}  // namespace

std::string Backend::chat_digest(const ChatRequest& request) {
  return digest(tagged(canonical_chat(request), "chat"));
}

std::string Backend::embed_digest(const std::vector<std::string>& texts,
                                  const std::string& model) {
  return digest(tagged(canonical_embed(texts, model), "embed"));
}

json Backend::roundtrip(const std::string& route, const json& body, const std::string& key) {
  stats_.requests.fetch_add(1);

  if (config_.mode == BackendMode::Replay) {
    auto hit = transcript_.lookup(key);
    if (!hit)
      raise(ErrorCode::TranscriptMiss, "no transcript entry for digest " + key + " (" + route + ")");
    stats_.transcript_hits.fetch_add(1);
    return *hit;
  }

  if (config_.mode == BackendMode::Record) {
    if (auto hit = transcript_.lookup(key)) {
      stats_.transcript_hits.fetch_add(1);
      return *hit;
    }
  }

  if (config_.endpoint.empty()) raise(ErrorCode::Config, "live backend needs an endpoint");
  const char* api_key = std::getenv(config_.api_key_env.c_str());
  if (api_key == nullptr || *api_key == '\0')
    raise(ErrorCode::AuthMissing, "environment variable " + config_.api_key_env + " not set");

  httplib::Client client(config_.endpoint);
  client.set_connection_timeout(10);
  client.set_read_timeout(120);
  httplib::Headers headers = {{"Authorization", std::string("Bearer ") + api_key}};

  std::string payload = body.dump();
  int attempts = 0;
  httplib::Result res;
  while (true) {
    ++attempts;
    stats_.network_attempts.fetch_add(1);
    res = client.Post(route, headers, payload, "application/json");
    bool retryable = !res || res->status == 429 || res->status >= 500;
    if (res && res->status == 200) break;
    if (!retryable || attempts >= config_.max_attempts) {
      stats_.last_attempts.store(attempts);
      std::string status = res ? std::to_string(res->status) : "no response";
      raise(ErrorCode::EndpointError,
            route + " failed after " + std::to_string(attempts) + " attempts (" + status + ")");
    }
    // backoff base * 2^n with +-10% seeded jitter
    double delay_ms = config_.backoff_base_ms * std::pow(2.0, attempts - 1);
    {
      std::lock_guard<std::mutex> lock(jitter_mutex_);
      jitter_state_ = jitter_state_ * 6364136223846793005ULL + 1442695040888963407ULL;
      double unit = static_cast<double>(jitter_state_ >> 11) / 9007199254740992.0;  // [0,1)
      delay_ms *= 0.9 + 0.2 * unit;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long>(delay_ms)));
  }
  stats_.last_attempts.store(attempts);

  json response;
  try {
    response = json::parse(res->body);
  } catch (const json::exception& e) {
    raise(ErrorCode::EndpointError, route + " returned malformed JSON: " + std::string(e.what()));
  }
  if (config_.mode == BackendMode::Record) transcript_.record(key, response);
  return response;
}

std::string Backend::complete(const ChatRequest& request) {
  json body = canonical_chat(request);
  std::string key = chat_digest(request);
  json response = roundtrip("/chat", body, key);
  if (response.is_string()) return response.get<std::string>();
  if (response.is_object() && response.contains("text") && response["text"].is_string())
    return response["text"].get<std::string>();
  raise(ErrorCode::EndpointError, "chat response lacks a text payload");
}

std::vector<std::vector<double>> Backend::embed(const std::vector<std::string>& texts,
                                                const std::string& model) {
  if (texts.empty()) return {};
  json body = canonical_embed(texts, model);
  std::string key = embed_digest(texts, model);
  json response = roundtrip("/embed", body, key);
  const json* vectors = nullptr;
  if (response.is_array()) {
    vectors = &response;
  } else if (response.is_object() && response.contains("vectors") &&
             response["vectors"].is_array()) {
    vectors = &response["vectors"];
  } else {
    raise(ErrorCode::EndpointError, "embed response lacks a vectors payload");
  }
  if (vectors->size() != texts.size())
    raise(ErrorCode::EndpointError, "embed returned " + std::to_string(vectors->size()) +
                                        " vectors for " + std::to_string(texts.size()) + " texts");
  std::vector<std::vector<double>> out;
  out.reserve(vectors->size());
  std::size_t dim = 0;
  for (const auto& vec : *vectors) {
    if (!vec.is_array()) raise(ErrorCode::EndpointError, "embedding vector is not an array");
    std::vector<double> values;
    values.reserve(vec.size());
    for (const auto& v : vec) values.push_back(v.get<double>());
    if (dim == 0) dim = values.size();
    if (values.size() != dim || dim == 0)
      raise(ErrorCode::DimensionMismatch,
            "embedding dims inconsistent: " + std::to_string(values.size()) + " vs " +
                std::to_string(dim));
    for (double v : values)
      if (!std::isfinite(v)) raise(ErrorCode::DimensionMismatch, "non-finite embedding component");
    out.push_back(std::move(values));
  }
  return out;
}

}  // namespace pulse
