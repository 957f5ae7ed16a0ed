#include "cfgchain/backend.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <thread>

#include "cfgchain/error.hpp"

namespace cfgchain {

namespace {

using nlohmann::json;

std::string now_utc_iso8601() {
  std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string first_completion_field(const json& body) {
  if (body.contains("choices") && body["choices"].is_array() &&
      !body["choices"].empty()) {
    const json& c = body["choices"][0];
    if (c.contains("text") && c["text"].is_string()) {
      return c["text"].get<std::string>();
    }
    if (c.contains("message") && c["message"].contains("content") &&
        c["message"]["content"].is_string()) {
      return c["message"]["content"].get<std::string>();
    }
  }
  if (body.contains("content") && body["content"].is_array() &&
      !body["content"].empty() && body["content"][0].contains("text")) {
    return body["content"][0]["text"].get<std::string>();
  }
  for (const char* key : {"completion", "response", "text"}) {
    if (body.contains(key) && body[key].is_string()) {
      return body[key].get<std::string>();
    }
  }
  raise(ErrorCode::HttpError, "response exposes no completion text field");
}

}  // namespace

std::string prompt_key(const std::string& prompt_text) {
  // FNV-1a 64; exact-match lookups verify the stored prompt anyway.
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : prompt_text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

Cassette Cassette::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open cassette " + path);
  Cassette cassette;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      raise(ErrorCode::ParseError,
            path + ":" + std::to_string(lineno) + ": not a JSON object");
    }
    CassetteEntry e;
    e.key = j.value("key", "");
    e.unit_id = j.value("unit_id", "");
    e.prompt_text = j.value("prompt_text", "");
    e.completion_text = j.value("completion_text", "");
    e.model = j.value("model", "");
    e.recorded_at = j.value("recorded_at", "");
    if (e.key != prompt_key(e.prompt_text)) {
      raise(ErrorCode::ParseError,
            path + ":" + std::to_string(lineno) +
                ": key does not match prompt_text digest");
    }
    auto it = cassette.entries_.find(e.key);
    if (it != cassette.entries_.end()) {
      if (it->second.completion_text != e.completion_text) {
        raise(ErrorCode::ParseError,
              path + ":" + std::to_string(lineno) +
                  ": duplicate key with conflicting completion");
      }
      continue;
    }
    cassette.entries_.emplace(e.key, std::move(e));
  }
  return cassette;
}

const CassetteEntry* Cassette::lookup(const std::string& prompt_text) const {
  auto it = entries_.find(prompt_key(prompt_text));
  if (it == entries_.end()) return nullptr;
  if (it->second.prompt_text != prompt_text) return nullptr;  // exact only
  return &it->second;
}

void append_cassette_entry(const std::string& path, const CassetteEntry& entry) {
  std::ofstream out(path, std::ios::app);
  if (!out) raise(ErrorCode::IoError, "cannot append to cassette " + path);
  json j = {{"key", entry.key},
            {"unit_id", entry.unit_id},
            {"prompt_text", entry.prompt_text},
            {"completion_text", entry.completion_text},
            {"model", entry.model},
            {"recorded_at", entry.recorded_at}};
  out << j.dump() << "\n";
}

std::string HeuristicBackend::complete(const BackendRequest& req) {
  return heuristic_complete(req.unit_id, req.structured_input);
}

std::string ReplayBackend::complete(const BackendRequest& req) {
  const CassetteEntry* entry = cassette_.lookup(req.prompt_text);
  if (!entry) {
    raise(ErrorCode::CassetteMiss,
          "unit `" + req.unit_id + "`: prompt key " +
              prompt_key(req.prompt_text) +
              " not recorded (the prompt drifted or the cassette is stale)");
  }
  return entry->completion_text;
}

std::string HttpBackend::complete(const BackendRequest& req) {
  json body;
  body["model"] = req.params.model;
  if (config_.wire == "messages") {
    body["messages"] = json::array(
        {{{"role", "user"}, {"content", req.prompt_text}}});
  } else {
    body["prompt"] = req.prompt_text;
  }
  body["temperature"] = req.params.temperature;
  body["max_tokens"] = req.params.max_tokens;
  const std::string payload = body.dump();

  std::string last_error;
  bool timed_out = false;
  for (int attempt = 1; attempt <= config_.attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(100 * (1 << (attempt - 2))));
    }
    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }
    auto res = client.Post(config_.path, headers, payload, "application/json");
    if (!res) {
      timed_out = (res.error() == httplib::Error::ConnectionTimeout ||
                   res.error() == httplib::Error::Read ||
                   res.error() == httplib::Error::Write);
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      raise(ErrorCode::HttpError,
            "status " + std::to_string(res->status) + " from " +
                config_.endpoint + config_.path);
    }
    json parsed = json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) {
      raise(ErrorCode::HttpError, "response body is not JSON");
    }
    return first_completion_field(parsed);
  }
  if (timed_out) {
    raise(ErrorCode::Timeout, "no response after " +
                                  std::to_string(config_.attempts) +
                                  " attempts: " + last_error);
  }
  raise(ErrorCode::HttpError, "request failed after " +
                                  std::to_string(config_.attempts) +
                                  " attempts: " + last_error);
}

std::string RecordBackend::complete(const BackendRequest& req) {
  const std::string completion = http_.complete(req);
  CassetteEntry entry;
  entry.key = prompt_key(req.prompt_text);
  entry.unit_id = req.unit_id;
  entry.prompt_text = req.prompt_text;
  entry.completion_text = completion;
  entry.model = req.params.model;
  entry.recorded_at = now_utc_iso8601();
  {
    std::lock_guard<std::mutex> lock(write_mutex_);
    if (written_keys_.insert(entry.key).second) {
      append_cassette_entry(path_, entry);
    }
  }
  return completion;
}

}  // namespace cfgchain
