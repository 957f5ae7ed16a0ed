#pragma once

#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>

namespace cfgchain {

struct BackendParams {
  double temperature = 0.0;  // determinism bias: always sent unless overridden
  int max_tokens = 2048;
  std::string model = "heuristic";
};

/// One completion request. `prompt_text` is what remote models consume;
/// `structured_input` is the same unit input serialized as JSON, which the
/// heuristic backend consumes so it stays prompt-independent. Replay keys on
/// the prompt text only, keeping cassettes model-agnostic.
struct BackendRequest {
  std::string unit_id;
  std::string prompt_text;
  std::string structured_input;
  BackendParams params;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const BackendRequest& req) = 0;
  virtual std::string mode() const = 0;
};

// ---------------------------------------------------------------------------
// Cassettes: append-only prompt->completion records for deterministic replay.

struct CassetteEntry {
  std::string key;  // prompt_key(prompt_text)
  std::string unit_id;
  std::string prompt_text;
  std::string completion_text;
  std::string model;
  std::string recorded_at;
};

std::string prompt_key(const std::string& prompt_text);

class Cassette {
 public:
  static Cassette load_file(const std::string& path);

  /// Exact-key lookup; no fuzzy matching. Absence is a value.
  const CassetteEntry* lookup(const std::string& prompt_text) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, CassetteEntry> entries_;
};

void append_cassette_entry(const std::string& path, const CassetteEntry& entry);

// ---------------------------------------------------------------------------
// Remote wire contract: POST {model, prompt|messages, temperature,
// max_tokens}; the response must expose a first completion text field.

struct RemoteConfig {
  std::string endpoint;                 // http://host:port
  std::string path = "/v1/completions";
  std::string wire = "prompt";          // "prompt" or "messages"
  std::string api_key;                  // from CFGCHAIN_API_KEY; never persisted
  int timeout_seconds = 30;
  int attempts = 3;
};

class HeuristicBackend : public Backend {
 public:
  std::string complete(const BackendRequest& req) override;
  std::string mode() const override { return "heuristic"; }
};

class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(Cassette cassette) : cassette_(std::move(cassette)) {}
  std::string complete(const BackendRequest& req) override;
  std::string mode() const override { return "replay"; }

 private:
  Cassette cassette_;  // immutable snapshot; lookups are lock-free
};

class HttpBackend : public Backend {
 public:
  explicit HttpBackend(RemoteConfig config) : config_(std::move(config)) {}
  std::string complete(const BackendRequest& req) override;
  std::string mode() const override { return "remote"; }

 private:
  RemoteConfig config_;
};

class RecordBackend : public Backend {
 public:
  RecordBackend(RemoteConfig config, std::string cassette_path)
      : http_(std::move(config)), path_(std::move(cassette_path)) {}
  std::string complete(const BackendRequest& req) override;
  std::string mode() const override { return "record"; }

 private:
  HttpBackend http_;
  std::string path_;
  std::mutex write_mutex_;  // appends are serialized; reads never block
  std::set<std::string> written_keys_;
};

// ---------------------------------------------------------------------------
// The deterministic unit semantics, usable with or without a prompt.

/// Implements each unit over its structured JSON input:
///   structure - keyword-driven block detection with indentation repair of
///               missing closers and semicolon-tolerant for-headers;
///   extract   - span slicing of the innermost hierarchy blocks;
///   blockcfg  - rule-based statement CFG construction (see build_cfg);
///   fusion    - the deterministic placeholder-substitution oracle;
///   cot       - a narrated four-step pass ending in the fused graph;
///   direct    - whole-input CFG construction.
/// Pure: identical inputs give byte-identical completions.
std::string heuristic_complete(const std::string& unit_id,
                               const std::string& structured_input_json);

/// Recognizes which unit a rendered prompt belongs to by its task
/// description. Raises UnsupportedUnit for foreign prompts.
std::string infer_unit_from_prompt(const std::string& prompt_text);

/// The payload of a rendered prompt (the final Input section).
std::string extract_prompt_payload(const std::string& prompt_text);

/// Answers a rendered prompt the way the remote test server does: infer the
/// unit, decode the payload into structured input, run heuristic_complete.
std::string complete_from_prompt(const std::string& prompt_text);

}  // namespace cfgchain
