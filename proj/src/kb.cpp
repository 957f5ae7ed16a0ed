#include "cfgchain/kb.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "cfgchain/cfg.hpp"
#include "cfgchain/error.hpp"

namespace cfgchain {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string>& blockcfg_kinds() {
  static const std::vector<std::string> kinds = {
      "class", "method", "if", "for", "while", "switch"};
  return kinds;
}

ExampleRecord read_record(const fs::path& file) {
  std::ifstream in(file);
  if (!in) raise(ErrorCode::IoError, "cannot open " + file.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    raise(ErrorCode::InvalidExample, file.string() + ": not valid JSON");
  }
  ExampleRecord rec;
  rec.unit = j.value("unit", "");
  rec.kind = j.value("kind", "");
  rec.input = j.value("input", "");
  rec.output = j.value("output", "");
  if (j.contains("tags")) {
    for (const auto& t : j["tags"]) rec.tags.push_back(t.get<std::string>());
  }
  rec.file = file.string();
  return rec;
}

void validate_record(const ExampleRecord& rec) {
  if (rec.input.empty()) {
    raise(ErrorCode::InvalidExample, rec.file + ": empty input");
  }
  if (rec.output.empty()) {
    raise(ErrorCode::InvalidExample, rec.file + ": empty output");
  }
  try {
    if (rec.unit == "structure") {
      try {
        parse_structure_text(rec.output);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyHierarchy) throw;  // `none` is valid
      }
    } else if (rec.unit == "extract") {
      parse_extract_text(rec.output);
    } else if (rec.unit == "blockcfg" || rec.unit == "fusion" ||
               rec.unit == "direct" || rec.unit == "cot") {
      Cfg g = parse_cfgtext(rec.output);
      auto violations = validate_cfg(g);
      if (!violations.empty()) {
        raise(ErrorCode::InvalidExample,
              rec.file + ": output graph violates well-formedness: " +
                  violations.front().message);
      }
      if (rec.unit == "fusion" || rec.unit == "direct" || rec.unit == "cot") {
        for (const auto& n : g.nodes) {
          if (n.placeholder) {
            raise(ErrorCode::InvalidExample,
                  rec.file + ": fused output keeps placeholder " + n.label);
          }
        }
      }
    } else {
      raise(ErrorCode::InvalidExample, rec.file + ": unknown unit `" + rec.unit + "`");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidExample) throw;
    raise(ErrorCode::InvalidExample,
          rec.file + ": output does not parse: " + e.what());
  }
}

std::vector<fs::path> sorted_json_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

const std::vector<ExampleRecord>& KnowledgeBase::unit_examples(
    const std::string& unit) const {
  auto it = by_unit_.find(unit);
  if (it == by_unit_.end()) {
    raise(ErrorCode::UnknownKind, "no examples for unit `" + unit + "`");
  }
  return it->second;
}

const std::vector<ExampleRecord>& KnowledgeBase::blockcfg_examples(
    const std::string& kind) const {
  auto it = by_kind_.find(kind);
  if (it == by_kind_.end()) {
    raise(ErrorCode::UnknownKind, "no block examples for kind `" + kind + "`");
  }
  return it->second;
}

std::size_t KnowledgeBase::total_records() const {
  std::size_t n = 0;
  for (const auto& [unit, records] : by_unit_) n += records.size();
  for (const auto& [kind, records] : by_kind_) n += records.size();
  return n;
}

KnowledgeBase load_kb(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    raise(ErrorCode::IoError, "knowledge base directory " + dir + " not found");
  }
  KnowledgeBase kb;
  for (const auto& unit_entry : fs::directory_iterator(dir)) {
    if (!unit_entry.is_directory()) continue;
    const std::string unit = unit_entry.path().filename().string();
    if (unit == "blockcfg") {
      for (const auto& kind_entry : fs::directory_iterator(unit_entry.path())) {
        if (!kind_entry.is_directory()) continue;
        const std::string kind = kind_entry.path().filename().string();
        for (const auto& file : sorted_json_files(kind_entry.path())) {
          ExampleRecord rec = read_record(file);
          validate_record(rec);
          kb.by_kind_[kind].push_back(std::move(rec));
        }
      }
    } else {
      for (const auto& file : sorted_json_files(unit_entry.path())) {
        ExampleRecord rec = read_record(file);
        validate_record(rec);
        kb.by_unit_[unit].push_back(std::move(rec));
      }
    }
  }

  for (const std::string& kind : blockcfg_kinds()) {
    auto it = kb.by_kind_.find(kind);
    if (it == kb.by_kind_.end()) {
      raise(ErrorCode::MissingKindSet, kind);
    }
    if (it->second.size() != 5) {
      raise(ErrorCode::MissingKindSet,
            kind + ": expected 5 examples, found " +
                std::to_string(it->second.size()));
    }
  }
  if (kb.by_kind_.count("generic") && kb.by_kind_["generic"].size() != 5) {
    raise(ErrorCode::InvalidExample, "generic bucket must hold 5 examples");
  }
  for (const char* unit : {"structure", "extract", "fusion", "direct"}) {
    auto it = kb.by_unit_.find(unit);
    if (it == kb.by_unit_.end() || it->second.size() != 5) {
      raise(ErrorCode::InvalidExample,
            std::string("unit `") + unit + "` must ship exactly 5 examples");
    }
  }
  if (kb.by_unit_.count("cot") && kb.by_unit_["cot"].size() != 1) {
    raise(ErrorCode::InvalidExample, "unit `cot` ships one worked example");
  }
  return kb;
}

std::vector<ExampleRecord> retrieve_examples(const KnowledgeBase& kb,
                                             const std::string& unit_id,
                                             const std::string& kind, int k) {
  const std::vector<ExampleRecord>* set = nullptr;
  if (unit_id == "blockcfg") {
    set = &kb.blockcfg_examples(kind.empty() ? "generic" : kind);
  } else {
    set = &kb.unit_examples(unit_id);
  }
  std::vector<ExampleRecord> out;
  for (const auto& rec : *set) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(rec);
  }
  return out;
}

}  // namespace cfgchain
