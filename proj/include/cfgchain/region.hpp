#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfgchain/source.hpp"

namespace cfgchain {

enum class RegionType { Class, Method, If, For, While, Switch, Statement, Placeholder };

const char* region_type_name(RegionType t);

struct Region;

struct SwitchArm {
  std::string label;  // case expression text; empty for default
  bool is_default = false;
  std::vector<Region> body;
};

/// One recognized construct of the source text, with its repaired extent.
///
/// The parser never fails: missing closers are repaired by indentation,
/// brace-less bodies adopt the following deeper-indented lines, a `;` glued
/// to a loop/if header adopts the block or lines that follow it, and a lone
/// `?` where a comparison belongs is re-inferred from the loop's step
/// direction when that is unambiguous.
struct Region {
  RegionType type = RegionType::Statement;
  ByteSpan span;        // full extent, including body and else arms
  ByteSpan header;      // keyword through `)` / declaration header
  std::string header_text;

  // Control headers. `cond` holds the (possibly repaired) condition text for
  // if/while, the selector for switch, and the middle part for for-headers.
  std::string init;
  std::string cond;
  std::string update;
  ByteSpan cond_span;   // where `cond` came from, pre-repair

  bool braceless = false;
  bool repaired_close = false;
  bool adopted_empty_stmt = false;  // `;` right after the header
  bool repaired_operator = false;   // `?` re-inferred as `<` or `>`
  bool chained_else_if = false;     // this If continues an `else if` chain
  bool low_confidence = false;

  // Statement payload.
  std::string text;
  bool is_return = false;
  bool is_break = false;
  bool is_continue = false;

  std::vector<Region> body;       // members, then-arm or loop body
  std::vector<Region> else_body;  // If only
  std::vector<SwitchArm> arms;    // Switch only
  bool has_default = false;

  // Byte positions of the body's brace pair, when braced. The injector uses
  // these to remove a matching pair. npos when absent or repaired away.
  std::size_t body_open_brace = static_cast<std::size_t>(-1);
  std::size_t body_close_brace = static_cast<std::size_t>(-1);

  int header_line = 1;
  int end_line = 1;
};

struct RegionTree {
  std::vector<Region> roots;
};

RegionTree parse_regions(const SourceUnit& unit);
RegionTree parse_regions(const std::string& text);

/// Block kind of a region, when the region is one of the six block kinds.
std::optional<BlockKind> region_block_kind(const Region& r);

/// Matches `<kind>_block_<k>` (optionally followed by `;`).
bool is_placeholder_statement(const std::string& statement_text);

/// For loop regions whose comparison can be re-derived from the step
/// direction, the byte position of the single-character `<`/`>` operator.
/// Used by the error injector to pick sites the pipeline provably recovers.
std::optional<std::size_t> operator_recovery_site(const Region& loop,
                                                  const std::string& source);

}  // namespace cfgchain
