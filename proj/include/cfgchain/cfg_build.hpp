#pragma once

#include <string>

#include "cfgchain/cfg.hpp"
#include "cfgchain/region.hpp"

namespace cfgchain {

/// Rule-based CFG construction over the tolerant region tree:
///   - statements chain in sequence;
///   - `if` becomes a condition node with true/false branches;
///   - `for` becomes init, condition, body, update with a back edge and a
///     false exit; `while` analogously;
///   - `switch` fans out one labeled edge per case plus default;
///   - `return` ends its path; `break`/`continue` route to the enclosing
///     construct when one is in scope;
///   - a block identifier statement becomes a placeholder node.
/// Branches that have nowhere to go inside the fragment stay open; fusion
/// closes them against the surrounding graph.
Cfg build_cfg(const RegionTree& tree);

Cfg build_cfg_from_source(const std::string& text);

}  // namespace cfgchain
