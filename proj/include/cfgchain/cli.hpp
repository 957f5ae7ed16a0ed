#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfgchain {

/// Entry point behind the `cfgchain` binary. Exit codes: 0 success, 1 domain
/// error (printed with its unit/sample context), 2 usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace cfgchain
