#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bonacci {

/// Exit codes: 0 success, 1 a check failed, 2 usage, parse or domain error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "3", "3..5" or "3,4,6".
std::vector<int> parse_degree_range(const std::string& text);

} // namespace bonacci
