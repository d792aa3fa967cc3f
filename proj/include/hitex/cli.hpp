#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hitex {

// Exit codes: 0 success, 1 internal failure, 2 usage or validation error.
// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hitex
