#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levelblend::cli {

/// Runs the command line `args` (program name excluded). Returns the process
/// exit code: 0 on success, 1 on errors, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levelblend::cli
