#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wavid::cli {

enum ExitCode { ok = 0, usage = 1, numerical = 2 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wavid::cli
