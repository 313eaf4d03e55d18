#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcevis {

enum ExitCode : int { kOk = 0, kInternal = 1, kInputError = 2, kDegenerate = 3 };

/// Runs one `hcevis` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcevis
