#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lbp::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kRefused = 3 };

// args excludes the program name. Results go to out, diagnostics to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lbp::cli
