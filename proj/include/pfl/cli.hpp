#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pfl::cli {

enum ExitCode : int { kSuccess = 0, kAssessmentFailed = 1, kUsageError = 2 };

/// Runs one subcommand. `args` excludes the program name, e.g.
/// {"limit-velocity", "--f-max", "280", "--mu", "0.5686", "--k-nmm", "75"}.
/// Returns 0 on success/safe, 1 when an assessment fails, 2 on usage or input
/// errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace pfl::cli
