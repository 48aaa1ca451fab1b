#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigma::cli {

enum ExitCode : int { kOk = 0, kInvalidConfig = 2, kAcceptanceFailure = 3, kUnwritableOutput = 4 };

/// Runs sigmactl with the given arguments (argv[0] excluded). Reads
/// SIGMA_SEED from the environment when no seed is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sigma::cli
