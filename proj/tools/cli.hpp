#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dct3d::cli {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitInputFormat = 3,    // unreadable or out-of-range media input
  kExitCorruptStream = 4,  // damaged or truncated 3DCT stream
  kExitRange = 5,          // coefficients beyond Huffman table coverage
  kExitInvalidArgument = 6,
};

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dct3d::cli
