#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cpovm::cli {

enum ExitCode : int {
  kPass = 0,
  kInvariantFailure = 1,
  kConfigError = 2,
  kReconstructionImpossible = 3,
  kRegimeError = 4,
};

/// Largest |G| for commands that only materialize Weyl matrices.
inline constexpr std::size_t kMaxOrder = 256;
/// Largest |G| for commands that materialize all |G|² POVM effects.
inline constexpr std::size_t kMaxPovmOrder = 64;

/// Runs the command line `args` (without the program name). Reports go to `out`
/// unless --out is given, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpovm::cli
