#ifndef QDECONV_CLI_COMMANDS_H
#define QDECONV_CLI_COMMANDS_H

#include <ostream>

#include "qdeconv/errors.h"

namespace qdeconv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitMath = 3;
inline constexpr int kExitResourceCap = 4;

/// Environment variable naming the directory that relative --out paths are
/// resolved against.
inline constexpr const char *kOutputDirEnv = "QDECONV_OUTPUT_DIR";

int exit_code_for(ErrorCode code) noexcept;

/// Parses argv and runs one subcommand. Results go to `out` (or the --out
/// file), diagnostics to `err`. Returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qdeconv::cli

#endif
