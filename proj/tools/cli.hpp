#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace synpart::cli {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kContainerFormatVersion = 1;
inline constexpr int kOffsetConfigFormatVersion = 1;
inline constexpr int kPartnerTsvFormatVersion = 1;

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2 };

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on validation errors (bad flags or parameters) and 2 on I/O
/// errors. Diagnostics go to `err`, --help/--version text to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace synpart::cli
