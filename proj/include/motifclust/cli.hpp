#ifndef MOTIFCLUST_CLI_HPP
#define MOTIFCLUST_CLI_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace motifclust::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kParseError = 2, kRuntimeError = 3 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputEnv = "MOTIFCLUST_OUT";

/// Entry point behind the `motifclust` binary. Subcommands: cluster,
/// prior-sim, summarize, export-trace. Never throws.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

}  // namespace motifclust::cli

#endif  // MOTIFCLUST_CLI_HPP
