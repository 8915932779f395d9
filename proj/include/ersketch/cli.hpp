#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>

namespace ersketch {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitCapability = 3,
  kExitConvergence = 4,
};

/// FNV-1a 64-bit hash, used for output digests in run manifests.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Entry point for the `ersketch` tool. Tabular or JSON results go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ersketch
