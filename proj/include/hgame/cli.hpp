#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hgame {

namespace exit_code {
inline constexpr int Success = 0;
inline constexpr int Violation = 1; ///< invalid input or losing objective
inline constexpr int Usage = 2;
inline constexpr int Internal = 3;
} // namespace exit_code

/// Runs one `hgame` command line. `args[0]` is the program name. Artifacts go
/// to files or `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hgame
