#pragma once

// Command-line front end. Exit codes: 0 ok, 2 domain, 3 convergence, 4 io.

#include <iosfwd>
#include <string>
#include <vector>

namespace expfun {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitIo = 4;

/// Runs one command; `args` excludes the program name. Results go to `out`
/// (or the --output file), warnings and error JSON to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace expfun
