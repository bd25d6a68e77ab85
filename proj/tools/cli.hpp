#pragma once

#include <iosfwd>

namespace motifmine::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Parses and runs one command line. Every option can also be given through a
/// MOTIFMINE_<NAME> environment variable or a TOML file passed with --config.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace motifmine::cli
