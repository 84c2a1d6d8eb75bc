#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corcon {

/// Environment variable consulted for the worker count when --threads is absent.
inline constexpr const char* kThreadsEnvVar = "CORCON_THREADS";

/// Runs the `corcon` command line. Returns 0 on success, 2 on usage or
/// configuration errors and 1 on any other failure.
int cli_main(int argc, const char* const* argv);

/// Same, with explicit arguments (argv[0] excluded) and output streams.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace corcon
