#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ballmapper {

/// Entry point of the `ballmapper` tool. Returns 0 on success, 1 on I/O or
/// validation failure, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ballmapper
