#pragma once

#include <iosfwd>

namespace polylink::cli {

/// Entry point of the `polylink` tool. Returns 0 on success, 2 on usage
/// errors and 1 on runtime errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polylink::cli
