#pragma once

#include <iosfwd>

namespace bbpe {

/// Entry point of the `bbpe` command-line tool. Standard streams are passed
/// in so the tool can be driven in-process. Returns the process exit code:
/// 0 iff every requested output was fully written.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace bbpe
