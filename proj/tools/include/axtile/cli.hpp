#pragma once

#include <iosfwd>

namespace axtile::cli {

// Exit codes: 0 success, 1 failed validation or analysis assertion,
// 2 usage or parse error. Data goes to `out` (or the -o file), diagnostics
// to `err`; `in` feeds `analyze` when no patch path is given.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace axtile::cli
