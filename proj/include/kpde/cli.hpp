#pragma once

#include <iosfwd>

namespace kpde {

/// Entry point of the `kpde` tool. Exit codes: 0 success, 1 usage or
/// configuration error, 2 numerical failure (blow-up, fit failure, failed check).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace kpde
