#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zakframe {

// Exit codes: 0 success, 1 validation or usage error, 2 verification failed.
// Machine-readable payload (JSON or CSV) goes to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zakframe
