// The combing-forge command line.
#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace cf {

// Exit codes: 0 success, 1 domain error, 2 usage error. The JSON report goes to
// `out` (and to --json OUT when given); messages go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cf
