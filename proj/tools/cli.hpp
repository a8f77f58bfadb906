#pragma once

#include <string>
#include <vector>

namespace fsmreq::cli {

/// Exit codes: 0 success/pass, 1 test failure or guarantee violation found,
/// 2 usage error, 3 input format error.
int run(const std::vector<std::string>& args);

} // namespace fsmreq::cli
