#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace obstructa {

// Batch scenario runner. Exit codes: 0 all checks pass, 1 check failures,
// 2 usage or configuration errors, 3 resource cap exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace obstructa
