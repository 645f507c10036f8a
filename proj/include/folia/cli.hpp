#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace folia::cli {

/// Runs one CLI invocation. Exit 0 on success, 1 on usage/IO errors, 2 on mathematical
/// refutation (non-involutive module, failed counterexample verification).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace folia::cli
