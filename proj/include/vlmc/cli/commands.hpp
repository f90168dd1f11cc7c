#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vlmc::cli {

/// Runs one vlmc-walks invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on a model or usage error and 2 when an
/// inconclusive series blocks the requested analysis. Wall time goes to
/// `err` so that `out` depends only on the arguments and the model.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vlmc::cli
