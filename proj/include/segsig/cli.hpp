#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace segsig::cli {

/// Runs one command (simulate, detect, estimate, risk-sweep, tail, rates).
/// Returns 0 on success, 2 on usage errors, 1 on runtime failures.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace segsig::cli
