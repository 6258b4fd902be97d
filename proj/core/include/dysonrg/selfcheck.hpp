#pragma once

#include <ostream>
#include <string>

namespace dysonrg {

struct SelfCheckOptions {
  bool interval_mode = false;
  std::string mutate;  // fault injection for testing the harness, e.g. "rho"
};

// Golden-number regression suite: every published anchor value of the two
// kernels plus quick structural checks. Prints one line per check and returns
// the number of failures.
int run_selfcheck(const SelfCheckOptions& options, std::ostream& out);

}  // namespace dysonrg
