#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace culturestream {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  /// RBO persistence under test; expectations are stored for 0.9.
  double rbo_p = 0.9;
  unsigned seed = 20130922;
};

/// Runs the oracle suite: hand-derived values plus randomized comparisons of each
/// measure against its reference computation.
std::vector<SelftestCheck> selftest(const SelftestOptions& options = {});

/// Prints one "PASS|FAIL name detail" line per check; returns whether all passed.
bool print_selftest(std::ostream& out, const std::vector<SelftestCheck>& checks);

}  // namespace culturestream
