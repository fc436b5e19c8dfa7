#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scdde {

struct OracleCheck {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Cross-module oracle suite at N <= 256: transforms, channel equivalence,
/// noiseless recovery, pilot exactness, oversampling and coding.
std::vector<OracleCheck> run_oracle_suite();

/// Prints the suite as a table; true when every check passed.
bool selftest(std::ostream& out);

}  // namespace scdde
