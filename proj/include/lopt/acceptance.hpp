#pragma once

#include <string>
#include <vector>

#include "lopt/potential.hpp"

namespace lopt {

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
  int id = 0;
  std::string title;
  CheckStatus status = CheckStatus::Skip;
  std::string detail;
  double seconds = 0;
};

/// Runs checks 1-10. With the reference quartic Q^2/2 - Q^4 every check
/// runs; any other potential gets the property checks (1, 2 when the
/// potential is purely quartic, 9, 10) and the quantitative ones are skipped.
std::vector<CheckResult> run_acceptance(const Potential& pot, Precision p = kDefaultPrecision);

bool is_reference_quartic(const Potential& pot);

/// "PASS  4  curve-A convergence  (12.3 s)  detail"
std::string format_check(const CheckResult& r);

}  // namespace lopt
