#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lopt/errors.hpp"
#include "lopt/rational.hpp"

namespace lopt::cli {

/// Exit codes: 0 success, 1 verify found a failing check, 2 invalid
/// potential, 3 NotMonotone, 4 numeric failure, 5 argument error.
int exit_code(ErrorKind kind);

/// "3", "-1/10", "0.25", "1.5e-3" parsed exactly.
Rational parse_number(const std::string& text);

/// "min:max:steps", evenly spaced and inclusive; steps = 1 gives min.
struct Grid {
  Rational min;
  Rational max;
  int steps = 1;

  std::vector<Rational> points() const;
};
Grid parse_grid(const std::string& text);

std::vector<int> parse_int_list(const std::string& text);
std::vector<Rational> parse_number_list(const std::string& text);

/// Runs one subcommand. CSV goes to `out` (or the --out file), diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lopt::cli
