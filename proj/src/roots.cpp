#include "lopt/roots.hpp"

#include <utility>

#include "lopt/errors.hpp"

namespace lopt {

BigFloat find_root_bracketed(const RealFunction& f, const BigFloat& lo, const BigFloat& hi,
                             const BigFloat& tol, const RootOptions& options) {
  BigFloat a = lo;
  BigFloat b = hi;
  if (b < a) std::swap(a, b);
  BigFloat fa = f(a);
  BigFloat fb = f(b);
  if (fa.is_zero()) return a;
  if (fb.is_zero()) return b;
  if (fa.sign() == fb.sign()) {
    throw Error(ErrorKind::NoSignChange, "f(" + a.str(12) + ") = " + fa.str(6) + " and f(" + b.str(12) +
                                             ") = " + fb.str(6) + " have the same sign");
  }

  // Illinois variant of regula falsi: the retained endpoint's value is halved
  // whenever it survives twice, so both bracket ends converge. A bisection is
  // forced whenever three steps fail to halve the bracket.
  int retained_side = 0;
  BigFloat checkpoint_width = b - a;
  int since_checkpoint = 0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const BigFloat width = b - a;
    if (width <= tol) break;
    BigFloat mid = (a + b) / 2;
    if (mid == a || mid == b) break;  // bracket at machine resolution

    BigFloat x = mid;
    const bool force_bisect = since_checkpoint >= 3;
    if (options.secant_acceleration && !force_bisect) {
      BigFloat candidate = b - fb * (b - a) / (fb - fa);
      if (candidate > a && candidate < b) x = std::move(candidate);
    }
    if (force_bisect) {
      x = mid;
      since_checkpoint = 0;
      checkpoint_width = width;
    }

    BigFloat fx = f(x);
    if (fx.is_zero()) return x;
    if (fx.sign() == fb.sign()) {
      b = std::move(x);
      fb = std::move(fx);
      if (retained_side == -1) fa /= 2;
      retained_side = -1;
    } else {
      a = std::move(x);
      fa = std::move(fx);
      if (retained_side == 1) fb /= 2;
      retained_side = 1;
    }
    ++since_checkpoint;
    if (b - a <= checkpoint_width / 2) {
      since_checkpoint = 0;
      checkpoint_width = b - a;
    }
  }
  if (b - a > tol && (a + b) / 2 != a && (a + b) / 2 != b) {
    throw Error(ErrorKind::NonConvergence, "root bracket did not shrink to tolerance");
  }
  return (a + b) / 2;
}

}  // namespace lopt
