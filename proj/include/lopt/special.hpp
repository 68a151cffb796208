#pragma once

#include "lopt/bigfloat.hpp"

namespace lopt {

/// erf(x) to relative error <= 2^(8-P). Maclaurin series for |x| <= 2,
/// continued fraction for erfc beyond. Exactly odd.
BigFloat erf_highprec(const BigFloat& x, Precision p);

/// erfc(x) for x > 2 by continued fraction (no cancellation).
BigFloat erfc_large(const BigFloat& x, Precision p);

}  // namespace lopt
