#pragma once

#include <cmath>

namespace circuitkit::detail {

#if defined(__SIZEOF_FLOAT128__)
using Wide = __float128;
#else
using Wide = long double;
#endif

// Square root seeded in long double and refined by one Newton step.
inline Wide wide_sqrt(Wide x) {
  if (x <= 0) return 0;
  const Wide y = std::sqrt(static_cast<long double>(x));
  return (y + x / y) / 2;
}

}  // namespace circuitkit::detail
