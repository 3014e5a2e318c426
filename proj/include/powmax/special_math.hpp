// Copyright 2026 The powmax Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>

#include "powmax/error.hpp"

namespace powmax::special {

/// Error function. Backed by the C library, which is accurate to a couple of
/// ulps over the whole line and exactly odd.
inline double erf(double x) {
  detail::require_not_nan(x, "erf");
  return std::erf(x);
}

/// Complementary error function, relative accuracy kept while the result is
/// a normal double (x below about 26.5).
inline double erfc(double x) {
  detail::require_not_nan(x, "erfc");
  return std::erfc(x);
}

namespace detail {

// exp(z*z) with the rounding error of the square carried separately.
inline double exp_of_square(double z) {
  const double hi = z * z;
  const double lo = std::fma(z, z, -hi);
  return std::exp(hi) * std::exp(lo);
}

}  // namespace detail

/// Scaled complementary error function exp(x^2) erfc(x).
///
/// Finite for every x >= 0, which is what lets Maxwell tail ratios be formed
/// far beyond the point where erfc itself underflows.
inline double erfcx(double x) {
  powmax::detail::require_not_nan(x, "erfcx");
  if (x < 0.0) return 2.0 * detail::exp_of_square(x) - erfcx(-x);
  if (x < 26.0) return detail::exp_of_square(x) * std::erfc(x);
  // Asymptotic series; at x >= 26 the 12th term is below 1e-30 relative.
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(2.0 * k - 1.0) * inv2x2;
    sum += term;
  }
  return sum * std::numbers::inv_sqrtpi / x;
}

/// Standard Gumbel distribution function exp(-exp(-x)).
inline double gumbel_cdf(double x) {
  powmax::detail::require_not_nan(x, "gumbel_cdf");
  return std::exp(-std::exp(-x));
}

/// Gumbel density exp(-x - exp(-x)).
inline double gumbel_pdf(double x) {
  powmax::detail::require_not_nan(x, "gumbel_pdf");
  if (x < -700.0) return 0.0;
  return std::exp(-x - std::exp(-x));
}

}  // namespace powmax::special
