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
#include <concepts>
#include <numbers>
#include <string>

#include "powmax/error.hpp"
#include "powmax/special_math.hpp"

namespace powmax::maxwell {

/// Scale parameter of the Maxwell law; always finite and positive.
class MaxwellParams {
 public:
  explicit MaxwellParams(double sigma) : sigma_(sigma) {
    detail::require_positive(sigma, "Maxwell scale sigma");
  }
  double sigma() const { return sigma_; }

 private:
  double sigma_;
};

namespace detail {
inline constexpr double kSqrt2OverPi =
    std::numbers::sqrt2 * std::numbers::inv_sqrtpi;
}  // namespace detail

/// Density sqrt(2/pi) x^2 / sigma^3 exp(-x^2 / (2 sigma^2)); zero for x <= 0.
inline double pdf(double x, const MaxwellParams& p) {
  powmax::detail::require_not_nan(x, "maxwell::pdf");
  if (x <= 0.0) return 0.0;
  const double s = p.sigma();
  const double u = x / s;
  return detail::kSqrt2OverPi * u * u / s * std::exp(-0.5 * u * u);
}

/// Distribution function erf(x / (sigma sqrt 2)) - sqrt(2/pi) (x/sigma) e^{-x^2/2sigma^2}.
inline double cdf(double x, const MaxwellParams& p) {
  powmax::detail::require_not_nan(x, "maxwell::cdf");
  if (x <= 0.0) return 0.0;
  const double u = x / p.sigma();
  const double value =
      std::erf(u / std::numbers::sqrt2) - detail::kSqrt2OverPi * u * std::exp(-0.5 * u * u);
  return value < 0.0 ? 0.0 : value;
}

/// (1 - F(x)) / (sigma^2 x^{-1} f(x)) for x > 0, formed without underflow.
///
/// Equals 1 + sqrt(pi) erfcx(z) / (2z) with z = x / (sigma sqrt 2); tends to 1
/// from above as x grows.
inline double tail_ratio(double x, const MaxwellParams& p) {
  powmax::detail::require_not_nan(x, "maxwell::tail_ratio");
  if (!(x > 0.0)) throw DomainError("maxwell::tail_ratio: x must be > 0");
  const double z = x / (p.sigma() * std::numbers::sqrt2);
  return 1.0 + std::sqrt(std::numbers::pi) / (2.0 * z) * special::erfcx(z);
}

/// Survival function 1 - F(x), never formed as 1 - cdf.
inline double survival(double x, const MaxwellParams& p) {
  powmax::detail::require_not_nan(x, "maxwell::survival");
  if (x <= 0.0) return 1.0;
  const double u = x / p.sigma();
  const double gauss = detail::kSqrt2OverPi * u * std::exp(-0.5 * u * u);
  if (u < 2.0) return std::erfc(u / std::numbers::sqrt2) + gauss;
  return gauss * tail_ratio(x, p);
}

namespace detail {

// 1 + w - w^2 + 3 w^3 with w = (sigma/x)^2, first `terms` terms, Horner form.
inline double tail_series(double x, const MaxwellParams& p, int terms, const char* what) {
  powmax::detail::require_not_nan(x, what);
  if (!(x > 0.0)) throw DomainError(std::string(what) + ": x must be > 0");
  if (terms < 1 || terms > 4) throw DomainError(std::string(what) + ": terms must lie in 1..4");
  constexpr double kCoeff[4] = {1.0, 1.0, -1.0, 3.0};
  const double w = (p.sigma() / x) * (p.sigma() / x);
  double series = kCoeff[terms - 1];
  for (int k = terms - 2; k >= 0; --k) series = kCoeff[k] + w * series;
  return series;
}

}  // namespace detail

/// Truncated large-x expansion of the survival function:
/// sigma^2 x^{-1} f(x) [1 + s^2/x^2 - s^4/x^4 + 3 s^6/x^6], first `terms` terms.
inline double tail_expansion(double x, const MaxwellParams& p, int terms) {
  const double series = detail::tail_series(x, p, terms, "maxwell::tail_expansion");
  const double s = p.sigma();
  return s * s / x * pdf(x, p) * series;
}

/// (survival - tail_expansion) / (sigma^2 x^{-1} f(x)).
///
/// Formed as tail_ratio minus the truncated series, which is the same
/// quantity without the common factor f(x); it stays meaningful where f(x)
/// itself underflows (x beyond about 38 sigma).
inline double tail_relative_remainder(double x, const MaxwellParams& p, int terms) {
  const double series = detail::tail_series(x, p, terms, "maxwell::tail_relative_remainder");
  return tail_ratio(x, p) - series;
}

/// Anything that hands out standard normal variates.
template <class T>
concept NormalSource = requires(T& t) {
  { t.normal() } -> std::convertible_to<double>;
};

/// sqrt(Z1^2 + Z2^2 + Z3^2) for three standard normals: a unit-scale Maxwell
/// variate before multiplication by sigma.
template <NormalSource Rng>
double sample_unit(Rng& rng) {
  const double z1 = rng.normal();
  const double z2 = rng.normal();
  const double z3 = rng.normal();
  return std::sqrt(z1 * z1 + z2 * z2 + z3 * z3);
}

/// One Maxwell variate; sigma is applied after the normal draws.
template <NormalSource Rng>
double sample(Rng& rng, const MaxwellParams& p) {
  return p.sigma() * sample_unit(rng);
}

}  // namespace powmax::maxwell
