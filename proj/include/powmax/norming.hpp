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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "powmax/error.hpp"

namespace powmax::norming {

/// Smallest admissible sample size: sqrt(pi/2) (s/b) exp(b^2/2s^2) has
/// minimum sqrt(pi e / 2) ~ 2.066 at b = s, so an increasing-branch root
/// exists only for n above it.
inline constexpr double kMinSampleSize = 3.0;

/// Solution of sqrt(pi/2) (sigma/b_n) exp(b_n^2 / 2 sigma^2) = n together with
/// a_n = sigma^2 / b_n.
///
/// The sample size is carried as a double so asymptotic checks can go past
/// the range of 64-bit integers; n need not be integral.
struct NormingBase {
  double n;
  double sigma;
  double b_n;
  double a_n;
};

namespace detail {

inline void check_sample_size(double n, const char* what) {
  if (std::isnan(n) || !std::isfinite(n)) {
    throw DomainError(std::string(what) + ": sample size must be finite");
  }
  if (n < kMinSampleSize) {
    throw NoRootError(std::string(what) + ": sample size n = " + std::to_string(n) +
                      " is below 3; no root with b_n > sigma exists");
  }
}

// log n split as hi + lo, with lo recovering the rounding error of std::log.
struct SplitLog {
  double hi;
  double lo;
};

inline SplitLog split_log(double n) {
  const double hi = std::log(n);
  return {hi, std::log1p(std::fma(n, std::exp(-hi), -1.0))};
}

// log of the left-hand side minus log n, as a function of b.
//
// u^2 / 2 and log n are both near log n and cancel; the square is formed
// exactly with fma and log n carries its rounding error, so the result is
// accurate to a few ulps of log u rather than of log n.
inline double log_residual(double b, double sigma, const SplitLog& log_n) {
  const double u = b / sigma;
  const double sq = u * u;
  const double sq_err = std::fma(u, u, -sq);
  const double head = 0.5 * sq - log_n.hi;
  return head + (0.5 * sq_err - log_n.lo) + (0.5 * std::log(0.5 * std::numbers::pi) - std::log(u));
}

}  // namespace detail

/// Closed-form centering and scaling constants of the un-powered maximum
/// (Hall-type approximation to the root):
///   a_hat = sigma / sqrt(2 log n),
///   b_hat = sigma sqrt(2 log n) + sigma [log(2 log n) + log(2/pi)] / (2 sqrt(2 log n)).
struct HallConstants {
  double a_hat;
  double b_hat;
};

inline HallConstants hall_constants(double n, double sigma) {
  powmax::detail::require_positive(sigma, "hall_constants: sigma");
  if (std::isnan(n) || !(n >= kMinSampleSize) || !std::isfinite(n)) {
    throw DomainError("hall_constants: sample size must be finite and >= 3");
  }
  const double two_log_n = 2.0 * std::log(n);
  const double root = std::sqrt(two_log_n);
  const double shift =
      sigma * (std::log(two_log_n) + std::log(2.0 / std::numbers::pi)) / (2.0 * root);
  return {sigma / root, sigma * root + shift};
}

/// Relative residual (LHS - n) / n of the norming equation at b.
inline double bn_relative_residual(const NormingBase& base) {
  return std::expm1(detail::log_residual(base.b_n, base.sigma, detail::split_log(base.n)));
}

/// Unique root of the norming equation with b_n > sigma.
///
/// Newton on the log-residual, seeded from the closed form and safeguarded by
/// a bracket on [sigma, 4 sigma sqrt(max(1, log n))]. The log-residual is
/// convex and increasing on that bracket.
inline NormingBase solve_bn(double n, double sigma) {
  powmax::detail::require_positive(sigma, "solve_bn: sigma");
  detail::check_sample_size(n, "solve_bn");
  const detail::SplitLog log_n = detail::split_log(n);

  double lo = sigma;
  double hi = 4.0 * sigma * std::sqrt(std::max(1.0, log_n.hi));
  double b = std::clamp(hall_constants(n, sigma).b_hat, lo, hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double h = detail::log_residual(b, sigma, log_n);
    if (h > 0.0) {
      hi = b;
    } else {
      lo = b;
    }
    const double slope = b / (sigma * sigma) - 1.0 / b;
    const double step = h / slope;
    // Test convergence before the bracket check: at the root the Newton
    // step may land exactly on the bracket end just updated from b.
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * b) {
      b -= step;
      break;
    }
    double next = b - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    b = next;
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
  }
  return {n, sigma, b, sigma * sigma / b};
}

/// The three linear norming families for |M_n|^t.
///
/// GeneralPower is the t != 2 family d_n = b_n^t, c_n = sigma^2 t b_n^{t-2};
/// SquareOptimal and SquareAlternative are the two t = 2 choices whose
/// centerings differ by +-2 sigma^4 / b_n^2.
enum class Scheme { GeneralPower, SquareOptimal, SquareAlternative };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::GeneralPower: return "general";
    case Scheme::SquareOptimal: return "optimal";
    case Scheme::SquareAlternative: return "alternative";
  }
  return "unknown";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "general") return Scheme::GeneralPower;
  if (name == "optimal") return Scheme::SquareOptimal;
  if (name == "alternative") return Scheme::SquareAlternative;
  throw ConfigurationError("unknown norming scheme '" + std::string(name) +
                           "' (expected general, optimal or alternative)");
}

/// Scheme used by default for a power index: SquareOptimal at t = 2,
/// GeneralPower otherwise.
inline Scheme default_scheme(double t) {
  return t == 2.0 ? Scheme::SquareOptimal : Scheme::GeneralPower;
}

inline void check_scheme(double t, Scheme scheme) {
  powmax::detail::require_positive(t, "power index t");
  if (scheme == Scheme::GeneralPower && t == 2.0) {
    throw ConfigurationError("general scheme requires t != 2; use optimal or alternative");
  }
  if (scheme != Scheme::GeneralPower && t != 2.0) {
    throw ConfigurationError(std::string(to_string(scheme)) + " scheme requires t = 2, got t = " +
                             std::to_string(t));
  }
}

/// Norming of the powered maximum: P(|M_n|^t <= c_n x + d_n).
struct PoweredNorming {
  double t;
  Scheme scheme;
  double c_n;
  double d_n;
};

/// Constants built from an arbitrary centering value b (the solved root in
/// normal use; the closed form b_hat when reproducing published tables).
inline PoweredNorming powered_constants(double b, double sigma, double t, Scheme scheme) {
  check_scheme(t, scheme);
  powmax::detail::require_positive(b, "centering b");
  powmax::detail::require_positive(sigma, "sigma");
  const double s2 = sigma * sigma;
  const double inv_b2 = 1.0 / (b * b);
  switch (scheme) {
    case Scheme::GeneralPower:
      return {t, scheme, s2 * t * std::pow(b, t - 2.0), std::pow(b, t)};
    case Scheme::SquareOptimal:
      return {t, scheme, 2.0 * s2 * (1.0 + s2 * inv_b2), b * b + 2.0 * s2 * s2 * inv_b2};
    case Scheme::SquareAlternative: {
      const double c = 2.0 * s2 * (1.0 - s2 * inv_b2);
      if (!(c > 0.0)) {
        throw DegenerateError("alternative scheme needs b^2 > sigma^2 (c_n <= 0)");
      }
      return {t, scheme, c, b * b - 2.0 * s2 * s2 * inv_b2};
    }
  }
  throw ConfigurationError("unknown scheme");
}

inline PoweredNorming powered_constants(const NormingBase& base, double t, Scheme scheme) {
  return powered_constants(base.b_n, base.sigma, t, scheme);
}

}  // namespace powmax::norming
