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

// Higher-order expansions of the distribution and density of the normalized
// powered maximum (|M_n|^t - d_n) / c_n of Maxwell samples.
//
// Every approximation has the form
//   cdf:  Lambda(x)  [1 + u_1(x) eps + u_2(x) eps^2 + ...]
//   pdf:  Lambda'(x) [1 + v_1(x) eps + v_2(x) eps^2 + ...]
// with eps = b_n^{-2}. Differentiating the cdf series term by term gives
// v_k = u_k + e^x u_k', which is how the density coefficients are checked.
//
// Where the published formulas disagree with that relation (or with the
// exact distribution), both forms are provided: CoefficientVariant::AsPrinted
// and CoefficientVariant::Consistent. Consistent is the default.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "powmax/error.hpp"
#include "powmax/norming.hpp"
#include "powmax/special_math.hpp"

namespace powmax::expansions {

using norming::NormingBase;
using norming::Scheme;

/// Approximation order 1, 2 or 3. Order 1 is the Gumbel limit itself; order k
/// adds the first k - 1 correction terms of the series.
class ExpansionOrder {
 public:
  explicit ExpansionOrder(int order) : order_(order) {
    if (order < 1 || order > 3) {
      throw ConfigurationError("expansion order must be 1, 2 or 3, got " + std::to_string(order));
    }
  }
  int value() const { return order_; }
  int correction_terms() const { return order_ - 1; }

 private:
  int order_;
};

enum class CoefficientVariant { Consistent, AsPrinted };

inline std::string_view to_string(CoefficientVariant v) {
  return v == CoefficientVariant::Consistent ? "consistent" : "printed";
}

/// Theorem: the signs that follow from the expansion of F^n.
/// PublishedTables: the signs under which the published t = 2 error tables
/// were produced (B1 term of the cdf and Q2 term of the density negated).
enum class SignConvention { Theorem, PublishedTables };

struct ApproxOptions {
  CoefficientVariant variant = CoefficientVariant::Consistent;
  SignConvention signs = SignConvention::Theorem;

  static ApproxOptions published_tables() {
    return {CoefficientVariant::AsPrinted, SignConvention::PublishedTables};
  }
};

namespace detail {

template <std::size_t N>
constexpr double horner(const std::array<double, N>& c, double x) {
  double acc = 0.0;
  for (std::size_t k = N; k-- > 0;) acc = acc * x + c[k];
  return acc;
}

inline void require_general_branch(double t, const char* what) {
  powmax::detail::require_positive(t, what);
  if (t == 2.0) {
    throw BranchError(std::string(what) + ": defined for t != 2; use the t = 2 coefficients");
  }
}

inline bool printed(CoefficientVariant v) { return v == CoefficientVariant::AsPrinted; }

}  // namespace detail

// ---------------------------------------------------------------------------
// t != 2 coefficients.

/// A1 = sigma^2 [1 + x + (t-2) x^2 / 2].
inline double coeff_A1(double t, double x, double sigma) {
  detail::require_general_branch(t, "coeff_A1");
  return sigma * sigma * detail::horner(std::array{1.0, 1.0, 0.5 * (t - 2.0)}, x);
}

/// A2 = sigma^4 [(t-2)^2 x^4 / 8 + (t-2)(5-2t) x^3 / 6 - x^2/2 - x - 1].
inline double coeff_A2(double t, double x, double sigma) {
  detail::require_general_branch(t, "coeff_A2");
  const double s4 = sigma * sigma * sigma * sigma;
  const double d = t - 2.0;
  return s4 * detail::horner(std::array{-1.0, -1.0, -0.5, d * (5.0 - 2.0 * t) / 6.0, d * d / 8.0}, x);
}

inline double coeff_A1_prime(double t, double x, double sigma) {
  detail::require_general_branch(t, "coeff_A1_prime");
  return sigma * sigma * detail::horner(std::array{1.0, t - 2.0}, x);
}

inline double coeff_A2_prime(double t, double x, double sigma) {
  detail::require_general_branch(t, "coeff_A2_prime");
  const double s4 = sigma * sigma * sigma * sigma;
  const double d = t - 2.0;
  return s4 * detail::horner(std::array{-1.0, -1.0, d * (5.0 - 2.0 * t) / 2.0, d * d / 2.0}, x);
}

/// Density coefficient P1 exactly as published:
/// sigma^2 { -[(t-2)x^2/2 + x + 1] e^{-x} + (t-2) x^2 - (t-3) x }.
inline double coeff_P1_printed(double t, double x, double sigma) {
  detail::require_general_branch(t, "coeff_P1");
  const double s2 = sigma * sigma;
  const double a = detail::horner(std::array{1.0, 1.0, 0.5 * (t - 2.0)}, x);
  return s2 * (-a * std::exp(-x) + x * ((t - 2.0) * x - (t - 3.0)));
}

/// P1 = -e^{-x} A1 + A1 - A1', the coefficient obtained by differentiating
/// the cdf expansion. Its x^2 term is (t-2)/2, half the published one.
inline double coeff_P1_consistent(double t, double x, double sigma) {
  detail::require_general_branch(t, "coeff_P1_consistent");
  const double s2 = sigma * sigma;
  const double a = detail::horner(std::array{1.0, 1.0, 0.5 * (t - 2.0)}, x);
  return s2 * (-a * std::exp(-x) + x * (0.5 * (t - 2.0) * x - (t - 3.0)));
}

/// Published P2.
inline double coeff_P2_printed(double t, double x, double sigma) {
  detail::require_general_branch(t, "coeff_P2");
  const double s4 = sigma * sigma * sigma * sigma;
  const double d = t - 2.0;
  const double a = detail::horner(std::array{1.0, 1.0, 0.5 * d}, x);
  const double e = std::exp(-x);
  const double mid = detail::horner(
      std::array{-1.0, 0.0, 2.0 * t + 0.5, -d * (5.0 * t / 6.0 - 10.0 / 3.0), 5.0 * d / 8.0}, x);
  const double tail = detail::horner(
      std::array{0.0, 0.5 * (t - 3.0) * (2.0 * t - 3.0), -d * (5.0 * t / 6.0 - 11.0 / 6.0), d * d / 8.0},
      x);
  return s4 * (0.5 * a * a * e * e - mid * e + tail);
}

/// P2 from u2 + e^x u2' with u2 = e^{-x} [e^{-x} A1^2 / 2 - A2]:
/// e^{-2x} A1^2 / 2 - e^{-x} (A2 + A1^2 - A1 A1') + A2 - A2'.
inline double coeff_P2_consistent(double t, double x, double sigma) {
  const double a1 = coeff_A1(t, x, sigma);
  const double a1p = coeff_A1_prime(t, x, sigma);
  const double a2 = coeff_A2(t, x, sigma);
  const double a2p = coeff_A2_prime(t, x, sigma);
  const double e = std::exp(-x);
  return 0.5 * a1 * a1 * e * e - e * (a2 + a1 * a1 - a1 * a1p) + a2 - a2p;
}

inline double coeff_P1(double t, double x, double sigma, CoefficientVariant v) {
  return detail::printed(v) ? coeff_P1_printed(t, x, sigma) : coeff_P1_consistent(t, x, sigma);
}

inline double coeff_P2(double t, double x, double sigma, CoefficientVariant v) {
  return detail::printed(v) ? coeff_P2_printed(t, x, sigma) : coeff_P2_consistent(t, x, sigma);
}

// ---------------------------------------------------------------------------
// t = 2 coefficients under the optimal norming.

/// B1 = -sigma^4 (x^2 + x + 1/2).
inline double coeff_B1(double x, double sigma) {
  const double s4 = sigma * sigma * sigma * sigma;
  return -s4 * detail::horner(std::array{0.5, 1.0, 1.0}, x);
}

inline double coeff_B1_prime(double x, double sigma) {
  const double s4 = sigma * sigma * sigma * sigma;
  return -s4 * detail::horner(std::array{1.0, 2.0}, x);
}

/// B2 = sigma^6 (4x^3/3 + 2x^2 + 2x + 7/3). The published form has -2x; the
/// exact distribution and the published Q2 polynomial part both require +2x.
inline double coeff_B2(double x, double sigma, CoefficientVariant v = CoefficientVariant::Consistent) {
  const double s6 = sigma * sigma * sigma * sigma * sigma * sigma;
  const double linear = detail::printed(v) ? -2.0 : 2.0;
  return s6 * detail::horner(std::array{7.0 / 3.0, linear, 2.0, 4.0 / 3.0}, x);
}

inline double coeff_B2_prime(double x, double sigma,
                             CoefficientVariant v = CoefficientVariant::Consistent) {
  const double s6 = sigma * sigma * sigma * sigma * sigma * sigma;
  const double linear = detail::printed(v) ? -2.0 : 2.0;
  return s6 * detail::horner(std::array{linear, 4.0, 4.0}, x);
}

/// Q1 = sigma^4 [(x^2 + x + 1/2) e^{-x} - x^2 + x + 1/2].
inline double coeff_Q1(double x, double sigma) {
  const double s4 = sigma * sigma * sigma * sigma;
  return s4 * (detail::horner(std::array{0.5, 1.0, 1.0}, x) * std::exp(-x) +
               detail::horner(std::array{0.5, 1.0, -1.0}, x));
}

/// Q2 = -sigma^6 [(4x^3/3 + 2x^2 +- 2x + 7/3) e^{-x} - 4x^3/3 + 2x^2 + 2x - 1/3],
/// with -2x in the published form and +2x in the consistent one.
inline double coeff_Q2(double x, double sigma, CoefficientVariant v = CoefficientVariant::Consistent) {
  const double s6 = sigma * sigma * sigma * sigma * sigma * sigma;
  const double linear = detail::printed(v) ? -2.0 : 2.0;
  return -s6 * (detail::horner(std::array{7.0 / 3.0, linear, 2.0, 4.0 / 3.0}, x) * std::exp(-x) +
                detail::horner(std::array{-1.0 / 3.0, 2.0, 2.0, -4.0 / 3.0}, x));
}

// ---------------------------------------------------------------------------
// t = 2 under the alternative norming c_n = 2s^2(1 - s^2/b^2), d_n = b^2 - 2s^4/b^2.

/// u_k(x): coefficient of b_n^{-2k} in F^n / Lambda, k = 1, 2, 3.
inline double alternative_cdf_term(int k, double x, double sigma,
                                   CoefficientVariant v = CoefficientVariant::Consistent) {
  const double s2 = sigma * sigma;
  const double e = std::exp(-x);
  const double xp1 = x + 1.0;
  switch (k) {
    case 1:
      return -2.0 * s2 * e * xp1;
    case 2: {
      const double c0 = detail::printed(v) ? -1.5 : 0.5;
      return s2 * s2 * e * (2.0 * e * xp1 * xp1 + detail::horner(std::array{c0, -1.0, -1.0}, x));
    }
    case 3: {
      const double cubic = 4.0 / 3.0 * e * e * xp1 * xp1 * xp1;
      const double mid = detail::printed(v)
                             ? 2.0 * xp1 * detail::horner(std::array{1.5, 1.0, 1.0}, x)
                             : detail::horner(std::array{-1.0, 1.0, 4.0, 2.0}, x);
      const double c0 = detail::printed(v) ? 14.0 / 3.0 : 8.0 / 3.0;
      const double poly = detail::horner(std::array{c0, 3.0, 2.0, 2.0 / 3.0}, x);
      return -s2 * s2 * s2 * e * (cubic - e * mid + poly);
    }
    default:
      throw ConfigurationError("alternative_cdf_term: k must be 1, 2 or 3");
  }
}

/// v_k(x): coefficient of b_n^{-2k} in density / Lambda', k = 1, 2, 3.
inline double alternative_pdf_term(int k, double x, double sigma,
                                   CoefficientVariant v = CoefficientVariant::Consistent) {
  const double s2 = sigma * sigma;
  const double e = std::exp(-x);
  const double xp1 = x + 1.0;
  const bool pr = detail::printed(v);
  switch (k) {
    case 1:
      return -2.0 * s2 * (e * xp1 - x);
    case 2: {
      const double lin = pr ? 1.5 : -0.5;
      const double c0 = pr ? 0.5 : -1.5;
      return s2 * s2 *
             (2.0 * e * e * xp1 * xp1 - detail::horner(std::array{lin, 5.0, 5.0}, x) * e +
              detail::horner(std::array{c0, -1.0, 1.0}, x));
    }
    case 3: {
      const double s6 = s2 * s2 * s2;
      if (pr) {
        return s6 * (4.0 * x * xp1 * xp1 * e * e -
                     detail::horner(std::array{1.0, 2.0, 2.0, 4.0}, x) * e +
                     detail::horner(std::array{-7.0 / 6.0, -1.0, 0.0, 2.0 / 3.0}, x));
      }
      return s6 * (-4.0 / 3.0 * xp1 * xp1 * xp1 * e * e * e +
                   detail::horner(std::array{-1.0, 5.0, 12.0, 6.0}, x) * e * e +
                   detail::horner(std::array{1.0 / 3.0, 3.0, -4.0, -14.0 / 3.0}, x) * e +
                   detail::horner(std::array{-1.0 / 3.0, -1.0, 0.0, 2.0 / 3.0}, x));
    }
    default:
      throw ConfigurationError("alternative_pdf_term: k must be 1, 2 or 3");
  }
}

// ---------------------------------------------------------------------------
// Series brackets and approximations.

/// Coefficient u_k of b^{-2k} in the cdf bracket for a scheme (k = 1..3).
/// Zero where the series has no term of that order.
inline double cdf_series_term(int k, double t, double x, double sigma, Scheme scheme,
                              const ApproxOptions& opt = {}) {
  norming::check_scheme(t, scheme);
  const double e = std::exp(-x);
  switch (scheme) {
    case Scheme::GeneralPower:
      if (k == 1) return -e * coeff_A1(t, x, sigma);
      if (k == 2) {
        const double a1 = coeff_A1(t, x, sigma);
        return e * (0.5 * e * a1 * a1 - coeff_A2(t, x, sigma));
      }
      return 0.0;
    case Scheme::SquareOptimal: {
      const bool published = opt.signs == SignConvention::PublishedTables;
      if (k == 2) return (published ? e : -e) * coeff_B1(x, sigma);
      if (k == 3) return -e * coeff_B2(x, sigma, opt.variant);
      return 0.0;
    }
    case Scheme::SquareAlternative:
      return alternative_cdf_term(k, x, sigma, opt.variant);
  }
  return 0.0;
}

/// Coefficient v_k of b^{-2k} in the density bracket for a scheme (k = 1..3).
inline double pdf_series_term(int k, double t, double x, double sigma, Scheme scheme,
                              const ApproxOptions& opt = {}) {
  norming::check_scheme(t, scheme);
  switch (scheme) {
    case Scheme::GeneralPower:
      if (k == 1) return coeff_P1(t, x, sigma, opt.variant);
      if (k == 2) return coeff_P2(t, x, sigma, opt.variant);
      return 0.0;
    case Scheme::SquareOptimal: {
      const bool published = opt.signs == SignConvention::PublishedTables;
      if (k == 2) return coeff_Q1(x, sigma);
      if (k == 3) return (published ? -1.0 : 1.0) * coeff_Q2(x, sigma, opt.variant);
      return 0.0;
    }
    case Scheme::SquareAlternative:
      return alternative_pdf_term(k, x, sigma, opt.variant);
  }
  return 0.0;
}

namespace detail {

// Power of b^{-2} carried by the j-th correction term of a scheme.
inline int correction_power(Scheme scheme, int j) {
  return scheme == Scheme::SquareOptimal ? j + 1 : j;
}

template <class Term>
double bracket(ExpansionOrder order, Scheme scheme, double b, Term&& term) {
  const double eps = 1.0 / (b * b);
  double sum = 1.0;
  for (int j = 1; j <= order.correction_terms(); ++j) {
    const int k = correction_power(scheme, j);
    sum += term(k) * std::pow(eps, k);
  }
  return sum;
}

inline void check_options(Scheme scheme, const ApproxOptions& opt) {
  if (opt.signs == SignConvention::PublishedTables && scheme != Scheme::SquareOptimal) {
    throw ConfigurationError("published-table signs exist only for the t = 2 optimal scheme");
  }
}

}  // namespace detail

/// T^(order)(x) for an arbitrary centering value b (solved root or closed form).
inline double cdf_approx_at(ExpansionOrder order, double t, double x, double sigma, double b,
                            Scheme scheme, const ApproxOptions& opt = {}) {
  powmax::detail::require_not_nan(x, "cdf_approx");
  powmax::detail::require_positive(b, "cdf_approx: b");
  norming::check_scheme(t, scheme);
  detail::check_options(scheme, opt);
  const double br = detail::bracket(order, scheme, b, [&](int k) {
    return cdf_series_term(k, t, x, sigma, scheme, opt);
  });
  return special::gumbel_cdf(x) * br;
}

/// S^(order)(x) for an arbitrary centering value b.
inline double pdf_approx_at(ExpansionOrder order, double t, double x, double sigma, double b,
                            Scheme scheme, const ApproxOptions& opt = {}) {
  powmax::detail::require_not_nan(x, "pdf_approx");
  powmax::detail::require_positive(b, "pdf_approx: b");
  norming::check_scheme(t, scheme);
  detail::check_options(scheme, opt);
  const double br = detail::bracket(order, scheme, b, [&](int k) {
    return pdf_series_term(k, t, x, sigma, scheme, opt);
  });
  return special::gumbel_pdf(x) * br;
}

/// Order-1..3 approximation of P(|M_n|^t <= c_n x + d_n) under the solved b_n.
inline double cdf_approx(ExpansionOrder order, double t, double x, const NormingBase& base,
                         Scheme scheme, const ApproxOptions& opt = {}) {
  return cdf_approx_at(order, t, x, base.sigma, base.b_n, scheme, opt);
}

/// Order-1..3 approximation of the density of (|M_n|^t - d_n) / c_n.
inline double pdf_approx(ExpansionOrder order, double t, double x, const NormingBase& base,
                         Scheme scheme, const ApproxOptions& opt = {}) {
  return pdf_approx_at(order, t, x, base.sigma, base.b_n, scheme, opt);
}

/// Leading error term of the un-powered maximum under the closed-form
/// constants: Lambda(x) e^{-x} (log(2 log n))^2 / (16 log n). Independent of
/// sigma; the parameter is kept for a uniform call shape.
inline double hall_error_leading(double n, double x, double /*sigma*/) {
  powmax::detail::require_not_nan(x, "hall_error_leading");
  if (std::isnan(n) || !(n >= norming::kMinSampleSize)) {
    throw DomainError("hall_error_leading: sample size must be >= 3");
  }
  const double log_n = std::log(n);
  const double ll = std::log(2.0 * log_n);
  return special::gumbel_cdf(x) * std::exp(-x) * ll * ll / (16.0 * log_n);
}

// ---------------------------------------------------------------------------
// Von Mises tail representation of X^t.

struct TailComponents {
  double g;      ///< auxiliary factor tending to 1
  double f_aux;  ///< auxiliary function; its derivative tends to 0
};

/// 1 - F_t(x) = C_t(x) exp(-int_1^x g/f_aux du):
///   t != 2: g = 1 - s^2 x^{-2/t}, f_aux = s^2 t x^{1 - 2/t};
///   t == 2: g = 1 + s^4 x^{-2},   f_aux = 2 s^2 (1 + s^2 / x).
inline TailComponents tail_rep_components(double t, double x, double sigma) {
  powmax::detail::require_positive(t, "tail_rep_components: t");
  powmax::detail::require_not_nan(x, "tail_rep_components");
  if (!(x > 0.0)) throw DomainError("tail_rep_components: x must be > 0");
  const double s2 = sigma * sigma;
  if (t == 2.0) return {1.0 + s2 * s2 / (x * x), 2.0 * s2 * (1.0 + s2 / x)};
  return {1.0 - s2 * std::pow(x, -2.0 / t), s2 * t * std::pow(x, 1.0 - 2.0 / t)};
}

/// Closed form of int_1^x g(u) / f_aux(u) du for the components above.
inline double tail_rep_exponent(double t, double x, double sigma) {
  (void)tail_rep_components(t, x, sigma);
  const double s2 = sigma * sigma;
  if (t == 2.0) {
    return (x - 1.0) / (2.0 * s2) + 0.5 * std::log(x) - std::log((x + s2) / (1.0 + s2));
  }
  return (std::pow(x, 2.0 / t) - 1.0) / (2.0 * s2) - std::log(x) / t;
}

/// lim C_t(x) as x -> infinity: sqrt(2/pi) e^{-1/(2 s^2)} / s for t != 2 and
/// (1 + s^2) times that for t = 2 (the extra factor is the lower-limit term of
/// the t = 2 integral).
inline double tail_rep_limit_constant(double t, double sigma) {
  powmax::detail::require_positive(t, "tail_rep_limit_constant: t");
  powmax::detail::require_positive(sigma, "tail_rep_limit_constant: sigma");
  const double base = std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 / (sigma * sigma)) / sigma;
  return t == 2.0 ? (1.0 + sigma * sigma) * base : base;
}

}  // namespace powmax::expansions
