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

// Exact finite-n law of the normalized powered maximum and the error
// diagnostics built on it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "powmax/error.hpp"
#include "powmax/expansions.hpp"
#include "powmax/maxwell.hpp"
#include "powmax/norming.hpp"
#include "powmax/special_math.hpp"

namespace powmax::exact {

using expansions::ApproxOptions;
using expansions::CoefficientVariant;
using expansions::ExpansionOrder;
using maxwell::MaxwellParams;
using norming::NormingBase;
using norming::PoweredNorming;
using norming::Scheme;

/// v = c_n x + d_n and its t-th root, the point where F is evaluated.
struct PoweredArgument {
  double value;
  double root;
};

inline PoweredArgument powered_argument(double x, const PoweredNorming& pn) {
  powmax::detail::require_not_nan(x, "powered argument");
  const double v = std::fma(pn.c_n, x, pn.d_n);
  if (!(v > 0.0)) {
    throw DomainError("x = " + std::to_string(x) + " lies below the support edge (c_n x + d_n <= 0)");
  }
  return {v, pn.t == 2.0 ? std::sqrt(v) : std::pow(v, 1.0 / pn.t)};
}

namespace detail {

inline void check_n(double n) {
  if (std::isnan(n) || !(n >= 1.0) || !std::isfinite(n)) {
    throw DomainError("sample size must be finite and >= 1");
  }
}

// log F(y), accurate both when F is tiny and when it is close to 1.
inline double log_cdf(double y, const MaxwellParams& p) {
  const double s = maxwell::survival(y, p);
  if (s < 0.5) return std::log1p(-s);
  return std::log(maxwell::cdf(y, p));
}

}  // namespace detail

/// P(|M_n|^t <= c_n x + d_n) = F(v^{1/t})^n, evaluated as exp(n log F).
inline double exact_powered_cdf(double n, double x, const PoweredNorming& pn,
                                const MaxwellParams& p) {
  detail::check_n(n);
  const PoweredArgument arg = powered_argument(x, pn);
  return std::exp(n * detail::log_cdf(arg.root, p));
}

/// Density in x of the normalized powered maximum:
/// (n c_n / t) v^{1/t - 1} F^{n-1}(v^{1/t}) f(v^{1/t}).
inline double exact_powered_pdf(double n, double x, const PoweredNorming& pn,
                                const MaxwellParams& p) {
  detail::check_n(n);
  const PoweredArgument arg = powered_argument(x, pn);
  const double jac = n * pn.c_n / pn.t * (arg.root / arg.value);
  return jac * std::exp((n - 1.0) * detail::log_cdf(arg.root, p)) * maxwell::pdf(arg.root, p);
}

/// Total versions: probability and density 0 below the support edge.
inline double exact_powered_cdf_total(double n, double x, const PoweredNorming& pn,
                                      const MaxwellParams& p) {
  if (!(std::fma(pn.c_n, x, pn.d_n) > 0.0)) return 0.0;
  return exact_powered_cdf(n, x, pn, p);
}

inline double exact_powered_pdf_total(double n, double x, const PoweredNorming& pn,
                                      const MaxwellParams& p) {
  if (!(std::fma(pn.c_n, x, pn.d_n) > 0.0)) return 0.0;
  return exact_powered_pdf(n, x, pn, p);
}

// ---------------------------------------------------------------------------
// Error metrics.

/// Theorem: solved b_n with the derived coefficients.
/// PublishedTables: the closed-form centering b_hat with the printed t = 2
/// coefficients and signs, which is what reproduces the published tables.
enum class TableConvention { Theorem, PublishedTables };

inline std::string_view to_string(TableConvention c) {
  return c == TableConvention::Theorem ? "theorem" : "published";
}

/// Everything needed to compare exact and approximate values at one (n, t).
struct ErrorSetup {
  double n;
  double t;
  MaxwellParams params;
  NormingBase base;
  PoweredNorming pn;
  ApproxOptions options;
};

inline ErrorSetup make_setup(double n, double t, double sigma, Scheme scheme,
                             TableConvention convention = TableConvention::Theorem,
                             CoefficientVariant variant = CoefficientVariant::Consistent) {
  const MaxwellParams params(sigma);
  NormingBase base{};
  ApproxOptions opt{variant, expansions::SignConvention::Theorem};
  if (convention == TableConvention::PublishedTables) {
    if (t != 2.0 || scheme != Scheme::SquareOptimal) {
      throw ConfigurationError("the published-table convention is defined only for t = 2 with the optimal scheme");
    }
    const norming::HallConstants h = norming::hall_constants(n, sigma);
    base = {n, sigma, h.b_hat, h.a_hat};
    opt = ApproxOptions::published_tables();
  } else {
    base = norming::solve_bn(n, sigma);
  }
  return {n, t, params, base, norming::powered_constants(base, t, scheme), opt};
}

inline double approx_cdf(ExpansionOrder order, double x, const ErrorSetup& s) {
  return expansions::cdf_approx(order, s.t, x, s.base, s.pn.scheme, s.options);
}

inline double approx_pdf(ExpansionOrder order, double x, const ErrorSetup& s) {
  return expansions::pdf_approx(order, s.t, x, s.base, s.pn.scheme, s.options);
}

/// |F^n(v^{1/t}) - T^(order)(x)|.
inline double abs_error_cdf(ExpansionOrder order, double x, const ErrorSetup& s) {
  return std::abs(exact_powered_cdf(s.n, x, s.pn, s.params) - approx_cdf(order, x, s));
}

/// |exact density - S^(order)(x)|.
inline double abs_error_pdf(ExpansionOrder order, double x, const ErrorSetup& s) {
  return std::abs(exact_powered_pdf(s.n, x, s.pn, s.params) - approx_pdf(order, x, s));
}

enum class Kind { Cdf, Pdf };

inline Kind parse_kind(std::string_view name) {
  if (name == "cdf") return Kind::Cdf;
  if (name == "pdf") return Kind::Pdf;
  throw ConfigurationError("unknown kind '" + std::string(name) + "' (expected cdf or pdf)");
}

inline double abs_error(Kind kind, ExpansionOrder order, double x, const ErrorSetup& s) {
  return kind == Kind::Cdf ? abs_error_cdf(order, x, s) : abs_error_pdf(order, x, s);
}

struct ErrorRow {
  double n;
  double err1;
  double err2;
  double err3;
};

/// The convention that matches the published tables where they exist.
inline TableConvention default_convention(double t) {
  return t == 2.0 ? TableConvention::PublishedTables : TableConvention::Theorem;
}

/// One row of absolute errors (orders 1..3) per sample size. The optimal
/// scheme is used at t = 2 and the general scheme otherwise.
inline std::vector<ErrorRow> error_table(Kind kind, double t, double x, double sigma,
                                         const std::vector<double>& n_grid,
                                         std::optional<TableConvention> convention = std::nullopt) {
  const Scheme scheme = norming::default_scheme(t);
  const TableConvention conv = convention.value_or(default_convention(t));
  std::vector<ErrorRow> rows;
  rows.reserve(n_grid.size());
  for (double n : n_grid) {
    const ErrorSetup s = make_setup(n, t, sigma, scheme, conv);
    rows.push_back({n, abs_error(kind, ExpansionOrder(1), x, s), abs_error(kind, ExpansionOrder(2), x, s),
                    abs_error(kind, ExpansionOrder(3), x, s)});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Rate diagnostics.

namespace detail {

// Least-squares slope of ys against xs.
inline double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t m = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (!(sxx > 0.0)) throw DiagnosticsError("slope fit: abscissae are all equal");
  return sxy / sxx;
}

inline void require_decades(const std::vector<double>& n_grid, double decades, const char* what) {
  if (n_grid.size() < 3) throw DiagnosticsError(std::string(what) + ": need at least 3 grid points");
  const auto [lo, hi] = std::minmax_element(n_grid.begin(), n_grid.end());
  if (!(*lo >= norming::kMinSampleSize)) {
    throw DomainError(std::string(what) + ": grid contains n < 3");
  }
  if (std::log10(*hi / *lo) < decades - 1e-12) {
    throw DiagnosticsError(std::string(what) + ": grid must span at least " +
                           std::to_string(static_cast<int>(decades)) + " decades");
  }
}

}  // namespace detail

struct RatePoint {
  double n;
  double b_n;
  double err1;
  double scaled;  ///< err1 * b_n^p, p = 4 for the t = 2 optimal scheme, 2 otherwise
};

struct RateDiagnostic {
  double slope;           ///< fitted d log(err1) / d log(b_n)
  double power;           ///< p used in the scaled column
  double expected_limit;  ///< leading-term limit of the scaled column
  std::vector<RatePoint> points;
};

/// Fits the decay of the first-order error against b_n (solved, derived
/// convention) and reports err1 * b_n^p together with its predicted limit.
inline RateDiagnostic rate_diagnostic(Kind kind, double t, double x, double sigma,
                                      const std::vector<double>& n_grid) {
  detail::require_decades(n_grid, 3.0, "rate_diagnostic");
  const Scheme scheme = norming::default_scheme(t);
  const bool square = t == 2.0;
  RateDiagnostic out{};
  out.power = square ? 4.0 : 2.0;
  if (kind == Kind::Cdf) {
    const double coeff = square ? expansions::coeff_B1(x, sigma) : expansions::coeff_A1(t, x, sigma);
    out.expected_limit = std::abs(coeff) * std::exp(-x) * special::gumbel_cdf(x);
  } else {
    const double coeff =
        square ? expansions::coeff_Q1(x, sigma) : expansions::coeff_P1_consistent(t, x, sigma);
    out.expected_limit = std::abs(coeff) * special::gumbel_pdf(x);
  }
  std::vector<double> lx, ly;
  for (double n : n_grid) {
    const ErrorSetup s = make_setup(n, t, sigma, scheme);
    const double e = abs_error(kind, ExpansionOrder(1), x, s);
    const double b = s.base.b_n;
    out.points.push_back({n, b, e, e * std::pow(b, out.power)});
    if (!(e > 0.0)) throw DiagnosticsError("rate_diagnostic: first-order error vanished at n = " + std::to_string(n));
    lx.push_back(std::log(b));
    ly.push_back(std::log(e));
  }
  out.slope = detail::ls_slope(lx, ly);
  return out;
}

struct HallRow {
  double n;
  double unpowered_error;  ///< F^n(a_hat x + b_hat) - Lambda(x), signed
  double leading;          ///< leading-term prediction of the line above
  double ratio;            ///< unpowered_error / leading
  double powered_error;    ///< first-order cdf error at t = 2, optimal scheme
};

/// Closed-form constants on the plain maximum versus the powered maximum.
inline std::vector<HallRow> hall_rate_check(double x, double sigma, const std::vector<double>& n_grid) {
  const MaxwellParams p(sigma);
  std::vector<HallRow> rows;
  for (double n : n_grid) {
    const norming::HallConstants h = norming::hall_constants(n, sigma);
    const PoweredNorming plain{1.0, Scheme::GeneralPower, h.a_hat, h.b_hat};
    const double unpowered = exact_powered_cdf(n, x, plain, p) - special::gumbel_cdf(x);
    const double lead = expansions::hall_error_leading(n, x, sigma);
    const ErrorSetup s = make_setup(n, 2.0, sigma, Scheme::SquareOptimal);
    rows.push_back({n, unpowered, lead, unpowered / lead, abs_error_cdf(ExpansionOrder(1), x, s)});
  }
  return rows;
}

struct SchemeRow {
  double n;
  double b_n;
  double optimal_error;
  double alternative_error;
  double ratio;  ///< alternative / optimal
};

struct SchemeComparison {
  std::vector<SchemeRow> rows;
  /// Smallest grid n from which the optimal scheme wins at every later grid
  /// point; empty if it does not win at the last point.
  std::optional<double> crossover;
  double ratio_slope;  ///< d log(ratio) / d log(b_n)
};

/// Order-2 cdf errors under the optimal and the alternative t = 2 norming.
inline SchemeComparison compare_schemes(double x, double sigma, const std::vector<double>& n_grid) {
  if (n_grid.empty()) throw DiagnosticsError("compare_schemes: empty grid");
  SchemeComparison out{};
  std::vector<double> lx, ly;
  for (double n : n_grid) {
    const ErrorSetup opt = make_setup(n, 2.0, sigma, Scheme::SquareOptimal);
    const ErrorSetup alt = make_setup(n, 2.0, sigma, Scheme::SquareAlternative);
    const double eo = abs_error_cdf(ExpansionOrder(2), x, opt);
    const double ea = abs_error_cdf(ExpansionOrder(2), x, alt);
    out.rows.push_back({n, opt.base.b_n, eo, ea, ea / eo});
    if (eo > 0.0 && ea > 0.0) {
      lx.push_back(std::log(opt.base.b_n));
      ly.push_back(std::log(ea / eo));
    }
  }
  for (std::size_t i = out.rows.size(); i-- > 0;) {
    if (!(out.rows[i].optimal_error < out.rows[i].alternative_error)) break;
    out.crossover = out.rows[i].n;
  }
  out.ratio_slope = lx.size() >= 2 ? detail::ls_slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

// ---------------------------------------------------------------------------
// Density coefficient adjudication.

struct AdjudicationRow {
  double n;
  double b_n;
  double dev_printed;     ///< sup |R - P1_printed| / sup |P1_printed|
  double dev_consistent;  ///< sup |R - P1_consistent| / sup |P1_consistent|
  /// Same deviations for the limit estimate L = (b_k^2 R_k - b_j^2 R_j) / (b_k^2 - b_j^2)
  /// built with the previous grid point j; NaN on the first row.
  double extrap_dev_printed;
  double extrap_dev_consistent;
};

struct AdjudicationReport {
  double t;
  double threshold;
  std::vector<AdjudicationRow> rows;
  /// The one variant whose extrapolated deviation at the largest n is below
  /// the threshold, if exactly one is (raw deviations when the grid has a
  /// single point).
  std::optional<CoefficientVariant> verdict;
};

/// R(n, x) = [exact density / Lambda'(x) - 1] b_n^2, which tends to the true
/// first density coefficient. Compared on x_grid with both published and
/// derived P1.
inline double scaled_density_residual(double n, double t, double x, double sigma) {
  const ErrorSetup s = make_setup(n, t, sigma, Scheme::GeneralPower);
  const double ratio = exact_powered_pdf(n, x, s.pn, s.params) / special::gumbel_pdf(x);
  return (ratio - 1.0) * s.base.b_n * s.base.b_n;
}

inline AdjudicationReport adjudicate_density_coeffs(double t, const std::vector<double>& x_grid,
                                                    double sigma, const std::vector<double>& n_grid,
                                                    double threshold = 0.05) {
  if (t == 2.0) {
    throw BranchError("adjudicate_density_coeffs: t = 2 has no competing density coefficients");
  }
  powmax::detail::require_positive(t, "adjudicate_density_coeffs: t");
  if (x_grid.empty() || n_grid.empty()) throw DiagnosticsError("adjudicate_density_coeffs: empty grid");
  double sup_printed = 0.0, sup_consistent = 0.0;
  for (double x : x_grid) {
    sup_printed = std::max(sup_printed, std::abs(expansions::coeff_P1_printed(t, x, sigma)));
    sup_consistent = std::max(sup_consistent, std::abs(expansions::coeff_P1_consistent(t, x, sigma)));
  }
  if (!(sup_printed > 0.0) || !(sup_consistent > 0.0)) {
    throw DiagnosticsError("adjudicate_density_coeffs: coefficients vanish on the x grid");
  }
  AdjudicationReport rep{t, threshold, {}, std::nullopt};
  std::vector<double> ns = n_grid;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> prev_r;
  double prev_b2 = kNaN;
  for (double n : ns) {
    const double b = norming::solve_bn(n, sigma).b_n;
    const double b2 = b * b;
    std::vector<double> r(x_grid.size());
    double dp = 0.0, dc = 0.0, ep = 0.0, ec = 0.0;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      const double x = x_grid[i];
      const double printed = expansions::coeff_P1_printed(t, x, sigma);
      const double consistent = expansions::coeff_P1_consistent(t, x, sigma);
      r[i] = scaled_density_residual(n, t, x, sigma);
      dp = std::max(dp, std::abs(r[i] - printed));
      dc = std::max(dc, std::abs(r[i] - consistent));
      if (!prev_r.empty()) {
        const double lim = (b2 * r[i] - prev_b2 * prev_r[i]) / (b2 - prev_b2);
        ep = std::max(ep, std::abs(lim - printed));
        ec = std::max(ec, std::abs(lim - consistent));
      }
    }
    const bool first = prev_r.empty();
    rep.rows.push_back({n, b, dp / sup_printed, dc / sup_consistent,
                        first ? kNaN : ep / sup_printed, first ? kNaN : ec / sup_consistent});
    prev_r = std::move(r);
    prev_b2 = b2;
  }
  const AdjudicationRow& last = rep.rows.back();
  const bool single = rep.rows.size() == 1;
  const bool printed_ok = (single ? last.dev_printed : last.extrap_dev_printed) < threshold;
  const bool consistent_ok = (single ? last.dev_consistent : last.extrap_dev_consistent) < threshold;
  if (printed_ok != consistent_ok) {
    rep.verdict = printed_ok ? CoefficientVariant::AsPrinted : CoefficientVariant::Consistent;
  }
  return rep;
}

}  // namespace powmax::exact
