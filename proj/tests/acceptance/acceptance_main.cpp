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

// Acceptance suite: one PASS/FAIL line per criterion. With --only N a single
// criterion runs; the exit status is the number of failed criteria.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "powmax/powmax.hpp"
#include "support/quadrature.hpp"

namespace {

using namespace powmax;
using exact::Kind;
using expansions::ExpansionOrder;
using norming::Scheme;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> range(double start, double end, double step) {
  std::vector<double> out;
  for (double v = start; v <= end + 1e-9; v += step) out.push_back(v);
  return out;
}

Outcome table_match(Kind kind, const std::string& file, const std::vector<double>& grid) {
  const auto golden = test_support::read_csv_file(std::string(POWMAX_GOLDEN_DIR) + "/" + file);
  const auto start = std::chrono::steady_clock::now();
  const auto rows = exact::error_table(kind, 2.0, 0.7, 2.0, grid);
  const double elapsed = seconds_since(start);
  if (rows.size() != golden.rows.size()) return {false, "row count mismatch"};
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& g = golden.rows[i];
    if (rows[i].n != g[0]) return {false, "n mismatch"};
    worst = std::max({worst, std::abs(rows[i].err1 - g[1]), std::abs(rows[i].err2 - g[2]),
                      std::abs(rows[i].err3 - g[3])});
  }
  const bool ok = worst <= 1e-6 && elapsed < 2.0;
  return {ok, std::to_string(rows.size() * 3) + " values, max |diff| " + fmt("%.2e", worst) + ", " +
                  fmt("%.3f s", elapsed)};
}

Outcome c1() { return table_match(Kind::Cdf, "cdf_errors_sigma2_x0.7.csv", range(25, 1000, 25)); }
Outcome c2() { return table_match(Kind::Pdf, "pdf_errors_sigma2_x0.7.csv", range(375, 15000, 375)); }

Outcome c3() {
  int bad = 0, total = 0;
  for (const auto& [kind, grid] : {std::pair{Kind::Cdf, range(25, 1000, 25)}, std::pair{Kind::Pdf, range(375, 15000, 375)}}) {
    for (const auto& r : exact::error_table(kind, 2.0, 0.7, 2.0, grid)) {
      ++total;
      if (!(r.err3 <= r.err2 && r.err2 <= r.err1)) ++bad;
    }
  }
  return {bad == 0, std::to_string(total) + " rows, " + std::to_string(bad) + " violations"};
}

Outcome c4() {
  std::mt19937_64 gen(2718);
  std::uniform_real_distribution<double> ux(-3.0, 5.0);
  double worst1 = 0.0, worst2 = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = ux(gen);
    const double e = std::exp(-x);
    const double b1 = expansions::coeff_B1(x, 1.0), b2 = expansions::coeff_B2(x, 1.0);
    worst1 = std::max(worst1, std::abs(expansions::coeff_Q1(x, 1.0) - (-e * b1 + b1 - expansions::coeff_B1_prime(x, 1.0))));
    worst2 = std::max(worst2, std::abs(expansions::coeff_Q2(x, 1.0) - (-e * b2 + b2 - expansions::coeff_B2_prime(x, 1.0))));
  }
  return {worst1 <= 1e-12 && worst2 <= 1e-12,
          "1000 x in [-3,5], max dev Q1 " + fmt("%.1e", worst1) + ", Q2 " + fmt("%.1e", worst2)};
}

Outcome c5() {
  const std::vector<double> grid{1e4, 1e6, 1e8, 1e10, 1e12};
  const auto d2 = exact::rate_diagnostic(Kind::Cdf, 2.0, 0.7, 2.0, grid);
  const auto d1 = exact::rate_diagnostic(Kind::Cdf, 1.0, 0.7, 2.0, grid);
  const auto d3 = exact::rate_diagnostic(Kind::Cdf, 3.0, 0.7, 2.0, grid);
  const double scaled = d2.points[3].scaled / d2.expected_limit;
  const bool ok = std::abs(d2.slope + 4.0) <= 0.4 && std::abs(d1.slope + 2.0) <= 0.4 &&
                  std::abs(d3.slope + 2.0) <= 0.4 && std::abs(scaled - 1.0) <= 0.2;
  return {ok, "slopes t=2 " + fmt("%.3f", d2.slope) + ", t=1 " + fmt("%.3f", d1.slope) + ", t=3 " +
                  fmt("%.3f", d3.slope) + "; scaled/limit at 1e10 " + fmt("%.3f", scaled)};
}

Outcome c6() {
  bool ok = true;
  std::string detail;
  for (const auto& r : exact::hall_rate_check(0.7, 1.0, {1e4, 1e6, 1e8})) {
    ok = ok && r.powered_error < std::abs(r.unpowered_error);
    detail += fmt("n=%.0e: ", r.n) + fmt("%.2e", r.powered_error) + " < " + fmt("%.2e; ", std::abs(r.unpowered_error));
  }
  return {ok, detail};
}

Outcome c7() {
  const auto c = exact::compare_schemes(0.7, 1.0, {1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e10, 1e12});
  bool all = true;
  for (const auto& r : c.rows) all = all && r.optimal_error < r.alternative_error;
  const bool ok = all && std::abs(c.ratio_slope - 2.0) <= 0.4;
  return {ok, std::string(all ? "optimal < alternative on all 8 n" : "optimal loses somewhere") +
                  ", ratio slope " + fmt("%.3f", c.ratio_slope)};
}

Outcome c8() {
  bool ok = true;
  std::string detail;
  for (double s : {0.5, 1.0, 2.0}) {
    const maxwell::MaxwellParams p(s);
    double lo = 1e300, hi = 0.0;
    for (double x = 8.0 * s; x <= 40.0 * s + 1e-9; x += 0.25 * s) {
      const double rem = std::abs(maxwell::tail_relative_remainder(x, p, 4));
      const double scaled = rem * std::pow(x / s, 8);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    ok = ok && hi / lo <= 10.0;
    detail += fmt("sigma=%.1f: ", s) + fmt("[%.2f, ", lo) + fmt("%.2f]; ", hi);
  }
  return {ok, "scaled remainder band " + detail};
}

Outcome c9() {
  const double h = 1e-5;
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    for (double n : {25.0, 100.0, 1e4, 1e8}) {
      const auto s = exact::make_setup(n, t, 2.0, norming::default_scheme(t));
      for (double x = -2.0; x <= 6.0; x += 0.1) {
        const double fd = (exact::exact_powered_cdf(n, x + h, s.pn, s.params) -
                           exact::exact_powered_cdf(n, x - h, s.pn, s.params)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - exact::exact_powered_pdf(n, x, s.pn, s.params)));
      }
    }
  }
  const auto s = exact::make_setup(100.0, 2.0, 2.0, Scheme::SquareOptimal);
  const double lo = std::max(-6.0, -s.pn.d_n / s.pn.c_n);
  const double mass = test_support::integrate(
      [&](double x) { return exact::exact_powered_pdf_total(s.n, x, s.pn, s.params); }, lo, 30.0, 1e-13);
  const bool ok = worst <= 1e-7 && std::abs(mass - 1.0) <= 1e-8;
  return {ok, "max |pdf - FD| " + fmt("%.1e", worst) + ", |mass - 1| " + fmt("%.1e", std::abs(mass - 1.0))};
}

Outcome c10() {
  constexpr std::uint64_t kSeed = 42;
  constexpr std::int64_t kReps = 10000;
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::vector<double>> ks(2);
  const double ts[2] = {1.0, 2.0};
  for (std::int64_t n : {100, 1000, 10000}) {
    // One set of maxima per n serves both powers: |M|^t is a deterministic
    // transform of the same simulated M.
    const auto maxima = montecarlo::simulate_maxima(n, 1.0, kSeed, 0, kReps);
    for (int i = 0; i < 2; ++i) {
      const montecarlo::SimulationConfig cfg{n, ts[i], 1.0, kReps, kSeed, norming::default_scheme(ts[i])};
      cfg.validate();
      const auto v = montecarlo::normalize_maxima(maxima, montecarlo::simulation_constants(cfg));
      ks[i].push_back(montecarlo::ks_distance(v, special::gumbel_cdf));
    }
  }
  const double elapsed = seconds_since(start);
  bool ok = elapsed < 30.0;
  std::string detail;
  for (int i = 0; i < 2; ++i) {
    const bool dec = ks[i][0] > ks[i][1] && ks[i][1] > ks[i][2];
    ok = ok && dec;
    detail += fmt("t=%.0f KS ", ts[i]) + fmt("%.4f,", ks[i][0]) + fmt("%.4f,", ks[i][1]) +
              fmt("%.4f", ks[i][2]) + (dec ? " decreasing; " : " NOT decreasing; ");
  }
  return {ok, detail + fmt("%.1f s", elapsed)};
}

Outcome c11() {
  const auto rep = exact::adjudicate_density_coeffs(1.0, range(-1.0, 3.0, 0.05), 1.0, {1e6, 1e8, 1e10});
  const auto& last = rep.rows.back();
  const bool ok = rep.verdict.has_value();
  std::string v = ok ? std::string(expansions::to_string(*rep.verdict)) : "none";
  return {ok, "t=1, n=1e10: extrapolated dev printed " + fmt("%.3f", last.extrap_dev_printed) + ", derived " +
                  fmt("%.4f", last.extrap_dev_consistent) + " (raw " + fmt("%.3f", last.dev_printed) + " / " +
                  fmt("%.3f", last.dev_consistent) + "); verdict " + v};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"powmax acceptance suite"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"cdf table reproduction", c1},       {"pdf table reproduction", c2},
      {"order monotonicity", c3},          {"Q identities", c4},
      {"rate slopes and scaled limit", c5}, {"powered beats closed-form plain maximum", c6},
      {"optimal vs alternative scheme", c7}, {"tail expansion remainder band", c8},
      {"exact layer self-consistency", c9}, {"Monte Carlo KS convergence", c10},
      {"density coefficient adjudication", c11}};

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  return failed;
}
