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

// Command-line front end. Every subcommand only parses flags, calls the
// library and writes CSV; no numerics live here.

#pragma once

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "powmax/powmax.hpp"

namespace powmax::cli {

using norming::Scheme;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

/// Thrown for malformed flag values that CLI11 cannot catch by type alone.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numbers are written locale-free: integral values below 1e15 as integers,
/// everything else with 12 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  std::to_chars_result r{};
  if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 1e15) {
    r = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(v));
  } else {
    r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  }
  return std::string(buf, r.ptr);
}

inline double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

/// "start:end:step" (inclusive end) or a comma-separated list such as
/// "1e4,1e6,1e8".
inline std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
      throw UsageError("range grid must look like start:end:step");
    }
    const double start = parse_number(text.substr(0, first));
    const double end = parse_number(text.substr(first + 1, second - first - 1));
    const double step = parse_number(text.substr(second + 1));
    if (!(step > 0.0) || !(end >= start)) throw UsageError("range grid needs step > 0 and end >= start");
    const double count = std::floor((end - start) / step + 1e-9);
    if (count > 1e7) throw UsageError("range grid has too many points");
    for (std::int64_t k = 0; k <= static_cast<std::int64_t>(count); ++k) {
      out.push_back(start + static_cast<double>(k) * step);
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    out.push_back(parse_number(piece));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct CliConfig {
  double sigma = 2.0;
  double t = 2.0;
  double x = 0.7;
  double n = 25.0;
  std::string kind = "cdf";
  std::string grid;
  std::string x_grid;
  std::string orders = "1,2,3";
  std::string scheme;
  std::string convention;
  std::string variant = "consistent";
  double threshold = 0.05;
  std::int64_t reps = 10000;
  std::uint64_t seed = 42;
  bool samples = false;
  std::string output;
};

namespace detail {

inline void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

inline Scheme scheme_for(const CliConfig& cfg) {
  return cfg.scheme.empty() ? norming::default_scheme(cfg.t) : norming::parse_scheme(cfg.scheme);
}

inline std::optional<exact::TableConvention> convention_for(const CliConfig& cfg) {
  if (cfg.convention.empty()) return std::nullopt;
  if (cfg.convention == "theorem") return exact::TableConvention::Theorem;
  if (cfg.convention == "published") return exact::TableConvention::PublishedTables;
  throw UsageError("--convention must be 'theorem' or 'published'");
}

inline expansions::CoefficientVariant variant_for(const CliConfig& cfg) {
  if (cfg.variant == "consistent") return expansions::CoefficientVariant::Consistent;
  if (cfg.variant == "printed") return expansions::CoefficientVariant::AsPrinted;
  throw UsageError("--variant must be 'consistent' or 'printed'");
}

inline std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_grid(text)) {
    if (v != 1.0 && v != 2.0 && v != 3.0) throw UsageError("--orders accepts only 1, 2 and 3");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

inline std::vector<double> grid_or(const std::string& text, std::string_view fallback) {
  return parse_grid(text.empty() ? fallback : std::string_view(text));
}

inline void run_bn(const CliConfig& cfg, std::ostream& os) {
  const auto base = norming::solve_bn(cfg.n, cfg.sigma);
  const auto hall = norming::hall_constants(cfg.n, cfg.sigma);
  csv_row(os, {"n", "sigma", "b_n", "a_n", "relative_residual", "b_hat", "a_hat"});
  csv_row(os, {format_number(base.n), format_number(base.sigma), format_number(base.b_n),
               format_number(base.a_n), format_number(norming::bn_relative_residual(base)),
               format_number(hall.b_hat), format_number(hall.a_hat)});
}

inline void run_constants(const CliConfig& cfg, std::ostream& os) {
  const Scheme scheme = scheme_for(cfg);
  const auto conv = convention_for(cfg).value_or(exact::TableConvention::Theorem);
  const auto setup = exact::make_setup(cfg.n, cfg.t, cfg.sigma, scheme, conv);
  csv_row(os, {"n", "t", "sigma", "scheme", "convention", "b", "c_n", "d_n"});
  csv_row(os, {format_number(cfg.n), format_number(cfg.t), format_number(cfg.sigma),
               std::string(norming::to_string(scheme)), std::string(exact::to_string(conv)),
               format_number(setup.base.b_n), format_number(setup.pn.c_n), format_number(setup.pn.d_n)});
}

inline void run_table(const CliConfig& cfg, std::ostream& os) {
  const exact::Kind kind = exact::parse_kind(cfg.kind);
  const auto grid = grid_or(cfg.grid, kind == exact::Kind::Cdf ? "25:1000:25" : "375:15000:375");
  const auto orders = parse_orders(cfg.orders);
  const auto rows = exact::error_table(kind, cfg.t, cfg.x, cfg.sigma, grid, convention_for(cfg));
  std::vector<std::string> header{"n"};
  for (int k : orders) header.push_back("err" + std::to_string(k));
  csv_row(os, header);
  for (const auto& r : rows) {
    std::vector<std::string> cells{format_number(r.n)};
    for (int k : orders) cells.push_back(format_number(k == 1 ? r.err1 : k == 2 ? r.err2 : r.err3));
    csv_row(os, cells);
  }
}

inline void run_rate(const CliConfig& cfg, std::ostream& os) {
  const auto d = exact::rate_diagnostic(exact::parse_kind(cfg.kind), cfg.t, cfg.x, cfg.sigma,
                                        grid_or(cfg.grid, "1e4,1e6,1e8,1e10,1e12"));
  csv_row(os, {"n", "b_n", "err1", "scaled"});
  for (const auto& p : d.points) {
    csv_row(os, {format_number(p.n), format_number(p.b_n), format_number(p.err1), format_number(p.scaled)});
  }
  os << "# slope," << format_number(d.slope) << '\n';
  os << "# power," << format_number(d.power) << '\n';
  os << "# expected_limit," << format_number(d.expected_limit) << '\n';
}

inline void run_compare_schemes(const CliConfig& cfg, std::ostream& os) {
  const auto c = exact::compare_schemes(cfg.x, cfg.sigma, grid_or(cfg.grid, "1e3,1e4,1e5,1e6,1e8,1e10,1e12"));
  csv_row(os, {"n", "b_n", "optimal_error", "alternative_error", "ratio"});
  for (const auto& r : c.rows) {
    csv_row(os, {format_number(r.n), format_number(r.b_n), format_number(r.optimal_error),
                 format_number(r.alternative_error), format_number(r.ratio)});
  }
  os << "# crossover," << (c.crossover ? format_number(*c.crossover) : std::string("none")) << '\n';
  os << "# ratio_slope," << format_number(c.ratio_slope) << '\n';
}

inline void run_compare_hall(const CliConfig& cfg, std::ostream& os) {
  const auto rows = exact::hall_rate_check(cfg.x, cfg.sigma, grid_or(cfg.grid, "1e3,1e4,1e6,1e8,1e10"));
  csv_row(os, {"n", "unpowered_error", "leading_term", "ratio", "powered_error"});
  for (const auto& r : rows) {
    csv_row(os, {format_number(r.n), format_number(r.unpowered_error), format_number(r.leading),
                 format_number(r.ratio), format_number(r.powered_error)});
  }
}

inline void run_adjudicate(const CliConfig& cfg, std::ostream& os) {
  const auto rep = exact::adjudicate_density_coeffs(cfg.t, grid_or(cfg.x_grid, "-1:3:0.1"), cfg.sigma,
                                                    grid_or(cfg.grid, "1e6,1e8,1e10"), cfg.threshold);
  csv_row(os, {"n", "b_n", "dev_printed", "dev_consistent", "extrap_dev_printed", "extrap_dev_consistent"});
  for (const auto& r : rep.rows) {
    csv_row(os, {format_number(r.n), format_number(r.b_n), format_number(r.dev_printed),
                 format_number(r.dev_consistent), format_number(r.extrap_dev_printed),
                 format_number(r.extrap_dev_consistent)});
  }
  os << "# threshold," << format_number(rep.threshold) << '\n';
  os << "# verdict,"
     << (rep.verdict ? std::string(expansions::to_string(*rep.verdict)) : std::string("inconclusive")) << '\n';
}

inline void run_simulate(const CliConfig& cfg, std::ostream& os) {
  if (!(cfg.n == std::trunc(cfg.n)) || cfg.n > 1e12) throw UsageError("--n must be an integer for simulate");
  montecarlo::SimulationConfig sc{static_cast<std::int64_t>(cfg.n), cfg.t, cfg.sigma, cfg.reps, cfg.seed,
                                  scheme_for(cfg)};
  const auto values = montecarlo::simulate_powered_maxima(sc);
  const double ks = montecarlo::ks_distance(values, special::gumbel_cdf);
  if (cfg.samples) {
    csv_row(os, {"rep", "value"});
    for (std::size_t i = 0; i < values.size(); ++i) {
      csv_row(os, {format_number(static_cast<double>(i)), format_number(values[i])});
    }
    os << "# ks," << format_number(ks) << '\n';
    return;
  }
  csv_row(os, {"n", "t", "sigma", "scheme", "reps", "seed", "ks"});
  csv_row(os, {format_number(cfg.n), format_number(cfg.t), format_number(cfg.sigma),
               std::string(norming::to_string(sc.scheme)), std::to_string(cfg.reps), std::to_string(cfg.seed),
               format_number(ks)});
}

inline void run_plot_data(const CliConfig& cfg, std::ostream& os) {
  const exact::Kind kind = exact::parse_kind(cfg.kind);
  const Scheme scheme = scheme_for(cfg);
  const auto conv = convention_for(cfg).value_or(exact::TableConvention::Theorem);
  const auto s = exact::make_setup(cfg.n, cfg.t, cfg.sigma, scheme, conv, variant_for(cfg));
  csv_row(os, {"x", "exact", "order1", "order2", "order3"});
  for (double x : grid_or(cfg.x_grid, "-3:8:0.05")) {
    const bool cdf = kind == exact::Kind::Cdf;
    const double ex = cdf ? exact::exact_powered_cdf_total(s.n, x, s.pn, s.params)
                          : exact::exact_powered_pdf_total(s.n, x, s.pn, s.params);
    std::vector<std::string> cells{format_number(x), format_number(ex)};
    for (int k = 1; k <= 3; ++k) {
      const expansions::ExpansionOrder order(k);
      cells.push_back(format_number(cdf ? exact::approx_cdf(order, x, s) : exact::approx_pdf(order, x, s)));
    }
    csv_row(os, cells);
  }
}

}  // namespace detail

/// Parses args (without the program name) and runs one subcommand. Returns
/// 0 on success, 1 on usage errors and 2 when the library rejects a value.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"powmax: exact and asymptotic laws of powered Maxwell maxima", "powmax"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cfg.output, "write CSV to this file instead of stdout");
  };

  auto* bn = app.add_subcommand("bn", "solve the norming equation for b_n");
  bn->add_option("--n", cfg.n, "sample size")->required();
  bn->add_option("--sigma", cfg.sigma, "Maxwell scale parameter")->capture_default_str();
  add_output(bn);

  auto* constants = app.add_subcommand("constants", "print c_n and d_n for a scheme");
  constants->add_option("--n", cfg.n, "sample size")->required();
  constants->add_option("--sigma", cfg.sigma, "Maxwell scale parameter")->capture_default_str();
  constants->add_option("--t", cfg.t, "power index")->capture_default_str();
  constants->add_option("--scheme", cfg.scheme, "general, optimal or alternative");
  constants->add_option("--convention", cfg.convention, "theorem (solved b_n) or published (closed form)");
  add_output(constants);

  auto* table = app.add_subcommand("table", "absolute errors of orders 1-3 over an n grid");
  table->add_option("--kind", cfg.kind, "cdf or pdf")->capture_default_str();
  table->add_option("--sigma", cfg.sigma, "Maxwell scale parameter")->capture_default_str();
  table->add_option("--t", cfg.t, "power index")->capture_default_str();
  table->add_option("--x", cfg.x, "evaluation point")->capture_default_str();
  table->add_option("--grid", cfg.grid, "start:end:step or comma list (default 25:1000:25 / 375:15000:375)");
  table->add_option("--orders", cfg.orders, "comma list of orders to print")->capture_default_str();
  table->add_option("--convention", cfg.convention, "theorem or published (default published at t = 2)");
  add_output(table);

  auto* rate = app.add_subcommand("rate", "fit the decay rate of the first-order error");
  rate->add_option("--kind", cfg.kind, "cdf or pdf")->capture_default_str();
  rate->add_option("--sigma", cfg.sigma, "Maxwell scale parameter")->capture_default_str();
  rate->add_option("--t", cfg.t, "power index")->capture_default_str();
  rate->add_option("--x", cfg.x, "evaluation point")->capture_default_str();
  rate->add_option("--grid", cfg.grid, "n grid (default 1e4,1e6,1e8,1e10,1e12)");
  add_output(rate);

  auto* cmp = app.add_subcommand("compare-schemes", "optimal vs alternative t = 2 norming");
  auto* hall = app.add_subcommand("compare-hall", "closed-form constants on the plain maximum vs powered");
  for (auto* sub : {cmp, hall}) {
    sub->add_option("--sigma", cfg.sigma, "Maxwell scale parameter (default 1)");
    sub->add_option("--x", cfg.x, "evaluation point")->capture_default_str();
    sub->add_option("--grid", cfg.grid, "n grid");
    add_output(sub);
  }

  auto* adj = app.add_subcommand("adjudicate", "decide between printed and derived first density coefficient");
  adj->add_option("--t", cfg.t, "power index, not 2 (default 1)");
  adj->add_option("--sigma", cfg.sigma, "Maxwell scale parameter (default 1)");
  adj->add_option("--grid", cfg.grid, "n grid (default 1e6,1e8,1e10)");
  adj->add_option("--x-grid", cfg.x_grid, "x grid (default -1:3:0.1)");
  adj->add_option("--threshold", cfg.threshold, "relative sup-norm threshold")->capture_default_str();
  add_output(adj);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo maxima and KS distance to the Gumbel law");
  sim->add_option("--n", cfg.n, "sample size (default 1000)");
  sim->add_option("--t", cfg.t, "power index")->capture_default_str();
  sim->add_option("--sigma", cfg.sigma, "Maxwell scale parameter")->capture_default_str();
  sim->add_option("--reps", cfg.reps, "number of simulated maxima")->capture_default_str();
  sim->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
  sim->add_option("--scheme", cfg.scheme, "general, optimal or alternative");
  sim->add_flag("--samples", cfg.samples, "print every normalized maximum");
  add_output(sim);

  auto* plot = app.add_subcommand("plot-data", "x sweep of exact and approximate values");
  plot->add_option("--kind", cfg.kind, "cdf or pdf")->capture_default_str();
  plot->add_option("--n", cfg.n, "sample size")->capture_default_str();
  plot->add_option("--sigma", cfg.sigma, "Maxwell scale parameter")->capture_default_str();
  plot->add_option("--t", cfg.t, "power index")->capture_default_str();
  plot->add_option("--scheme", cfg.scheme, "general, optimal or alternative");
  plot->add_option("--convention", cfg.convention, "theorem or published");
  plot->add_option("--variant", cfg.variant, "consistent or printed coefficients")->capture_default_str();
  plot->add_option("--x-grid", cfg.x_grid, "x grid (default -3:8:0.05)");
  add_output(plot);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("powmax");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  // Subcommands whose defaults differ from the table defaults.
  const bool unit_sigma = chosen == cmp || chosen == hall || chosen == adj;
  if (unit_sigma && chosen->count("--sigma") == 0) cfg.sigma = 1.0;
  if (chosen == adj && chosen->count("--t") == 0) cfg.t = 1.0;
  if (chosen == sim && chosen->count("--n") == 0) cfg.n = 1000.0;
  std::ostringstream buffer;
  try {
    if (name == "bn") detail::run_bn(cfg, buffer);
    else if (name == "constants") detail::run_constants(cfg, buffer);
    else if (name == "table") detail::run_table(cfg, buffer);
    else if (name == "rate") detail::run_rate(cfg, buffer);
    else if (name == "compare-schemes") detail::run_compare_schemes(cfg, buffer);
    else if (name == "compare-hall") detail::run_compare_hall(cfg, buffer);
    else if (name == "adjudicate") detail::run_adjudicate(cfg, buffer);
    else if (name == "simulate") detail::run_simulate(cfg, buffer);
    else detail::run_plot_data(cfg, buffer);
  } catch (const UsageError& e) {
    err << "powmax " << name << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "powmax " << name << ": " << e.what() << '\n';
    return kExitDomain;
  }

  if (cfg.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file || !(file << buffer.str())) {
      err << "powmax " << name << ": cannot write " << cfg.output << '\n';
      return kExitDomain;
    }
  }
  return kExitOk;
}

}  // namespace powmax::cli
