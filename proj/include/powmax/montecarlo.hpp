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

// Monte Carlo check that normalized powered maxima approach the Gumbel law.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "powmax/error.hpp"
#include "powmax/maxwell.hpp"
#include "powmax/norming.hpp"
#include "powmax/random.hpp"

namespace powmax::montecarlo {

using norming::Scheme;

inline constexpr std::int64_t kMinReps = 100;

struct SimulationConfig {
  std::int64_t n = 1000;
  double t = 1.0;
  double sigma = 1.0;
  std::int64_t reps = 10000;
  std::uint64_t seed = 42;
  Scheme scheme = Scheme::GeneralPower;

  void validate() const {
    if (n < static_cast<std::int64_t>(norming::kMinSampleSize)) {
      throw ConfigurationError("simulation: n must be >= 3, got " + std::to_string(n));
    }
    if (reps < kMinReps) {
      throw ConfigurationError("simulation: reps must be >= 100, got " + std::to_string(reps));
    }
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigurationError("simulation: t must be positive");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw ConfigurationError("simulation: sigma must be positive");
    }
    norming::check_scheme(t, scheme);
  }
};

/// Raw maxima M_n for reps first_rep .. first_rep + count - 1. Rep r always
/// draws from Stream(seed, r), so any partition of the rep range reproduces
/// the serial output exactly.
inline std::vector<double> simulate_maxima(std::int64_t n, double sigma, std::uint64_t seed,
                                           std::int64_t first_rep, std::int64_t count) {
  if (n < 1) throw ConfigurationError("simulate_maxima: n must be >= 1");
  if (first_rep < 0 || count < 0) throw ConfigurationError("simulate_maxima: negative rep range");
  powmax::detail::require_positive(sigma, "simulate_maxima: sigma");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t r = first_rep; r < first_rep + count; ++r) {
    random::Stream rng(seed, static_cast<std::uint64_t>(r));
    // Track the largest squared norm; sqrt and the sigma scaling are monotone
    // and correctly rounded, so this equals the max of the scaled variates.
    double best = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      const double z3 = rng.normal();
      best = std::max(best, z1 * z1 + z2 * z2 + z3 * z3);
    }
    out.push_back(sigma * std::sqrt(best));
  }
  return out;
}

/// (m^t - d_n) / c_n for each maximum m.
inline std::vector<double> normalize_maxima(const std::vector<double>& maxima,
                                            const norming::PoweredNorming& pn) {
  std::vector<double> out;
  out.reserve(maxima.size());
  for (double m : maxima) {
    const double powered = pn.t == 2.0 ? m * m : std::pow(m, pn.t);
    out.push_back((powered - pn.d_n) / pn.c_n);
  }
  return out;
}

/// Constants used to normalize a simulation: solved b_n, then the scheme.
inline norming::PoweredNorming simulation_constants(const SimulationConfig& cfg) {
  const norming::NormingBase base = norming::solve_bn(static_cast<double>(cfg.n), cfg.sigma);
  return norming::powered_constants(base, cfg.t, cfg.scheme);
}

/// reps normalized powered maxima, in rep order, fully determined by cfg.
inline std::vector<double> simulate_powered_maxima(const SimulationConfig& cfg) {
  cfg.validate();
  return normalize_maxima(simulate_maxima(cfg.n, cfg.sigma, cfg.seed, 0, cfg.reps),
                          simulation_constants(cfg));
}

/// Kolmogorov-Smirnov distance sup |F_emp - F| between the samples and a
/// continuous reference cdf.
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& reference) {
  if (samples.empty()) throw DomainError("ks_distance: empty sample");
  if (samples.size() < static_cast<std::size_t>(kMinReps)) {
    throw DomainError("ks_distance: need at least 100 samples");
  }
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = reference(samples[i]);
    const double above = static_cast<double>(i + 1) / m - f;
    const double below = f - static_cast<double>(i) / m;
    d = std::max({d, above, below});
  }
  return d;
}

}  // namespace powmax::montecarlo
