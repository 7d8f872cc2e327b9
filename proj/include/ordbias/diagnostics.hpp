// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordbias/types.hpp"

namespace ordbias {

struct MomentCheck {
  std::string name;
  double reference = 0.0;  // closed-form or forward-simulated value
  double estimate = 0.0;
  double se = 0.0;
  double zscore = 0.0;
};

// Sampler means of PG(1, c) against the closed-form tanh(c/2)/(2c).
std::vector<MomentCheck> pg_moment_checks(std::span<const double> tilts, int num_draws,
                                          std::uint64_t seed);

struct GewekeConfig {
  int num_users = 4;
  int num_items = 3;
  int num_aspects = 2;
  int num_levels = 3;
  int num_groups = 2;
  int forward_draws = 20000;
  int chain_cycles = 20000;
  int chain_thin = 2;
  std::uint64_t seed = 1;
};

struct GewekeResult {
  std::vector<MomentCheck> checks;  // means and second moments of z, m, v
  double max_abs_z = 0.0;
};

// Joint-distribution test: forward simulation vs successive-conditional
// simulation (sweep, then re-draw the ratings given the latents) must agree
// in distribution. Cut-points stay fixed at their true values; they carry an
// improper uniform prior that forward simulation cannot draw from.
GewekeResult geweke_check(const GewekeConfig& config);

struct TraceStats {
  bool finite = true;
  double last_quartile_slope = 0.0;
  double first_half_mean = 0.0;
  double last_quartile_mean = 0.0;
};
TraceStats trace_stats(std::span<const double> sweep_log);

}  // namespace ordbias
