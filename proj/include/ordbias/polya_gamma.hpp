// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "ordbias/rng.hpp"

namespace ordbias {

// PG(b, c) with non-negative integer shape. The sampler serves the
// augmentation layer, which only produces shapes 0 and 1; larger integer
// shapes are summed from unit draws.
struct PgParams {
  int shape = 1;   // b >= 0; b == 0 is the point mass at zero
  double tilt = 0.0;
};

// Exact draw from PG(1, tilt) via alternating-series rejection on a mixture
// of a truncated inverse-Gaussian and an exponential proposal.
double sample_pg1(double tilt, RngStream& rng);

double sample_pg(const PgParams& params, RngStream& rng);

// E[PG(b, c)] = b tanh(c/2) / (2c), with the c -> 0 limit b/4.
double pg_mean(int shape, double tilt);

// Both sides of the augmentation integral identity
//   (e^psi)^a / (1 + e^psi)^b = 2^{-b} e^{kappa psi} E_omega[e^{-omega psi^2 / 2}],
// kappa = a - b/2, omega ~ PG(b, 0). The right side is Monte Carlo over
// num_mc sampler draws; certification machinery for the test suite.
std::pair<double, double> pg_identity_check(double a, int b, double psi, int num_mc,
                                            RngStream& rng);

}  // namespace ordbias
