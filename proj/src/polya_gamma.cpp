// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/polya_gamma.hpp"

#include <cmath>

#include "ordbias/types.hpp"

namespace ordbias {

namespace {

constexpr double kTrunc = 0.64;  // proposal changeover point for J*(1, z)
constexpr double kPi = 3.14159265358979323846;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Piecewise coefficients a_n(x) of the alternating series for the J*(1, z)
// density (left: inverse-Gaussian form, right: exponential form).
double series_coef(int n, double x) {
  const double h = n + 0.5;
  if (x > kTrunc) {
    return kPi * h * std::exp(-0.5 * h * h * kPi * kPi * x);
  }
  return kPi * h * std::pow(2.0 / (kPi * x), 1.5) * std::exp(-2.0 * h * h / x);
}

// Probability that the proposal falls in the exponential (right) branch.
double right_branch_mass(double z) {
  const double t = kTrunc;
  const double rate = 0.125 * kPi * kPi + 0.5 * z * z;
  const double b = std::sqrt(1.0 / t) * (t * z - 1.0);
  const double a = -std::sqrt(1.0 / t) * (t * z + 1.0);
  const double x0 = std::log(rate) + rate * t;
  const double xb = x0 - z + std::log(normal_cdf(b));
  const double xa = x0 + z + std::log(normal_cdf(a));
  const double qdivp = 4.0 / kPi * (std::exp(xb) + std::exp(xa));
  return 1.0 / (1.0 + qdivp);
}

// Inverse-Gaussian IG(1/z, 1) restricted to (0, kTrunc].
double truncated_inverse_gaussian(double z, RngStream& rng) {
  const double t = kTrunc;
  double x = t + 1.0;
  if (z < 1.0 / t) {
    // mu > t: sample 1/x from a truncated chi-square proposal, then tilt
    for (;;) {
      double e1;
      double e2;
      do {
        e1 = rng.exponential();
        e2 = rng.exponential();
      } while (e1 * e1 > 2.0 * e2 / t);
      x = t / ((1.0 + t * e1) * (1.0 + t * e1));
      const double accept = std::exp(-0.5 * z * z * x);
      if (rng.uniform() <= accept) return x;
    }
  }
  const double mu = 1.0 / z;
  while (x > t) {
    const double n = rng.normal();
    const double s = mu * n * n;
    // smaller root of the IG transform, computed via the larger one so the
    // subtraction cannot cancel below zero
    const double larger = mu * (1.0 + 0.5 * s + 0.5 * std::sqrt(s * (s + 4.0)));
    x = mu * mu / larger;
    if (rng.uniform() > mu / (mu + x)) x = larger;
  }
  return x;
}

}  // namespace

double sample_pg1(double tilt, RngStream& rng) {
  // PG(1, c) = J*(1, c/2) / 4; the density depends on the tilt only via c^2.
  const double z = 0.5 * std::fabs(tilt);
  const double rate = 0.125 * kPi * kPi + 0.5 * z * z;
  const double p_right = right_branch_mass(z);

  for (;;) {
    double x;
    if (rng.uniform() < p_right) {
      x = kTrunc + rng.exponential() / rate;
    } else {
      x = truncated_inverse_gaussian(z, rng);
    }
    if (!std::isfinite(x) || x <= 0.0) continue;

    double partial = series_coef(0, x);
    const double y = rng.uniform() * partial;
    for (int n = 1;; ++n) {
      if (n % 2 == 1) {
        partial -= series_coef(n, x);
        if (y <= partial) return 0.25 * x;
      } else {
        partial += series_coef(n, x);
        if (y > partial) break;  // reject, draw a new proposal
      }
    }
  }
}

double sample_pg(const PgParams& params, RngStream& rng) {
  if (params.shape < 0) throw Error(ErrorCode::invalid_argument, "PG shape must be >= 0");
  double total = 0.0;
  for (int i = 0; i < params.shape; ++i) total += sample_pg1(params.tilt, rng);
  return total;
}

double pg_mean(int shape, double tilt) {
  const double c = std::fabs(tilt);
  if (c < 1e-8) return shape / 4.0;
  return shape * std::tanh(0.5 * c) / (2.0 * c);
}

std::pair<double, double> pg_identity_check(double a, int b, double psi, int num_mc,
                                            RngStream& rng) {
  if (b <= 0) throw Error(ErrorCode::invalid_argument, "identity check needs shape > 0");
  if (num_mc < 10000) throw Error(ErrorCode::invalid_argument, "identity check needs num_mc >= 1e4");
  const double log_softplus = psi > 0.0 ? psi + std::log1p(std::exp(-psi)) : std::log1p(std::exp(psi));
  const double lhs = std::exp(a * psi - b * log_softplus);

  const double kappa = a - 0.5 * b;
  double acc = 0.0;
  for (int i = 0; i < num_mc; ++i) {
    const double omega = sample_pg({b, 0.0}, rng);
    acc += std::exp(-0.5 * omega * psi * psi);
  }
  const double rhs = std::exp(-b * std::log(2.0) + kappa * psi) * (acc / num_mc);
  return {lhs, rhs};
}

}  // namespace ordbias
