// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ordbias/polya_gamma.hpp"
#include "ordbias/rng.hpp"
#include "ordbias/stats.hpp"

using namespace ordbias;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Test oracle, independent of the rejection sampler: the infinite-sum-of-
// gammas representation omega = (1/2pi^2) sum_k g_k / ((k-1/2)^2 + c^2/4pi^2),
// g_k ~ Gamma(b, 1). Truncating the sum gives its mean deterministically.
double series_mean(double tilt, int terms) {
  double acc = 0.0;
  const double shift = tilt * tilt / (4.0 * kPi * kPi);
  for (int k = 1; k <= terms; ++k) {
    const double d = k - 0.5;
    acc += 1.0 / (d * d + shift);
  }
  return acc / (2.0 * kPi * kPi);
}

// One Monte-Carlo draw of the truncated sum-of-gammas representation.
double series_draw(double tilt, int terms, RngStream& rng) {
  double acc = 0.0;
  const double shift = tilt * tilt / (4.0 * kPi * kPi);
  for (int k = 1; k <= terms; ++k) {
    const double d = k - 0.5;
    acc += rng.exponential() / (d * d + shift);
  }
  return acc / (2.0 * kPi * kPi);
}

struct MeanAndSe {
  double mean;
  double se;
};

MeanAndSe sampler_mean(double tilt, int n, std::uint64_t seed) {
  RngStream rng(seed);
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = sample_pg1(tilt, rng);
    sum += w;
    sumsq += w * w;
  }
  const double mean = sum / n;
  const double var = (sumsq - n * mean * mean) / (n - 1);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

TEST_CASE("PG(0, c) is the point mass at zero") {
  RngStream rng(1);
  CHECK(sample_pg({0, 3.7}, rng) == 0.0);
}

TEST_CASE("mean of PG(1, 0) draws matches the truncated series") {
  // sum_{k>=1} (k - 1/2)^{-2} = pi^2/2, so the series mean tends to 1/4
  const double oracle = series_mean(0.0, 1000000);
  CHECK(oracle == doctest::Approx(0.25).epsilon(1e-5));
  const MeanAndSe got = sampler_mean(0.0, 1000000, 17);
  CHECK(std::fabs(got.mean - oracle) < 3.0 * got.se);
}

TEST_CASE("mean of PG(1, 2) draws matches the sum-of-gammas oracle") {
  // Monte-Carlo mean of the representation truncated at 1e4 terms
  RngStream oracle_rng(23);
  const int reps = 4000;
  std::vector<double> oracle_draws;
  oracle_draws.reserve(reps);
  for (int r = 0; r < reps; ++r) oracle_draws.push_back(series_draw(2.0, 10000, oracle_rng));
  const double oracle_mean = stats::mean(oracle_draws);
  const double oracle_se = stats::standard_deviation(oracle_draws) / std::sqrt(double(reps));
  CHECK(oracle_mean == doctest::Approx(std::tanh(1.0) / 4.0).epsilon(0.01));

  const MeanAndSe got = sampler_mean(2.0, 1000000, 29);
  const double tol = 3.0 * std::sqrt(got.se * got.se + oracle_se * oracle_se);
  CHECK(std::fabs(got.mean - oracle_mean) < tol);
  CHECK(got.mean == doctest::Approx(std::tanh(1.0) / 4.0).epsilon(0.005));
}

TEST_CASE("empirical mean converges to tanh(c/2)/(2c) for c in {0.1, 1, 4}") {
  std::uint64_t seed = 100;
  for (double c : {0.1, 1.0, 4.0}) {
    const double oracle = series_mean(c, 1000000);
    CHECK(oracle == doctest::Approx(pg_mean(1, c)).epsilon(1e-5));
    const MeanAndSe got = sampler_mean(c, 200000, ++seed);
    CHECK(std::fabs(got.mean - oracle) < 3.0 * got.se);
  }
}

TEST_CASE("draws are strictly positive for shape >= 1 and symmetric in the tilt sign") {
  RngStream rng(31);
  std::vector<double> plus;
  std::vector<double> minus;
  for (int i = 0; i < 100000; ++i) {
    const double a = sample_pg1(1.6, rng);
    const double b = sample_pg1(-1.6, rng);
    CHECK(a > 0.0);
    plus.push_back(a);
    minus.push_back(b);
  }
  CHECK(stats::ks_two_sample(plus, minus).p > 0.001);
}

TEST_CASE("integer shapes add unit draws") {
  RngStream rng(37);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += sample_pg({3, 1.0}, rng);
  CHECK(sum / n == doctest::Approx(pg_mean(3, 1.0)).epsilon(0.01));
}

TEST_CASE("fixed seeds reproduce draws exactly") {
  RngStream a(41);
  RngStream b(41);
  for (int i = 0; i < 1000; ++i) CHECK(sample_pg1(0.7, a) == sample_pg1(0.7, b));
}

TEST_CASE("augmentation identity: psi = 0 is exact") {
  RngStream rng(43);
  const auto [lhs, rhs] = pg_identity_check(1.0, 1, 0.0, 10000, rng);
  CHECK(lhs == doctest::Approx(0.5));
  CHECK(rhs == doctest::Approx(0.5));
}

TEST_CASE("augmentation identity: a=1, b=1, psi=1.5") {
  const double expected = std::exp(1.5) / (1.0 + std::exp(1.5));
  std::vector<double> rhs_reps;
  for (std::uint64_t s = 0; s < 6; ++s) {
    RngStream rng(1000 + s);
    const auto [lhs, rhs] = pg_identity_check(1.0, 1, 1.5, 20000, rng);
    CHECK(lhs == doctest::Approx(expected));
    rhs_reps.push_back(rhs);
  }
  const double se = stats::standard_deviation(rhs_reps) / std::sqrt(double(rhs_reps.size()));
  CHECK(std::fabs(stats::mean(rhs_reps) - expected) < 3.0 * se + 1e-12);
}

TEST_CASE("augmentation identity: a=0, b=2, psi=-0.7") {
  const double expected = 1.0 / std::pow(1.0 + std::exp(-0.7), 2.0);
  std::vector<double> rhs_reps;
  for (std::uint64_t s = 0; s < 6; ++s) {
    RngStream rng(2000 + s);
    const auto [lhs, rhs] = pg_identity_check(0.0, 2, -0.7, 20000, rng);
    CHECK(lhs == doctest::Approx(expected));
    rhs_reps.push_back(rhs);
  }
  const double se = stats::standard_deviation(rhs_reps) / std::sqrt(double(rhs_reps.size()));
  CHECK(std::fabs(stats::mean(rhs_reps) - expected) < 3.0 * se + 1e-12);
}
