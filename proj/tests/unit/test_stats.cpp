// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ordbias/rng.hpp"
#include "ordbias/stats.hpp"

using namespace ordbias;

TEST_CASE("pearson on exact linear data") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {2, 4, 6, 8, 10};
  const std::vector<double> z = {10, 8, 6, 4, 2};
  CHECK(stats::pearson(x, y) == doctest::Approx(1.0));
  CHECK(stats::pearson(x, z) == doctest::Approx(-1.0));
}

TEST_CASE("average ranks with ties") {
  const std::vector<double> x = {3.0, 1.0, 3.0, 2.0};
  const std::vector<double> ranks = stats::average_ranks(x);
  CHECK(ranks[0] == doctest::Approx(3.5));
  CHECK(ranks[1] == doctest::Approx(1.0));
  CHECK(ranks[2] == doctest::Approx(3.5));
  CHECK(ranks[3] == doctest::Approx(2.0));
}

TEST_CASE("student t cdf against table values") {
  // two-sided 5% critical points
  CHECK(stats::student_t_cdf(2.776, 4.0) == doctest::Approx(0.975).epsilon(0.001));
  CHECK(stats::student_t_cdf(1.96, 1e6) == doctest::Approx(0.975).epsilon(0.001));
  CHECK(stats::student_t_cdf(0.0, 7.0) == doctest::Approx(0.5));
}

TEST_CASE("chi-square p-value against table values") {
  CHECK(stats::chi_square_p_value(3.841, 1.0) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(stats::chi_square_p_value(18.307, 10.0) == doctest::Approx(0.05).epsilon(0.01));
}

TEST_CASE("paired t-test flags a real shift and not a null one") {
  RngStream rng(3);
  std::vector<double> a(500);
  std::vector<double> b(500);
  std::vector<double> c(500);
  for (int i = 0; i < 500; ++i) {
    a[i] = rng.normal();
    b[i] = a[i] + 0.5 + 0.1 * rng.normal();
    c[i] = a[i] + 0.002 * rng.normal();
  }
  CHECK(stats::paired_t_test(b, a).p < 1e-6);
  CHECK(stats::paired_t_test(c, a).p > 0.001);
}

TEST_CASE("two-sample KS separates different distributions only") {
  RngStream rng(9);
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  for (int i = 0; i < 20000; ++i) {
    a.push_back(rng.normal());
    b.push_back(rng.normal());
    c.push_back(rng.normal() + 0.15);
  }
  CHECK(stats::ks_two_sample(a, b).p > 0.001);
  CHECK(stats::ks_two_sample(a, c).p < 1e-6);
}

TEST_CASE("KS against a tabulated normal cdf") {
  RngStream rng(13);
  std::vector<double> draws;
  for (int i = 0; i < 50000; ++i) draws.push_back(rng.normal());
  std::vector<double> grid;
  std::vector<double> cdf;
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    grid.push_back(x);
    cdf.push_back(stats::normal_cdf(x));
  }
  CHECK(stats::ks_against_grid_cdf(draws, grid, cdf).p > 0.001);
}

TEST_CASE("slope of a noiseless line") {
  std::vector<double> y;
  for (int i = 0; i < 40; ++i) y.push_back(3.0 + 0.25 * i);
  CHECK(stats::slope(y) == doctest::Approx(0.25));
}
