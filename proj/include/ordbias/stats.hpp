// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace ordbias::stats {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // sample variance, n-1
double standard_deviation(std::span<const double> x);

double pearson(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based, ties share the mean rank).
std::vector<double> average_ranks(std::span<const double> x);

// Two-sided p-value of the paired t-test on aligned samples.
struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double mean_difference = 0.0;
};
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// Two-sample Kolmogorov-Smirnov test (asymptotic p-value).
struct KsResult {
  double statistic = 0.0;
  double p = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS against a CDF tabulated on a grid (linear interpolation).
KsResult ks_against_grid_cdf(std::vector<double> samples, std::span<const double> grid,
                             std::span<const double> cdf);

// Regularized incomplete beta / gamma, Student-t and normal CDFs.
double regularized_incomplete_beta(double a, double b, double x);
double regularized_gamma_q(double a, double x);
double student_t_cdf(double t, double dof);
double normal_cdf(double x);
double chi_square_p_value(double statistic, double dof);

// Standard error of a (possibly autocorrelated) chain via batch means.
double batch_means_se(std::span<const double> chain, int num_batches = 50);

// Least-squares slope of y against 0..n-1.
double slope(std::span<const double> y);

}  // namespace ordbias::stats
