// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordbias/types.hpp"

namespace ordbias::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorCode::invalid_argument, "mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorCode::invalid_argument, "variance needs n >= 2");
  const double mu = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - mu) * (v - mu);
  return acc / static_cast<double>(x.size() - 1);
}

double standard_deviation(std::span<const double> x) { return std::sqrt(variance(x)); }

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "pearson needs aligned samples, n >= 2");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::invalid_argument, "pearson undefined for constant sample");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double shared = 0.5 * (i + j) + 1.0;  // mean of 1-based ranks i+1..j+1
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "paired t-test needs aligned samples, n >= 2");
  }
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double md = mean(diff);
  const double sd = standard_deviation(diff);
  const double n = static_cast<double>(diff.size());
  TTestResult out;
  out.mean_difference = md;
  if (sd == 0.0) {
    out.t = md == 0.0 ? 0.0 : std::copysign(1e30, md);
    out.p = md == 0.0 ? 1.0 : 0.0;
    return out;
  }
  out.t = md / (sd / std::sqrt(n));
  const double cdf = student_t_cdf(std::fabs(out.t), n - 1.0);
  out.p = 2.0 * (1.0 - cdf);
  return out;
}

namespace {

double ks_p_value(double statistic, double effective_n) {
  const double lambda = (std::sqrt(effective_n) + 0.12 + 0.11 / std::sqrt(effective_n)) * statistic;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * std::pow(-1.0, j - 1) * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_argument, "KS needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double v = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= v) ++ia;
    while (ib < b.size() && b[ib] <= v) ++ib;
    d = std::max(d, std::fabs(ia / na - ib / nb));
  }
  KsResult out;
  out.statistic = d;
  out.p = ks_p_value(d, na * nb / (na + nb));
  return out;
}

KsResult ks_against_grid_cdf(std::vector<double> samples, std::span<const double> grid,
                             std::span<const double> cdf) {
  if (samples.empty() || grid.size() != cdf.size() || grid.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "KS grid inputs malformed");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  auto cdf_at = [&](double x) {
    if (x <= grid.front()) return cdf.front();
    if (x >= grid.back()) return cdf.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - grid[lo]) / (grid[hi] - grid[lo]);
    return cdf[lo] + w * (cdf[hi] - cdf[lo]);
  };
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf_at(samples[i]);
    d = std::max(d, std::fabs((i + 1) / n - f));
    d = std::max(d, std::fabs(f - i / n));
  }
  KsResult out;
  out.statistic = d;
  out.p = ks_p_value(d, n);
  return out;
}

namespace {

double incomplete_beta_cf(double a, double b, double x) {
  // Lentz continued fraction for the regularized incomplete beta function
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-14;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * incomplete_beta_cf(a, b, x) / a;
  return 1.0 - front * incomplete_beta_cf(b, a, 1.0 - x) / b;
}

double regularized_gamma_q(double a, double x) {
  // Q(a, x) = 1 - P(a, x); series for x < a+1, continued fraction otherwise
  if (x < 0.0 || a <= 0.0) throw Error(ErrorCode::invalid_argument, "gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    return 1.0 - p;
  }
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double student_t_cdf(double t, double dof) {
  const double x = dof / (dof + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double chi_square_p_value(double statistic, double dof) {
  return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

double batch_means_se(std::span<const double> chain, int num_batches) {
  if (static_cast<int>(chain.size()) < 2 * num_batches) num_batches = std::max(2, static_cast<int>(chain.size()) / 2);
  const std::size_t batch_len = chain.size() / num_batches;
  std::vector<double> batch_means;
  batch_means.reserve(num_batches);
  for (int b = 0; b < num_batches; ++b) {
    const auto begin = chain.begin() + b * batch_len;
    batch_means.push_back(std::accumulate(begin, begin + batch_len, 0.0) / batch_len);
  }
  return standard_deviation(batch_means) / std::sqrt(static_cast<double>(num_batches));
}

double slope(std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  if (y.size() < 2) throw Error(ErrorCode::invalid_argument, "slope needs n >= 2");
  const double mean_x = 0.5 * (n - 1.0);
  double sxy = 0.0;
  double sxx = 0.0;
  const double mean_y = mean(y);
  for (std::size_t i = 0; i < y.size(); ++i) {
    sxy += (i - mean_x) * (y[i] - mean_y);
    sxx += (i - mean_x) * (i - mean_x);
  }
  return sxy / sxx;
}

}  // namespace ordbias::stats
