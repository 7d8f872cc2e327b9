// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ordbias/types.hpp"

namespace ordbias {

// Ordered thresholds c_1 < ... < c_{K-1} shared by all aspects. An empty
// vector is the degenerate single-level scale (K = 1).
class CutPoints {
 public:
  CutPoints() = default;
  explicit CutPoints(std::vector<double> values);

  int num_levels() const { return static_cast<int>(values_.size()) + 1; }
  int size() const { return static_cast<int>(values_.size()); }
  // 1-based to match the category math: cut(k) is c_k, k in 1..K-1.
  double cut(int k) const { return values_[k - 1]; }
  void set_cut(int k, double value);  // preserves strict ordering, else throws
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// 1-of-K encoding of an ordinal level together with the stick counters
// N^k = 1 - sum_{k'<k} x^{k'} and kappa^k = x^k - N^k / 2.
struct OneHotRating {
  std::vector<int> x;
  std::vector<int> n;
  std::vector<double> kappa;
};

OneHotRating one_hot(int level, int num_levels);

// log P(r = k | v, c) for every k; out must have length K.
void log_category_probabilities(double v, const CutPoints& c, std::span<double> out);
Eigen::VectorXd category_probabilities(double v, const CutPoints& c);
double log_category_probability(double v, const CutPoints& c, int level);

// Joint log-likelihood of an A-vector of ordinal ratings given latent
// responses v (one per aspect) under shared cut-points.
double log_likelihood_vector(std::span<const int> ratings, const Eigen::VectorXd& v,
                             const CutPoints& c);

// Threshold t_k = c_k - ln(1 - e^{-(c_{k+1} - c_k)}), defined for interior
// k in 1..K-2: v > t_k implies P(r = k+1) > P(r = k).
double lemma_threshold(const CutPoints& c, int k);

// Crossing point between categories k and k+1 for any k in 1..K-1. Interior
// k uses lemma_threshold; the top boundary reduces to c_{K-1} because the
// final stick probability is pinned at one.
double category_boundary(const CutPoints& c, int k);

// Literal argmax of the category probabilities (well defined for any c).
int argmax_category(double v, const CutPoints& c);

// Posterior-expected rating sum_k k P(r = k | v, c), one value per aspect,
// averaged over aligned posterior samples of (v, c).
Eigen::VectorXd expected_rating(const std::vector<Eigen::VectorXd>& v_samples,
                                const std::vector<CutPoints>& c_samples);
Eigen::VectorXd expected_rating_single(const Eigen::VectorXd& v, const CutPoints& c);

}  // namespace ordbias
