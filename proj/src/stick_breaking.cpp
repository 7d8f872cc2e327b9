// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/stick_breaking.hpp"

#include <cmath>

namespace ordbias {

namespace {

double softplus(double x) {
  // log(1 + e^x) without overflow on either side
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace

CutPoints::CutPoints(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t k = 1; k < values_.size(); ++k) {
    if (!(values_[k - 1] < values_[k])) {
      throw Error(ErrorCode::invalid_argument, "cut-points must be strictly increasing");
    }
  }
}

void CutPoints::set_cut(int k, double value) {
  const int idx = k - 1;
  if (idx > 0 && !(values_[idx - 1] < value)) {
    throw Error(ErrorCode::invalid_argument, "cut-point update breaks ordering (left)");
  }
  if (idx + 1 < static_cast<int>(values_.size()) && !(value < values_[idx + 1])) {
    throw Error(ErrorCode::invalid_argument, "cut-point update breaks ordering (right)");
  }
  values_[idx] = value;
}

OneHotRating one_hot(int level, int num_levels) {
  if (level < 1 || level > num_levels) {
    throw Error(ErrorCode::rating_out_of_range, "level outside 1..K");
  }
  OneHotRating r;
  r.x.assign(num_levels, 0);
  r.n.assign(num_levels, 0);
  r.kappa.assign(num_levels, 0.0);
  r.x[level - 1] = 1;
  for (int k = 1; k <= num_levels; ++k) {
    r.n[k - 1] = k <= level ? 1 : 0;
    r.kappa[k - 1] = r.x[k - 1] - 0.5 * r.n[k - 1];
  }
  return r;
}

void log_category_probabilities(double v, const CutPoints& c, std::span<double> out) {
  const int levels = c.num_levels();
  // log P(r=k) = sum_{k'<k} log(1 - f(eta_{k'})) + log f(eta_k), f(eta_K) = 1,
  // with log f(eta) = -softplus(-eta) and log(1 - f(eta)) = -softplus(eta).
  double carried = 0.0;
  for (int k = 1; k <= levels; ++k) {
    const double eta = k < levels ? c.cut(k) - v : 0.0;
    out[k - 1] = k < levels ? carried - softplus(-eta) : carried;
    if (k < levels) carried -= softplus(eta);
  }
}

Eigen::VectorXd category_probabilities(double v, const CutPoints& c) {
  const int levels = c.num_levels();
  Eigen::VectorXd probs(levels);
  std::vector<double> logp(levels);
  log_category_probabilities(v, c, logp);
  for (int k = 0; k < levels; ++k) probs[k] = std::exp(logp[k]);
  return probs;
}

double log_category_probability(double v, const CutPoints& c, int level) {
  const int levels = c.num_levels();
  if (level < 1 || level > levels) {
    throw Error(ErrorCode::rating_out_of_range, "level outside 1..K");
  }
  double carried = 0.0;
  for (int k = 1; k < level; ++k) carried -= softplus(c.cut(k) - v);
  if (level < levels) carried -= softplus(-(c.cut(level) - v));
  return carried;
}

double log_likelihood_vector(std::span<const int> ratings, const Eigen::VectorXd& v,
                             const CutPoints& c) {
  if (static_cast<Eigen::Index>(ratings.size()) != v.size()) {
    throw Error(ErrorCode::invalid_argument, "rating/response length mismatch");
  }
  double total = 0.0;
  for (std::size_t a = 0; a < ratings.size(); ++a) {
    total += log_category_probability(v[static_cast<Eigen::Index>(a)], c, ratings[a]);
  }
  return total;
}

double lemma_threshold(const CutPoints& c, int k) {
  if (k < 1 || k > c.size() - 1) {
    throw Error(ErrorCode::invalid_argument, "lemma threshold index outside 1..K-2");
  }
  const double gap = c.cut(k + 1) - c.cut(k);
  // -log(1 - e^{-gap}) = -log(-expm1(-gap))
  return c.cut(k) - std::log(-std::expm1(-gap));
}

double category_boundary(const CutPoints& c, int k) {
  if (k < 1 || k > c.size()) {
    throw Error(ErrorCode::invalid_argument, "boundary index outside 1..K-1");
  }
  if (k == c.size()) return c.cut(k);
  return lemma_threshold(c, k);
}

int argmax_category(double v, const CutPoints& c) {
  const int levels = c.num_levels();
  std::vector<double> logp(levels);
  log_category_probabilities(v, c, logp);
  int best = 1;
  for (int k = 2; k <= levels; ++k) {
    if (logp[k - 1] > logp[best - 1]) best = k;
  }
  return best;
}

Eigen::VectorXd expected_rating_single(const Eigen::VectorXd& v, const CutPoints& c) {
  const int levels = c.num_levels();
  Eigen::VectorXd out(v.size());
  for (Eigen::Index a = 0; a < v.size(); ++a) {
    const Eigen::VectorXd probs = category_probabilities(v[a], c);
    double mean = 0.0;
    for (int k = 1; k <= levels; ++k) mean += k * probs[k - 1];
    out[a] = mean;
  }
  return out;
}

Eigen::VectorXd expected_rating(const std::vector<Eigen::VectorXd>& v_samples,
                                const std::vector<CutPoints>& c_samples) {
  if (v_samples.empty() || v_samples.size() != c_samples.size()) {
    throw Error(ErrorCode::invalid_argument, "expected_rating needs aligned, non-empty samples");
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(v_samples.front().size());
  for (std::size_t i = 0; i < v_samples.size(); ++i) {
    acc += expected_rating_single(v_samples[i], c_samples[i]);
  }
  return acc / static_cast<double>(v_samples.size());
}

}  // namespace ordbias
