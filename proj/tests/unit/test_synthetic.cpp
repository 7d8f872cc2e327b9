// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "ordbias/rng.hpp"
#include "ordbias/stats.hpp"
#include "ordbias/stick_breaking.hpp"
#include "ordbias/synthetic.hpp"

using namespace ordbias;

namespace {

// One-way ANOVA F-test p-value.
double anova_p(const std::map<int, std::vector<double>>& groups) {
  int n = 0;
  double grand = 0.0;
  for (const auto& [g, xs] : groups) {
    for (double x : xs) {
      grand += x;
      ++n;
    }
  }
  grand /= n;
  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& [g, xs] : groups) {
    const double mean = stats::mean(xs);
    ss_between += xs.size() * (mean - grand) * (mean - grand);
    for (double x : xs) ss_within += (x - mean) * (x - mean);
  }
  const double df1 = static_cast<double>(groups.size()) - 1.0;
  const double df2 = n - static_cast<double>(groups.size());
  const double f = (ss_between / df1) / (ss_within / df2);
  // P(F > f) via the incomplete beta representation
  return stats::regularized_incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

}  // namespace

TEST_CASE("full density produces every (user, item) pair") {
  Hyperparameters hp = Hyperparameters::defaults(3, 2);
  SimOptions sim;
  sim.num_users = 7;
  sim.num_items = 5;
  sim.num_aspects = 3;
  sim.num_levels = 5;
  sim.density = 1.0;
  sim.seed = 5;
  const auto [data, truth] = generate(hp, sim);
  CHECK(data.observations.size() == 35);
  CHECK(data.num_users == 7);
  CHECK(data.num_items == 5);
  CHECK(truth.v_true.rows() == 35);
}

TEST_CASE("generation is deterministic under a fixed seed") {
  const Hyperparameters hp = Hyperparameters::defaults(2, 2);
  SimOptions sim;
  sim.num_users = 15;
  sim.num_items = 6;
  sim.num_aspects = 2;
  sim.num_levels = 4;
  sim.density = 0.5;
  sim.seed = 9;
  const auto [da, ta] = generate(hp, sim);
  const auto [db, tb] = generate(hp, sim);
  CHECK(da.observations.size() == db.observations.size());
  for (std::size_t i = 0; i < da.observations.size(); ++i) {
    CHECK(da.observations[i].ratings == db.observations[i].ratings);
  }
  CHECK(ta.z_true == tb.z_true);
  CHECK(ta.m_true == tb.m_true);
}

TEST_CASE("vanishing bias prior makes group means indistinguishable") {
  Hyperparameters hp = Hyperparameters::defaults(2, 3);
  hp.Lambda = 1e-12 * Eigen::MatrixXd::Identity(2, 2);
  SimOptions sim;
  sim.num_users = 120;
  sim.num_items = 20;
  sim.num_aspects = 2;
  sim.num_levels = 5;
  sim.density = 0.5;
  sim.seed = 11;
  const auto [data, truth] = generate(hp, sim);
  CHECK(truth.m_true.cwiseAbs().maxCoeff() < 1e-5);

  // mean observed rating by true group: one-way ANOVA should not reject
  std::map<int, std::vector<double>> by_group;
  for (const Observation& obs : data.observations) {
    by_group[truth.s_true[obs.user]].push_back(
        std::accumulate(obs.ratings.begin(), obs.ratings.end(), 0.0) / obs.ratings.size());
  }
  REQUIRE(by_group.size() >= 2);
  CHECK(anova_p(by_group) > 0.01);
}

TEST_CASE("ordinal draws follow the stick-breaking probabilities") {
  const CutPoints c({-1.0, 0.5, 2.0});
  const double v = 0.7;
  const Eigen::VectorXd probs = category_probabilities(v, c);
  RngStream rng(13);
  const int n = 100000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < n; ++i) ++counts[draw_ordinal(v, c, rng) - 1];
  for (int k = 0; k < 4; ++k) {
    const double se = std::sqrt(probs[k] * (1.0 - probs[k]) / n);
    CHECK(std::fabs(counts[k] / static_cast<double>(n) - probs[k]) < 3.0 * se);
  }
}

TEST_CASE("intrinsic quality covariance matches a concentrated NIW prior") {
  Hyperparameters hp = Hyperparameters::defaults(2, 1);
  hp.niw_nu0 = 800.0;
  hp.niw_Psi0 = (hp.niw_nu0 - 3.0) * Eigen::MatrixXd::Identity(2, 2);
  hp.niw_kappa0 = 1e6;  // pins mu at mu0; centering removes it anyway
  SimOptions sim;
  sim.num_users = 1;
  sim.num_items = 10000;
  sim.num_aspects = 2;
  sim.num_levels = 3;
  sim.density = 1.0;  // every item must appear so z_true covers all of them
  sim.seed = 17;
  const auto [data, truth] = generate(hp, sim);

  const Eigen::MatrixXd z = truth.z_true;
  const Eigen::RowVectorXd mean = z.colwise().mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < z.rows(); ++i) {
    const Eigen::VectorXd d = (z.row(i) - mean).transpose();
    cov += d * d.transpose();
  }
  cov /= z.rows() - 1.0;
  CHECK((cov - Eigen::MatrixXd::Identity(2, 2)).norm() / std::sqrt(2.0) < 0.10);
}

TEST_CASE("power-law activity skews per-user counts") {
  const Hyperparameters hp = Hyperparameters::defaults(2, 2);
  SimOptions sim;
  sim.num_users = 200;
  sim.num_items = 40;
  sim.num_aspects = 2;
  sim.num_levels = 5;
  sim.density = 0.1;
  sim.seed = 19;
  sim.power_law_users = true;
  const auto [data, truth] = generate(hp, sim);
  std::vector<double> counts(data.num_users, 0.0);
  for (const Observation& obs : data.observations) counts[obs.user] += 1.0;
  const double max_count = *std::max_element(counts.begin(), counts.end());
  CHECK(max_count > 3.0 * stats::mean(counts));
}
