// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordbias/linalg.hpp"
#include "ordbias/rng.hpp"

namespace ordbias {

int draw_ordinal(double v, const CutPoints& c, RngStream& rng) {
  const Eigen::VectorXd probs = category_probabilities(v, c);
  const double u = rng.uniform();
  double cum = 0.0;
  for (int k = 1; k <= c.num_levels(); ++k) {
    cum += probs[k - 1];
    if (u <= cum) return k;
  }
  return c.num_levels();
}

std::pair<RatingsDataset, GroundTruth> generate(const Hyperparameters& hp,
                                                const SimOptions& options) {
  const int users = options.num_users;
  const int items = options.num_items;
  const int aspects = options.num_aspects;
  const int levels = options.num_levels;
  if (users < 1 || items < 1 || aspects < 1 || levels < 1) {
    throw Error(ErrorCode::invalid_argument, "simulation dimensions must be positive");
  }
  if (!(options.density > 0.0 && options.density <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "density must lie in (0, 1]");
  }
  hp.validate(aspects);

  const std::vector<double> cut_values =
      options.cutpoints.empty() ? RunConfig::default_cutpoints(levels) : options.cutpoints;
  const CutPoints cuts(cut_values);
  if (cuts.num_levels() != levels) {
    throw Error(ErrorCode::invalid_argument, "cut-point count must be num_levels - 1");
  }

  RngStream rng = RngStream::derive(options.seed, 0x53494dULL, 0, 0);
  GroundTruth truth;
  truth.c_true = cut_values;

  truth.theta = dirichlet_draw(hp.alpha, rng);
  const int groups = hp.num_groups;
  truth.m_true.resize(groups, aspects);
  {
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(hp.Lambda).matrixL();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(aspects);
    for (int g = 0; g < groups; ++g) {
      truth.m_true.row(g) = mvn_draw_chol(zero, chol, rng).transpose();
    }
  }

  truth.s_true.resize(users);
  for (int j = 0; j < users; ++j) {
    const double u = rng.uniform();
    double cum = 0.0;
    int g = groups - 1;
    for (int cand = 0; cand < groups; ++cand) {
      cum += truth.theta[cand];
      if (u <= cum) {
        g = cand;
        break;
      }
    }
    truth.s_true[j] = g;
  }

  truth.sigma_true = inverse_wishart_draw(hp.niw_nu0, hp.niw_Psi0, rng);
  truth.mu_true = mvn_draw_cov(hp.niw_mu0, truth.sigma_true / hp.niw_kappa0, rng);
  truth.z_true.resize(items, aspects);
  {
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(truth.sigma_true).matrixL();
    for (int i = 0; i < items; ++i) {
      truth.z_true.row(i) = mvn_draw_chol(truth.mu_true, chol, rng).transpose();
    }
  }

  // Observation pattern: uniform at the requested density, or with per-user
  // activity weights drawn from a heavy-tailed law.
  std::vector<std::pair<int, int>> pairs;
  const auto want = static_cast<std::int64_t>(
      std::llround(options.density * static_cast<double>(users) * items));
  if (options.density >= 1.0) {
    for (int j = 0; j < users; ++j) {
      for (int i = 0; i < items; ++i) pairs.emplace_back(j, i);
    }
  } else if (!options.power_law_users) {
    for (int j = 0; j < users; ++j) {
      for (int i = 0; i < items; ++i) {
        if (rng.uniform() < options.density) pairs.emplace_back(j, i);
      }
    }
  } else {
    std::vector<double> weight(users);
    for (int j = 0; j < users; ++j) weight[j] = std::pow(rng.uniform(), -1.2);
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    for (int j = 0; j < users; ++j) {
      const double target = want * weight[j] / total;
      const double p = std::min(1.0, target / items);
      for (int i = 0; i < items; ++i) {
        if (rng.uniform() < p) pairs.emplace_back(j, i);
      }
    }
  }
  if (pairs.empty()) pairs.emplace_back(0, 0);

  const Eigen::MatrixXd b_chol = Eigen::LLT<Eigen::MatrixXd>(hp.B).matrixL();
  truth.v_true.resize(static_cast<int>(pairs.size()), aspects);
  std::vector<RawRating> raw;
  raw.reserve(pairs.size());
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const auto [j, i] = pairs[n];
    const Eigen::VectorXd mean =
        (truth.z_true.row(i) + truth.m_true.row(truth.s_true[j])).transpose();
    const Eigen::VectorXd v = mvn_draw_chol(mean, b_chol, rng);
    truth.v_true.row(static_cast<int>(n)) = v.transpose();
    RawRating row;
    row.user_id = "u" + std::to_string(j);
    row.item_id = "i" + std::to_string(i);
    row.ratings.resize(aspects);
    for (int a = 0; a < aspects; ++a) row.ratings[a] = draw_ordinal(v[a], cuts, rng);
    raw.push_back(std::move(row));
  }

  RatingsDataset data = validate_dataset(raw, levels);

  // Re-index the per-entity truth into the dataset's dense order; entities
  // that drew no observations drop out of the dataset entirely.
  GroundTruth aligned;
  aligned.theta = truth.theta;
  aligned.m_true = truth.m_true;
  aligned.c_true = truth.c_true;
  aligned.mu_true = truth.mu_true;
  aligned.sigma_true = truth.sigma_true;
  aligned.v_true = truth.v_true;
  aligned.s_true.assign(data.num_users, 0);
  aligned.z_true.resize(data.num_items, aspects);
  for (int j = 0; j < users; ++j) {
    if (auto it = data.user_index.find("u" + std::to_string(j)); it != data.user_index.end()) {
      aligned.s_true[it->second] = truth.s_true[j];
    }
  }
  for (int i = 0; i < items; ++i) {
    if (auto it = data.item_index.find("i" + std::to_string(i)); it != data.item_index.end()) {
      aligned.z_true.row(it->second) = truth.z_true.row(i);
    }
  }
  return {std::move(data), std::move(aligned)};
}

}  // namespace ordbias
