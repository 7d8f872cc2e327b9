// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "ordbias/stick_breaking.hpp"
#include "ordbias/types.hpp"

namespace ordbias {

// Everything the generative process drew, kept for recovery tests. theta is
// explicit here even though inference integrates it out.
struct GroundTruth {
  Eigen::VectorXd theta;
  Eigen::MatrixXd m_true;   // G x A
  std::vector<int> s_true;  // J
  Eigen::MatrixXd z_true;   // I x A
  std::vector<double> c_true;
  Eigen::MatrixXd v_true;   // n_obs x A, aligned with dataset observations
  Eigen::VectorXd mu_true;
  Eigen::MatrixXd sigma_true;
};

struct SimOptions {
  int num_users = 0;
  int num_items = 0;
  int num_aspects = 0;
  int num_levels = 0;
  double density = 1.0;             // fraction of (user, item) pairs observed
  std::vector<double> cutpoints;    // true cut-points; defaults if empty
  std::uint64_t seed = 0;
  // Skew the observation pattern so a few users rate many items, mimicking
  // the long-tailed activity of real rating corpora.
  bool power_law_users = false;
};

// Forward simulation of the generative process:
//   theta ~ Dir(alpha); m_g ~ N(0, Lambda); s_j ~ Cat(theta);
//   (mu, Sigma) ~ NIW; z_i ~ N(mu, Sigma); v_ij ~ N(z_i + m_{s_j}, B);
//   r_ija ~ Cat(SB(v_ija, c)).
std::pair<RatingsDataset, GroundTruth> generate(const Hyperparameters& hp,
                                                const SimOptions& options);

// Ordinal draw from the stick-breaking categorical for a single response.
int draw_ordinal(double v, const CutPoints& c, class RngStream& rng);

}  // namespace ordbias
