// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "ordbias/rng.hpp"

namespace ordbias {

Eigen::VectorXd standard_normal_vector(int dim, RngStream& rng);

// Draw from N(mean, L L^T) given the lower Cholesky factor L.
Eigen::VectorXd mvn_draw_chol(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol_lower,
                              RngStream& rng);
Eigen::VectorXd mvn_draw_cov(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance,
                             RngStream& rng);

// Draw from the Gaussian with natural parameters (precision, info):
// covariance = precision^{-1}, mean = precision^{-1} info.
Eigen::VectorXd mvn_draw_precision(const Eigen::VectorXd& info, const Eigen::MatrixXd& precision,
                                   RngStream& rng);

double mvn_log_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& covariance);

// Bartlett draws; dof may be any real > dim - 1.
Eigen::MatrixXd wishart_draw(double dof, const Eigen::MatrixXd& scale, RngStream& rng);
Eigen::MatrixXd inverse_wishart_draw(double dof, const Eigen::MatrixXd& psi, RngStream& rng);

Eigen::VectorXd dirichlet_draw(const Eigen::VectorXd& alpha, RngStream& rng);

// Index drawn from unnormalized log-weights via exp-normalization.
int categorical_from_log_weights(const Eigen::VectorXd& log_weights, RngStream& rng);

double log_multivariate_gamma(int dim, double a);
double inverse_wishart_log_density(const Eigen::MatrixXd& sigma, double dof,
                                   const Eigen::MatrixXd& psi);

// log P(counts | alpha) with the categorical weights integrated out.
double dirichlet_multinomial_log(const Eigen::VectorXd& alpha, const std::vector<int>& counts);

}  // namespace ordbias
