// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/linalg.hpp"

#include <cmath>

#include "ordbias/types.hpp"

namespace ordbias {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
}

Eigen::VectorXd standard_normal_vector(int dim, RngStream& rng) {
  Eigen::VectorXd z(dim);
  for (int i = 0; i < dim; ++i) z[i] = rng.normal();
  return z;
}

Eigen::VectorXd mvn_draw_chol(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol_lower,
                              RngStream& rng) {
  return mean + chol_lower * standard_normal_vector(static_cast<int>(mean.size()), rng);
}

Eigen::VectorXd mvn_draw_cov(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance,
                             RngStream& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "covariance not positive definite");
  }
  return mvn_draw_chol(mean, llt.matrixL(), rng);
}

Eigen::VectorXd mvn_draw_precision(const Eigen::VectorXd& info, const Eigen::MatrixXd& precision,
                                   RngStream& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "posterior precision not positive definite");
  }
  const Eigen::VectorXd mean = llt.solve(info);
  // x = mean + L^{-T} z has covariance precision^{-1}
  const Eigen::VectorXd z = standard_normal_vector(static_cast<int>(info.size()), rng);
  return mean + llt.matrixU().solve(z);
}

double mvn_log_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& covariance) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "covariance not positive definite");
  }
  const Eigen::VectorXd diff = x - mean;
  const Eigen::VectorXd half = llt.matrixL().solve(diff);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < covariance.rows(); ++i) {
    log_det += 2.0 * std::log(llt.matrixL()(i, i));
  }
  return -0.5 * (x.size() * kLogTwoPi + log_det + half.squaredNorm());
}

Eigen::MatrixXd wishart_draw(double dof, const Eigen::MatrixXd& scale, RngStream& rng) {
  const int dim = static_cast<int>(scale.rows());
  if (dof <= dim - 1) throw Error(ErrorCode::invalid_argument, "Wishart dof must exceed dim - 1");
  Eigen::LLT<Eigen::MatrixXd> llt(scale);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "Wishart scale not positive definite");
  }
  Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    bartlett(i, i) = std::sqrt(rng.chi_square(dof - i));
    for (int j = 0; j < i; ++j) bartlett(i, j) = rng.normal();
  }
  const Eigen::MatrixXd lower = llt.matrixL() * bartlett;
  return lower * lower.transpose();
}

Eigen::MatrixXd inverse_wishart_draw(double dof, const Eigen::MatrixXd& psi, RngStream& rng) {
  const Eigen::MatrixXd w = wishart_draw(dof, psi.inverse(), rng);
  return w.inverse();
}

Eigen::VectorXd dirichlet_draw(const Eigen::VectorXd& alpha, RngStream& rng) {
  Eigen::VectorXd draw(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) draw[i] = rng.gamma(alpha[i]);
  const double total = draw.sum();
  if (total <= 0.0) throw Error(ErrorCode::numerical, "degenerate Dirichlet draw");
  return draw / total;
}

int categorical_from_log_weights(const Eigen::VectorXd& log_weights, RngStream& rng) {
  const double peak = log_weights.maxCoeff();
  Eigen::VectorXd probs = (log_weights.array() - peak).exp();
  probs /= probs.sum();
  const double u = rng.uniform();
  double cum = 0.0;
  for (Eigen::Index g = 0; g < probs.size(); ++g) {
    cum += probs[g];
    if (u <= cum) return static_cast<int>(g);
  }
  return static_cast<int>(probs.size()) - 1;
}

double log_multivariate_gamma(int dim, double a) {
  double out = 0.25 * dim * (dim - 1) * std::log(3.14159265358979323846);
  for (int j = 0; j < dim; ++j) out += std::lgamma(a - 0.5 * j);
  return out;
}

double inverse_wishart_log_density(const Eigen::MatrixXd& sigma, double dof,
                                   const Eigen::MatrixXd& psi) {
  const int dim = static_cast<int>(sigma.rows());
  Eigen::LLT<Eigen::MatrixXd> psi_llt(psi);
  Eigen::LLT<Eigen::MatrixXd> sig_llt(sigma);
  if (psi_llt.info() != Eigen::Success || sig_llt.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "inverse-Wishart density needs SPD inputs");
  }
  double log_det_psi = 0.0;
  double log_det_sig = 0.0;
  for (int i = 0; i < dim; ++i) {
    log_det_psi += 2.0 * std::log(psi_llt.matrixL()(i, i));
    log_det_sig += 2.0 * std::log(sig_llt.matrixL()(i, i));
  }
  const double trace = sig_llt.solve(psi).trace();
  return 0.5 * dof * log_det_psi - 0.5 * dof * dim * std::log(2.0) -
         log_multivariate_gamma(dim, 0.5 * dof) - 0.5 * (dof + dim + 1.0) * log_det_sig -
         0.5 * trace;
}

double dirichlet_multinomial_log(const Eigen::VectorXd& alpha, const std::vector<int>& counts) {
  if (alpha.size() != static_cast<Eigen::Index>(counts.size())) {
    throw Error(ErrorCode::invalid_argument, "alpha/count length mismatch");
  }
  double total_alpha = 0.0;
  double total_count = 0.0;
  double out = 0.0;
  for (Eigen::Index g = 0; g < alpha.size(); ++g) {
    out += std::lgamma(alpha[g] + counts[g]) - std::lgamma(alpha[g]);
    total_alpha += alpha[g];
    total_count += counts[g];
  }
  out += std::lgamma(total_alpha) - std::lgamma(total_alpha + total_count);
  return out;
}

}  // namespace ordbias
