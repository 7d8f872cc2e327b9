// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "ordbias/stick_breaking.hpp"
#include "ordbias/types.hpp"

namespace ordbias {

// One Gibbs-sweep snapshot of every latent block.
struct LatentState {
  Eigen::MatrixXd z;      // I x A intrinsic ratings
  Eigen::MatrixXd m;      // G x A group bias offsets
  std::vector<int> s;     // J group assignments, 0..G-1
  Eigen::MatrixXd v;      // n_obs x A latent continuous responses
  // Auxiliary variables, one per (observation, aspect, stick); exactly zero
  // where the stick counter N^k is zero. Column layout: aspect * (K-1) + k-1.
  Eigen::MatrixXd omega;
  CutPoints c;
  Eigen::VectorXd mu;     // A
  Eigen::MatrixXd Sigma;  // A x A
  std::vector<int> group_counts;  // per-group user counts, sums to J
  std::uint64_t sweep_index = 0;  // substream token; advanced by sweep()

  double omega_at(int obs, int aspect, int stick) const {
    return omega(obs, aspect * (c.num_levels() - 1) + stick - 1);
  }
  double& omega_at(int obs, int aspect, int stick) {
    return omega(obs, aspect * (c.num_levels() - 1) + stick - 1);
  }
};

// Thinned retained chain. Latent responses and auxiliaries are not kept;
// prediction only needs (z, m, s, c, mu, Sigma).
struct SampleSnapshot {
  Eigen::MatrixXd z;
  Eigen::MatrixXd m;
  std::vector<int> s;
  std::vector<double> cuts;
  Eigen::VectorXd mu;
  Eigen::MatrixXd Sigma;
};

struct PosteriorSamples {
  ModelSpec spec;
  std::vector<SampleSnapshot> states;
  std::vector<double> sweep_log;          // joint log-density after every sweep
  Eigen::MatrixXd alignment_reference;    // m at the end of burn-in, G x A
};

struct GaussianConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

struct NiwPosterior {
  Eigen::VectorXd mu_n;
  double kappa_n = 0.0;
  double nu_n = 0.0;
  Eigen::MatrixXd psi_n;
};

struct CutpointInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;
  bool lo_from_data = false;
  bool hi_from_data = false;
};

// Full MCMC engine. One sweep scans the six conditional blocks
//   m -> s -> (mu, Sigma) -> z -> (v, omega) -> c
// Continuous variants pin v to the observed ratings and skip the last two
// blocks; no-bias variants pin m to zero and skip the first two.
//
// Reproducibility: every block draws from a stream derived from
// (seed, sweep index, phase, block id), so parallel and serial execution of
// a sweep are bitwise identical.
class GibbsSampler {
 public:
  GibbsSampler(RatingsDataset data, Hyperparameters hp, RunConfig cfg, ModelSpec spec = {});

  const RatingsDataset& data() const { return data_; }
  const Hyperparameters& hyper() const { return hp_; }
  const RunConfig& config() const { return cfg_; }
  const ModelSpec& spec() const { return spec_; }
  int effective_groups() const { return groups_; }

  LatentState make_initial_state() const;
  void sweep(LatentState& state) const;
  PosteriorSamples fit() const;

  // Individual conditional updates; each advances its own block only.
  void sample_group_bias(LatentState& state) const;
  void sample_user_groups(LatentState& state) const;
  void sample_niw(LatentState& state) const;
  void sample_intrinsic(LatentState& state) const;
  void sample_latent_responses(LatentState& state) const;
  void resample_omega(LatentState& state) const;
  void sample_cutpoints(LatentState& state) const;

  // Draw-free conditional parameters, used by the samplers and by oracles.
  GaussianConditional group_bias_conditional(const LatentState& state, int group) const;
  GaussianConditional intrinsic_conditional(const LatentState& state, int item) const;
  GaussianConditional latent_response_conditional(const LatentState& state, int obs) const;
  // Unnormalized log P(s_j = g | .) with leave-one-out collapsed counts.
  Eigen::VectorXd user_group_log_scores(const LatentState& state, int user) const;
  NiwPosterior niw_posterior(const LatentState& state) const;
  // Uniform bracket for cut-point k (1-based) under current argmax cells.
  CutpointInterval cutpoint_interval(const LatentState& state, int k) const;

  double joint_log_density(const LatentState& state) const;

  const std::vector<std::vector<int>>& observations_by_user() const { return obs_by_user_; }
  const std::vector<std::vector<int>>& observations_by_item() const { return obs_by_item_; }

 private:
  Eigen::MatrixXi argmax_cells(const LatentState& state) const;
  CutpointInterval interval_from_cells(const LatentState& state, int k,
                                       const Eigen::MatrixXi& cells) const;

  RatingsDataset data_;
  Hyperparameters hp_;
  RunConfig cfg_;
  ModelSpec spec_;
  int groups_ = 1;

  Eigen::MatrixXd b_inv_;
  Eigen::MatrixXd b_chol_;  // lower factor of B
  double b_log_det_ = 0.0;
  Eigen::MatrixXd lambda_inv_;
  std::vector<std::vector<int>> obs_by_user_;
  std::vector<std::vector<int>> obs_by_item_;
  // kappa^k for each (observation, aspect, stick), same layout as omega
  Eigen::MatrixXd kappa_;
  Eigen::MatrixXd ratings_real_;  // n_obs x A copy of ratings as doubles
};

// Burn-in/thinning driver, equivalent to GibbsSampler(...).fit().
PosteriorSamples fit(const RatingsDataset& data, const Hyperparameters& hp, const RunConfig& cfg,
                     ModelSpec spec = {});

}  // namespace ordbias
