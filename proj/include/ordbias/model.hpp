// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ordbias/gibbs.hpp"
#include "ordbias/types.hpp"

namespace ordbias {

// Resolves mixture label switching: permutes each snapshot's groups to the
// greedy minimal-distance match against the alignment reference (the bias
// matrix at the end of burn-in), relabeling s accordingly.
void align_groups(PosteriorSamples& samples);

// Most frequent aligned group per user across retained samples.
std::vector<int> posterior_mode_groups(const PosteriorSamples& samples, int num_users);

// A fitted model: everything needed to predict and report, detached from the
// training observations.
struct FittedModel {
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;
  std::vector<std::string> aspect_names;
  std::unordered_map<std::string, int> user_index;
  std::unordered_map<std::string, int> item_index;
  int num_levels = 0;
  Hyperparameters hp;
  RunConfig cfg;
  ModelSpec spec;
  PosteriorSamples samples;  // aligned

  int num_aspects() const { return static_cast<int>(aspect_names.size()); }
  int num_users() const { return static_cast<int>(user_ids.size()); }
  int num_items() const { return static_cast<int>(item_ids.size()); }
  void rebuild_indices();
};

FittedModel fit_model(const RatingsDataset& data, const Hyperparameters& hp, const RunConfig& cfg,
                      ModelSpec spec = {});

struct PredictOptions {
  bool strict = false;      // throw on unknown users/items instead of falling back
  bool plug_in = false;     // plug the mean response in instead of Monte Carlo
  int mc_draws = 32;        // response draws per retained sample
  std::uint64_t seed = 0x9d5f;
};

// Posterior-expected per-aspect rating; each component lies in [1, K] for
// ordinal variants and is an unclipped real for continuous variants.
Eigen::VectorXd predict(const FittedModel& model, int user, int item,
                        const PredictOptions& opts = {});
Eigen::VectorXd predict_ids(const FittedModel& model, const std::string& user_id,
                            const std::string& item_id, const PredictOptions& opts = {});

// Aligned posterior-mean bias vector per group (G x A).
Eigen::MatrixXd posterior_mean_group_bias(const FittedModel& model);

// Per-aspect bias sign labels for a user: +1 / -1 where the user's group
// bias exceeds the threshold in magnitude, 0 otherwise.
std::vector<int> bias_labels(const FittedModel& model, int user, double threshold);

}  // namespace ordbias
