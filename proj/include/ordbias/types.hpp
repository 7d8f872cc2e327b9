// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ordbias {

enum class ErrorCode {
  invalid_argument,
  parse,
  duplicate_pair,
  rating_out_of_range,
  inconsistent_aspects,
  too_few_observations,
  unknown_user,
  unknown_item,
  io,
  numerical,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// One rated (user, item) pair; ratings hold all A aspect levels in 1..K.
struct Observation {
  int user = 0;
  int item = 0;
  std::vector<int> ratings;
};

struct RawRating {
  std::string user_id;
  std::string item_id;
  std::vector<int> ratings;
};

// Validated rating data with dense 0-based indices. Immutable after
// construction; safe to share across threads.
struct RatingsDataset {
  int num_users = 0;
  int num_items = 0;
  int num_aspects = 0;
  int num_levels = 0;
  std::vector<Observation> observations;
  std::vector<std::string> user_ids;  // dense index -> external id
  std::vector<std::string> item_ids;
  std::unordered_map<std::string, int> user_index;
  std::unordered_map<std::string, int> item_index;
  std::vector<std::string> aspect_names;

  int user_of(const std::string& id) const;  // throws Error(unknown_user)
  int item_of(const std::string& id) const;
  // Same shape and id maps, observation subset replaced.
  RatingsDataset with_observations(std::vector<Observation> obs) const;
};

// Builds a RatingsDataset from raw rows. Dense indices are assigned in
// first-appearance order; duplicate (user, item) pairs are rejected.
RatingsDataset validate_dataset(const std::vector<RawRating>& raw, int num_levels,
                                std::vector<std::string> aspect_names = {});

struct Hyperparameters {
  int num_groups = 10;
  Eigen::VectorXd alpha;    // Dirichlet concentrations, length num_groups
  Eigen::MatrixXd Lambda;   // prior covariance of group bias offsets, A x A
  Eigen::MatrixXd B;        // response covariance, A x A (fixed, never sampled)
  Eigen::VectorXd niw_mu0;  // A
  double niw_kappa0 = 1.0;
  double niw_nu0 = 0.0;     // must exceed A - 1
  Eigen::MatrixXd niw_Psi0; // A x A

  static Hyperparameters defaults(int num_aspects, int num_groups = 10);
  void validate(int num_aspects) const;  // throws Error on violation
};

struct RunConfig {
  std::uint64_t seed = 0;
  int burn_in = 0;
  int num_samples = 1;
  int thinning = 1;
  std::vector<double> init_cutpoints;  // K-1 strictly increasing values
  bool parallel_blocks = false;
  // Compatibility switch: reproduce the printed uniform cut-point range
  // (same log offset, previous-gap, on both endpoints) instead of the
  // bracket-exact bounds. Kept for comparison runs only.
  bool literal_cutpoint_range = false;

  static std::vector<double> default_cutpoints(int num_levels);
  void validate(int num_levels) const;
};

enum class BiasMode { none, global, group };

// Which model variant the engine runs. ordinal_link=false treats the observed
// ratings as real values with a Gaussian likelihood (no latent response layer).
struct ModelSpec {
  bool ordinal_link = true;
  BiasMode bias = BiasMode::group;

  bool operator==(const ModelSpec&) const = default;
};

std::string model_name(const ModelSpec& spec);
ModelSpec model_spec_from_name(std::string_view name);

}  // namespace ordbias
