// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ordbias/gibbs.hpp"
#include "ordbias/model.hpp"
#include "ordbias/types.hpp"

namespace ordbias {

struct FoldPair {
  RatingsDataset train;
  RatingsDataset test;
};

// Partition by (user, item) pair; the full aspect vector of a pair stays in
// one fold. Train/test share the dense index universe of the parent dataset.
std::vector<FoldPair> kfold_split(const RatingsDataset& data, int k, std::uint64_t seed);

struct PredictionRecord {
  int user = 0;
  int item = 0;
  Eigen::VectorXd predicted;
  std::vector<int> observed;
};

struct RmseResult {
  Eigen::VectorXd per_aspect;
  double pooled = 0.0;
};
RmseResult rmse(const std::vector<PredictionRecord>& records, int num_aspects);

struct FcpOptions {
  bool per_user_average = false;  // default pools pair counts across users
  bool tie_half_credit = false;   // default counts predicted ties as discordant
};
// Fraction of concordant within-user item pairs, per aspect; pairs with equal
// observed ratings are excluded.
Eigen::VectorXd fcp(const std::vector<PredictionRecord>& records, int num_aspects,
                    const FcpOptions& options = {});

// Mean Pearson correlation between predicted and observed aspect ranks over
// user-item pairs; pairs whose observed (or predicted) ranks have zero
// variance are skipped.
double aspect_ranking_pearson(const std::vector<PredictionRecord>& records);

struct TestLoglikOptions {
  int mc_draws = 32;
  std::uint64_t seed = 0x7e57;
};
struct TestLoglik {
  double mean = 0.0;
  std::vector<double> per_observation;
};
// Mean log of the posterior-averaged probability of each observed rating
// vector. Ordinal variants Monte-Carlo the response layer; continuous
// variants use the Gaussian density at the integer ratings.
TestLoglik test_loglik(const PosteriorSamples& samples, const Hyperparameters& hp,
                       const RatingsDataset& test, const TestLoglikOptions& options = {});

struct GroupSdPoint {
  int item = 0;
  int aspect = 0;
  int group = 0;
  int group_raters = 0;
  double group_sd = 0.0;
  double control_sd = 0.0;
};
// Within-group vs all-rater rating spread per (item, aspect, group), for
// groups with at least two raters of the item.
std::vector<GroupSdPoint> group_sd_analysis(const PosteriorSamples& samples,
                                            const RatingsDataset& data);

struct DeltaTriple {
  double d_obs = 0.0;
  double d_avg = 0.0;
  double d_int = 0.0;
};
struct DeltaBin {
  double center = 0.0;
  double mean_d_obs = 0.0;
  int count = 0;
};
struct DeltaAnalysis {
  std::vector<DeltaTriple> triples;
  double pearson_obs_int = 0.0;
  double pearson_obs_avg = 0.0;
  std::vector<DeltaBin> bins_int;  // mean d_obs binned by d_int
  std::vector<DeltaBin> bins_avg;  // mean d_obs binned by d_avg
};
// Same-user item-pair differences restricted to sparsely rated items whose
// intrinsic and average ratings disagree by at least min_gap.
DeltaAnalysis intrinsic_delta_analysis(const PosteriorSamples& samples,
                                       const RatingsDataset& data, int max_ratings = 30,
                                       double min_gap = 0.5);

// Intrinsic quality on the rating scale: expected rating of the posterior
// mean z under the posterior cut-point samples (I x A).
Eigen::MatrixXd intrinsic_rating_scale(const PosteriorSamples& samples,
                                       const RatingsDataset& data);

struct EvaluationReport {
  Eigen::VectorXd per_aspect_rmse;
  double pooled_rmse = 0.0;
  Eigen::VectorXd per_aspect_fcp;
  double mean_test_loglik = 0.0;
  double aspect_pearson = 0.0;
  std::vector<double> per_observation_loglik;  // pooled across folds
  std::vector<GroupSdPoint> group_sd_pairs;
  DeltaAnalysis deltas;
  Eigen::MatrixXd group_bias;  // aligned posterior means from the full-data fit
  std::vector<double> mean_cutpoints;  // posterior-mean cut-points (ordinal only)
};

struct EvaluateOptions {
  int folds = 5;
  PredictOptions predict;
  TestLoglikOptions loglik;
  bool run_analyses = true;  // group-sd / delta analyses from a full-data fit
};
// K-fold protocol: fit on each train fold, score its test fold, pool; the
// group and intrinsic analyses come from one additional full-data fit.
EvaluationReport evaluate_model(const RatingsDataset& data, const ModelSpec& spec,
                                const Hyperparameters& hp, const RunConfig& cfg,
                                const EvaluateOptions& options = {});

}  // namespace ordbias
