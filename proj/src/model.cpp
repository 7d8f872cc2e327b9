// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ordbias/linalg.hpp"
#include "ordbias/rng.hpp"
#include "ordbias/stick_breaking.hpp"

namespace ordbias {

namespace {

// Greedy minimal-distance matching of snapshot bias rows onto reference rows.
// Returns perm with perm[old_group] = new_group.
std::vector<int> greedy_permutation(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& reference) {
  const int groups = static_cast<int>(rows.rows());
  std::vector<int> perm(groups, -1);
  std::vector<bool> row_used(groups, false);
  std::vector<bool> ref_used(groups, false);
  for (int step = 0; step < groups; ++step) {
    double best = std::numeric_limits<double>::infinity();
    int best_row = -1;
    int best_ref = -1;
    for (int a = 0; a < groups; ++a) {
      if (row_used[a]) continue;
      for (int b = 0; b < groups; ++b) {
        if (ref_used[b]) continue;
        const double d = (rows.row(a) - reference.row(b)).squaredNorm();
        if (d < best) {
          best = d;
          best_row = a;
          best_ref = b;
        }
      }
    }
    perm[best_row] = best_ref;
    row_used[best_row] = true;
    ref_used[best_ref] = true;
  }
  return perm;
}

}  // namespace

void align_groups(PosteriorSamples& samples) {
  if (samples.spec.bias != BiasMode::group) return;
  const int groups = static_cast<int>(samples.alignment_reference.rows());
  if (groups <= 1) return;
  for (SampleSnapshot& snap : samples.states) {
    const std::vector<int> perm = greedy_permutation(snap.m, samples.alignment_reference);
    Eigen::MatrixXd m_new(snap.m.rows(), snap.m.cols());
    for (int g = 0; g < groups; ++g) m_new.row(perm[g]) = snap.m.row(g);
    snap.m = std::move(m_new);
    for (int& g : snap.s) g = perm[g];
  }
}

std::vector<int> posterior_mode_groups(const PosteriorSamples& samples, int num_users) {
  const int groups =
      samples.states.empty() ? 1 : static_cast<int>(samples.states.front().m.rows());
  std::vector<int> modes(num_users, 0);
  std::vector<int> votes(groups);
  for (int j = 0; j < num_users; ++j) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const SampleSnapshot& snap : samples.states) ++votes[snap.s[j]];
    modes[j] = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }
  return modes;
}

void FittedModel::rebuild_indices() {
  user_index.clear();
  item_index.clear();
  for (int j = 0; j < num_users(); ++j) user_index.emplace(user_ids[j], j);
  for (int i = 0; i < num_items(); ++i) item_index.emplace(item_ids[i], i);
}

FittedModel fit_model(const RatingsDataset& data, const Hyperparameters& hp, const RunConfig& cfg,
                      ModelSpec spec) {
  FittedModel model;
  model.user_ids = data.user_ids;
  model.item_ids = data.item_ids;
  model.aspect_names = data.aspect_names;
  model.num_levels = data.num_levels;
  model.hp = hp;
  model.cfg = cfg;
  model.spec = spec;
  model.samples = GibbsSampler(data, hp, cfg, spec).fit();
  align_groups(model.samples);
  model.rebuild_indices();
  return model;
}

namespace {

int snapshot_mode_group(const SampleSnapshot& snap) {
  std::vector<int> votes(snap.m.rows(), 0);
  for (int g : snap.s) ++votes[g];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace

Eigen::VectorXd predict(const FittedModel& model, int user, int item, const PredictOptions& opts) {
  const int aspects = model.num_aspects();
  if (model.samples.states.empty()) {
    throw Error(ErrorCode::invalid_argument, "model has no retained samples");
  }
  const bool known_user = user >= 0 && user < model.num_users();
  const bool known_item = item >= 0 && item < model.num_items();
  if (opts.strict) {
    if (!known_user) throw Error(ErrorCode::unknown_user, "unknown user index");
    if (!known_item) throw Error(ErrorCode::unknown_item, "unknown item index");
  }

  RngStream rng = RngStream::derive(opts.seed, 0x7072ULL, static_cast<std::uint64_t>(user + 1),
                                    static_cast<std::uint64_t>(item + 1));
  const Eigen::MatrixXd b_chol = Eigen::LLT<Eigen::MatrixXd>(model.hp.B).matrixL();

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(aspects);
  for (const SampleSnapshot& snap : model.samples.states) {
    // Cold entities fall back to the posterior mean of mu (item) and the
    // snapshot's most populated group (user).
    const Eigen::VectorXd z_row =
        known_item ? snap.z.row(item).transpose().eval() : snap.mu;
    Eigen::VectorXd mean = z_row;
    if (model.spec.bias != BiasMode::none) {
      const int group = known_user ? snap.s[user] : snapshot_mode_group(snap);
      mean += snap.m.row(group).transpose();
    }

    if (!model.spec.ordinal_link) {
      acc += mean;  // continuous variants predict the unclipped real response
      continue;
    }
    const CutPoints cuts(snap.cuts);
    if (opts.plug_in) {
      acc += expected_rating_single(mean, cuts);
    } else {
      Eigen::VectorXd inner = Eigen::VectorXd::Zero(aspects);
      for (int d = 0; d < opts.mc_draws; ++d) {
        inner += expected_rating_single(mvn_draw_chol(mean, b_chol, rng), cuts);
      }
      acc += inner / opts.mc_draws;
    }
  }
  return acc / static_cast<double>(model.samples.states.size());
}

Eigen::VectorXd predict_ids(const FittedModel& model, const std::string& user_id,
                            const std::string& item_id, const PredictOptions& opts) {
  int user = -1;
  int item = -1;
  if (auto it = model.user_index.find(user_id); it != model.user_index.end()) user = it->second;
  if (auto it = model.item_index.find(item_id); it != model.item_index.end()) item = it->second;
  if (opts.strict && user < 0) throw Error(ErrorCode::unknown_user, "unknown user id: " + user_id);
  if (opts.strict && item < 0) throw Error(ErrorCode::unknown_item, "unknown item id: " + item_id);
  return predict(model, user, item, opts);
}

Eigen::MatrixXd posterior_mean_group_bias(const FittedModel& model) {
  const int groups = static_cast<int>(model.samples.alignment_reference.rows());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(groups, model.num_aspects());
  for (const SampleSnapshot& snap : model.samples.states) acc += snap.m;
  return acc / static_cast<double>(model.samples.states.size());
}

std::vector<int> bias_labels(const FittedModel& model, int user, double threshold) {
  const Eigen::MatrixXd bias = posterior_mean_group_bias(model);
  const std::vector<int> modes = posterior_mode_groups(model.samples, model.num_users());
  if (user < 0 || user >= model.num_users()) {
    throw Error(ErrorCode::unknown_user, "unknown user index");
  }
  std::vector<int> labels(model.num_aspects(), 0);
  for (int a = 0; a < model.num_aspects(); ++a) {
    const double b = bias(modes[user], a);
    labels[a] = b > threshold ? 1 : (b < -threshold ? -1 : 0);
  }
  return labels;
}

}  // namespace ordbias
