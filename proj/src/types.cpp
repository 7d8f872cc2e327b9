// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/types.hpp"

#include <Eigen/Cholesky>
#include <set>
#include <sstream>

namespace ordbias {

int RatingsDataset::user_of(const std::string& id) const {
  auto it = user_index.find(id);
  if (it == user_index.end()) throw Error(ErrorCode::unknown_user, "unknown user id: " + id);
  return it->second;
}

int RatingsDataset::item_of(const std::string& id) const {
  auto it = item_index.find(id);
  if (it == item_index.end()) throw Error(ErrorCode::unknown_item, "unknown item id: " + id);
  return it->second;
}

RatingsDataset RatingsDataset::with_observations(std::vector<Observation> obs) const {
  RatingsDataset out = *this;
  out.observations = std::move(obs);
  return out;
}

RatingsDataset validate_dataset(const std::vector<RawRating>& raw, int num_levels,
                                std::vector<std::string> aspect_names) {
  if (raw.empty()) throw Error(ErrorCode::invalid_argument, "empty rating list");
  if (num_levels < 1) throw Error(ErrorCode::invalid_argument, "num_levels must be >= 1");

  RatingsDataset ds;
  ds.num_levels = num_levels;
  ds.num_aspects = static_cast<int>(raw.front().ratings.size());
  if (ds.num_aspects == 0) throw Error(ErrorCode::inconsistent_aspects, "rows carry no aspect ratings");

  if (aspect_names.empty()) {
    for (int a = 0; a < ds.num_aspects; ++a) aspect_names.push_back("aspect" + std::to_string(a + 1));
  }
  if (static_cast<int>(aspect_names.size()) != ds.num_aspects) {
    throw Error(ErrorCode::inconsistent_aspects, "aspect name count does not match rating width");
  }
  ds.aspect_names = std::move(aspect_names);

  std::set<std::pair<int, int>> seen;
  ds.observations.reserve(raw.size());
  for (const auto& row : raw) {
    if (static_cast<int>(row.ratings.size()) != ds.num_aspects) {
      std::ostringstream msg;
      msg << "row (" << row.user_id << ", " << row.item_id << ") has " << row.ratings.size()
          << " aspect ratings, expected " << ds.num_aspects;
      throw Error(ErrorCode::inconsistent_aspects, msg.str());
    }
    for (int value : row.ratings) {
      if (value < 1 || value > num_levels) {
        std::ostringstream msg;
        msg << "rating " << value << " outside 1.." << num_levels << " for ("
            << row.user_id << ", " << row.item_id << ")";
        throw Error(ErrorCode::rating_out_of_range, msg.str());
      }
    }

    auto [uit, newu] = ds.user_index.try_emplace(row.user_id, ds.num_users);
    if (newu) {
      ds.user_ids.push_back(row.user_id);
      ++ds.num_users;
    }
    auto [iit, newi] = ds.item_index.try_emplace(row.item_id, ds.num_items);
    if (newi) {
      ds.item_ids.push_back(row.item_id);
      ++ds.num_items;
    }

    if (!seen.emplace(uit->second, iit->second).second) {
      throw Error(ErrorCode::duplicate_pair,
                  "duplicate rating for (" + row.user_id + ", " + row.item_id + ")");
    }
    ds.observations.push_back({uit->second, iit->second, row.ratings});
  }
  return ds;
}

namespace {

void require_spd(const Eigen::MatrixXd& m, int dim, const std::string& name) {
  if (m.rows() != dim || m.cols() != dim) {
    throw Error(ErrorCode::invalid_argument, name + " must be " + std::to_string(dim) + "x" +
                                                 std::to_string(dim));
  }
  if (!m.isApprox(m.transpose(), 1e-10)) {
    throw Error(ErrorCode::invalid_argument, name + " must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::invalid_argument, name + " must be positive definite");
  }
}

}  // namespace

Hyperparameters Hyperparameters::defaults(int num_aspects, int num_groups) {
  Hyperparameters hp;
  hp.num_groups = num_groups;
  hp.alpha = Eigen::VectorXd::Ones(num_groups);
  hp.Lambda = Eigen::MatrixXd::Identity(num_aspects, num_aspects);
  hp.B = 0.25 * Eigen::MatrixXd::Identity(num_aspects, num_aspects);
  hp.niw_mu0 = Eigen::VectorXd::Zero(num_aspects);
  hp.niw_kappa0 = 1.0;
  hp.niw_nu0 = num_aspects + 2.0;
  hp.niw_Psi0 = Eigen::MatrixXd::Identity(num_aspects, num_aspects);
  return hp;
}

void Hyperparameters::validate(int num_aspects) const {
  if (num_groups < 1) throw Error(ErrorCode::invalid_argument, "num_groups must be >= 1");
  if (alpha.size() != num_groups) {
    throw Error(ErrorCode::invalid_argument, "alpha length must equal num_groups");
  }
  if ((alpha.array() <= 0.0).any()) {
    throw Error(ErrorCode::invalid_argument, "alpha entries must be positive");
  }
  require_spd(Lambda, num_aspects, "Lambda");
  require_spd(B, num_aspects, "B");
  require_spd(niw_Psi0, num_aspects, "niw_Psi0");
  if (niw_mu0.size() != num_aspects) {
    throw Error(ErrorCode::invalid_argument, "niw_mu0 length must equal num_aspects");
  }
  if (niw_kappa0 <= 0.0) throw Error(ErrorCode::invalid_argument, "niw_kappa0 must be positive");
  if (niw_nu0 <= num_aspects - 1) {
    throw Error(ErrorCode::invalid_argument, "niw_nu0 must exceed num_aspects - 1");
  }
}

std::vector<double> RunConfig::default_cutpoints(int num_levels) {
  // Evenly spaced over [-5, 7]; for K=5 this is (-5, -1, 3, 7).
  std::vector<double> cuts;
  const int n = num_levels - 1;
  if (n <= 0) return cuts;
  if (n == 1) {
    cuts.push_back(1.0);
    return cuts;
  }
  for (int k = 0; k < n; ++k) cuts.push_back(-5.0 + 12.0 * k / (n - 1));
  return cuts;
}

void RunConfig::validate(int num_levels) const {
  if (burn_in < 0) throw Error(ErrorCode::invalid_argument, "burn_in must be >= 0");
  if (num_samples < 1) throw Error(ErrorCode::invalid_argument, "num_samples must be >= 1");
  if (thinning < 1) throw Error(ErrorCode::invalid_argument, "thinning must be >= 1");
  if (static_cast<int>(init_cutpoints.size()) != num_levels - 1) {
    throw Error(ErrorCode::invalid_argument, "init_cutpoints must have num_levels - 1 entries");
  }
  for (std::size_t k = 1; k < init_cutpoints.size(); ++k) {
    if (!(init_cutpoints[k - 1] < init_cutpoints[k])) {
      throw Error(ErrorCode::invalid_argument, "init_cutpoints must be strictly increasing");
    }
  }
}

std::string model_name(const ModelSpec& spec) {
  if (spec.ordinal_link) {
    switch (spec.bias) {
      case BiasMode::group: return "full";
      case BiasMode::global: return "ordinal-global";
      case BiasMode::none: return "ordinal-no-bias";
    }
  } else {
    switch (spec.bias) {
      case BiasMode::group: return "continuous-bias";
      case BiasMode::global: return "continuous-global";
      case BiasMode::none: return "continuous-no-bias";
    }
  }
  return "unknown";
}

ModelSpec model_spec_from_name(std::string_view name) {
  if (name == "full") return {true, BiasMode::group};
  if (name == "ordinal-global") return {true, BiasMode::global};
  if (name == "ordinal-no-bias") return {true, BiasMode::none};
  if (name == "continuous-bias") return {false, BiasMode::group};
  if (name == "continuous-global") return {false, BiasMode::global};
  if (name == "continuous-no-bias") return {false, BiasMode::none};
  throw Error(ErrorCode::invalid_argument, "unknown model name: " + std::string(name));
}

}  // namespace ordbias
