// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ordbias/linalg.hpp"
#include "ordbias/polya_gamma.hpp"
#include "ordbias/rng.hpp"

namespace ordbias {

namespace {

enum : std::uint64_t {
  kPhaseInit = 1,
  kPhaseGroupBias,
  kPhaseUserGroups,
  kPhaseNiw,
  kPhaseIntrinsic,
  kPhaseLatent,
  kPhaseCutpoints,
};

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

double log_sum_exp2(double a, double b) {
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

GibbsSampler::GibbsSampler(RatingsDataset data, Hyperparameters hp, RunConfig cfg, ModelSpec spec)
    : data_(std::move(data)), hp_(std::move(hp)), cfg_(std::move(cfg)), spec_(spec) {
  hp_.validate(data_.num_aspects);
  if (cfg_.init_cutpoints.empty()) {
    cfg_.init_cutpoints = RunConfig::default_cutpoints(data_.num_levels);
  }
  cfg_.validate(data_.num_levels);

  groups_ = spec_.bias == BiasMode::group ? hp_.num_groups : 1;

  const int aspects = data_.num_aspects;
  Eigen::LLT<Eigen::MatrixXd> b_llt(hp_.B);
  b_chol_ = b_llt.matrixL();
  b_inv_ = b_llt.solve(Eigen::MatrixXd::Identity(aspects, aspects));
  b_log_det_ = 0.0;
  for (int i = 0; i < aspects; ++i) b_log_det_ += 2.0 * std::log(b_chol_(i, i));
  lambda_inv_ = hp_.Lambda.llt().solve(Eigen::MatrixXd::Identity(aspects, aspects));

  obs_by_user_.assign(data_.num_users, {});
  obs_by_item_.assign(data_.num_items, {});
  const int n_obs = static_cast<int>(data_.observations.size());
  const int sticks = data_.num_levels - 1;
  kappa_.setZero(n_obs, aspects * std::max(sticks, 0));
  ratings_real_.setZero(n_obs, aspects);
  for (int o = 0; o < n_obs; ++o) {
    const Observation& obs = data_.observations[o];
    obs_by_user_[obs.user].push_back(o);
    obs_by_item_[obs.item].push_back(o);
    for (int a = 0; a < aspects; ++a) {
      ratings_real_(o, a) = obs.ratings[a];
      const int level = obs.ratings[a];
      for (int k = 1; k <= std::min(level, sticks); ++k) {
        kappa_(o, a * sticks + k - 1) = (k == level ? 0.5 : -0.5);
      }
    }
  }
}

LatentState GibbsSampler::make_initial_state() const {
  const int aspects = data_.num_aspects;
  const int items = data_.num_items;
  const int users = data_.num_users;
  const int n_obs = static_cast<int>(data_.observations.size());
  const int levels = data_.num_levels;
  const int sticks = levels - 1;

  LatentState st;
  st.sweep_index = 0;
  st.c = CutPoints(cfg_.init_cutpoints);
  st.m = Eigen::MatrixXd::Zero(groups_, aspects);
  st.mu = hp_.niw_mu0;
  st.Sigma = hp_.niw_nu0 > aspects + 1 ? (hp_.niw_Psi0 / (hp_.niw_nu0 - aspects - 1)).eval()
                                       : hp_.niw_Psi0;

  RngStream rng = RngStream::derive(cfg_.seed, 0, kPhaseInit, 0);
  st.s.assign(users, 0);
  if (groups_ > 1) {
    for (int j = 0; j < users; ++j) st.s[j] = static_cast<int>(rng.below(groups_));
  }
  st.group_counts.assign(groups_, 0);
  for (int g : st.s) ++st.group_counts[g];

  st.z.resize(items, aspects);
  {
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(st.Sigma).matrixL();
    for (int i = 0; i < items; ++i) st.z.row(i) = mvn_draw_chol(st.mu, chol, rng).transpose();
  }

  st.v.resize(n_obs, aspects);
  st.omega.setZero(n_obs, spec_.ordinal_link ? aspects * std::max(sticks, 0) : 0);
  if (!spec_.ordinal_link) {
    st.v = ratings_real_;
    return st;
  }

  if (sticks == 0) {
    st.v.setZero();
  } else {
    // Start each response at the midpoint of its category's argmax bracket so
    // the chain begins in the observed ordinal cells.
    const double pad_lo = -(std::fabs(st.c.cut(1)) + 5.0);
    const double pad_hi = std::max(std::fabs(st.c.cut(1)), std::fabs(st.c.cut(sticks))) + 5.0;
    for (int o = 0; o < n_obs; ++o) {
      for (int a = 0; a < aspects; ++a) {
        const int r = data_.observations[o].ratings[a];
        double lo = r == 1 ? pad_lo : category_boundary(st.c, r - 1);
        double hi = r == levels ? pad_hi : category_boundary(st.c, r);
        if (!(lo < hi)) {
          lo = r == 1 ? pad_lo : st.c.cut(r - 1);
          hi = r == levels ? pad_hi : st.c.cut(r);
        }
        st.v(o, a) = 0.5 * (lo + hi);
      }
    }
  }
  resample_omega(st);
  return st;
}

GaussianConditional GibbsSampler::group_bias_conditional(const LatentState& st, int group) const {
  const int aspects = data_.num_aspects;
  Eigen::VectorXd residual = Eigen::VectorXd::Zero(aspects);
  int n_g = 0;
  for (int o = 0; o < static_cast<int>(data_.observations.size()); ++o) {
    const Observation& obs = data_.observations[o];
    if (st.s[obs.user] != group) continue;
    residual += (st.v.row(o) - st.z.row(obs.item)).transpose();
    ++n_g;
  }
  const Eigen::MatrixXd precision = n_g * b_inv_ + lambda_inv_;
  const Eigen::VectorXd info = b_inv_ * residual;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "group bias posterior precision not SPD");
  }
  GaussianConditional out;
  out.covariance = llt.solve(Eigen::MatrixXd::Identity(aspects, aspects));
  out.mean = llt.solve(info);
  return out;
}

void GibbsSampler::sample_group_bias(LatentState& st) const {
  if (spec_.bias == BiasMode::none) return;
  const int aspects = data_.num_aspects;

  // Per-group residual sums in fixed observation order.
  Eigen::MatrixXd residual = Eigen::MatrixXd::Zero(groups_, aspects);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(groups_);
  for (int o = 0; o < static_cast<int>(data_.observations.size()); ++o) {
    const Observation& obs = data_.observations[o];
    const int g = st.s[obs.user];
    residual.row(g) += st.v.row(o) - st.z.row(obs.item);
    counts[g] += 1;
  }

#pragma omp parallel for schedule(static) if (cfg_.parallel_blocks)
  for (int g = 0; g < groups_; ++g) {
    RngStream rng = RngStream::derive(cfg_.seed, st.sweep_index, kPhaseGroupBias, g);
    const Eigen::MatrixXd precision = counts[g] * b_inv_ + lambda_inv_;
    const Eigen::VectorXd info = b_inv_ * residual.row(g).transpose();
    st.m.row(g) = mvn_draw_precision(info, precision, rng).transpose();
  }
}

Eigen::VectorXd GibbsSampler::user_group_log_scores(const LatentState& st, int user) const {
  Eigen::VectorXd scores(groups_);
  for (int g = 0; g < groups_; ++g) {
    const int loo = st.group_counts[g] - (st.s[user] == g ? 1 : 0);
    scores[g] = std::log(loo + hp_.alpha[g]);
  }
  for (int o : obs_by_user_[user]) {
    const Observation& obs = data_.observations[o];
    for (int g = 0; g < groups_; ++g) {
      const Eigen::VectorXd diff =
          (st.v.row(o) - st.z.row(obs.item) - st.m.row(g)).transpose();
      scores[g] += -0.5 * (data_.num_aspects * kLogTwoPi + b_log_det_ +
                           diff.dot(b_inv_ * diff));
    }
  }
  return scores;
}

void GibbsSampler::sample_user_groups(LatentState& st) const {
  if (spec_.bias != BiasMode::group || groups_ == 1) return;
  const int users = data_.num_users;
  const int aspects = data_.num_aspects;

  // Likelihood part is count-free, so it can run in parallel; the collapsed
  // prior weights are applied in a serial pass with leave-one-out counts.
  Eigen::MatrixXd loglik(users, groups_);
#pragma omp parallel for schedule(static) if (cfg_.parallel_blocks)
  for (int j = 0; j < users; ++j) {
    for (int g = 0; g < groups_; ++g) {
      double acc = 0.0;
      for (int o : obs_by_user_[j]) {
        const Observation& obs = data_.observations[o];
        const Eigen::VectorXd diff =
            (st.v.row(o) - st.z.row(obs.item) - st.m.row(g)).transpose();
        acc += -0.5 * (aspects * kLogTwoPi + b_log_det_ + diff.dot(b_inv_ * diff));
      }
      loglik(j, g) = acc;
    }
  }

  for (int j = 0; j < users; ++j) {
    RngStream rng = RngStream::derive(cfg_.seed, st.sweep_index, kPhaseUserGroups, j);
    --st.group_counts[st.s[j]];
    Eigen::VectorXd scores = loglik.row(j).transpose();
    for (int g = 0; g < groups_; ++g) {
      scores[g] += std::log(st.group_counts[g] + hp_.alpha[g]);
    }
    const int g_new = categorical_from_log_weights(scores, rng);
    st.s[j] = g_new;
    ++st.group_counts[g_new];
  }
}

NiwPosterior GibbsSampler::niw_posterior(const LatentState& st) const {
  const int items = static_cast<int>(st.z.rows());
  const int aspects = data_.num_aspects;
  NiwPosterior out;
  out.kappa_n = hp_.niw_kappa0 + items;
  out.nu_n = hp_.niw_nu0 + items;
  if (items == 0) {
    out.mu_n = hp_.niw_mu0;
    out.psi_n = hp_.niw_Psi0;
    return out;
  }
  const Eigen::VectorXd z_bar = st.z.colwise().mean().transpose();
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(aspects, aspects);
  for (int i = 0; i < items; ++i) {
    const Eigen::VectorXd d = st.z.row(i).transpose() - z_bar;
    scatter += d * d.transpose();
  }
  const Eigen::VectorXd shift = z_bar - hp_.niw_mu0;
  out.mu_n = (hp_.niw_kappa0 * hp_.niw_mu0 + items * z_bar) / out.kappa_n;
  out.psi_n = hp_.niw_Psi0 + scatter +
              (hp_.niw_kappa0 * items / out.kappa_n) * (shift * shift.transpose());
  return out;
}

void GibbsSampler::sample_niw(LatentState& st) const {
  const NiwPosterior post = niw_posterior(st);
  Eigen::LLT<Eigen::MatrixXd> check(post.psi_n);
  if (check.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "NIW posterior scale not SPD");
  }
  RngStream rng = RngStream::derive(cfg_.seed, st.sweep_index, kPhaseNiw, 0);
  st.Sigma = inverse_wishart_draw(post.nu_n, post.psi_n, rng);
  st.mu = mvn_draw_cov(post.mu_n, st.Sigma / post.kappa_n, rng);
}

GaussianConditional GibbsSampler::intrinsic_conditional(const LatentState& st, int item) const {
  const int aspects = data_.num_aspects;
  Eigen::LLT<Eigen::MatrixXd> sigma_llt(st.Sigma);
  if (sigma_llt.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "Sigma not SPD");
  }
  const Eigen::MatrixXd sigma_inv = sigma_llt.solve(Eigen::MatrixXd::Identity(aspects, aspects));
  Eigen::VectorXd residual = Eigen::VectorXd::Zero(aspects);
  for (int o : obs_by_item_[item]) {
    const Observation& obs = data_.observations[o];
    residual += (st.v.row(o) - st.m.row(st.s[obs.user])).transpose();
  }
  const int n_i = static_cast<int>(obs_by_item_[item].size());
  const Eigen::MatrixXd precision = n_i * b_inv_ + sigma_inv;
  const Eigen::VectorXd info = b_inv_ * residual + sigma_inv * st.mu;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  GaussianConditional out;
  out.covariance = llt.solve(Eigen::MatrixXd::Identity(aspects, aspects));
  out.mean = llt.solve(info);
  return out;
}

void GibbsSampler::sample_intrinsic(LatentState& st) const {
  const int aspects = data_.num_aspects;
  Eigen::LLT<Eigen::MatrixXd> sigma_llt(st.Sigma);
  if (sigma_llt.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "Sigma not SPD");
  }
  const Eigen::MatrixXd sigma_inv = sigma_llt.solve(Eigen::MatrixXd::Identity(aspects, aspects));
  const Eigen::VectorXd prior_info = sigma_inv * st.mu;

#pragma omp parallel for schedule(static) if (cfg_.parallel_blocks)
  for (int i = 0; i < data_.num_items; ++i) {
    RngStream rng = RngStream::derive(cfg_.seed, st.sweep_index, kPhaseIntrinsic, i);
    Eigen::VectorXd residual = Eigen::VectorXd::Zero(aspects);
    for (int o : obs_by_item_[i]) {
      const Observation& obs = data_.observations[o];
      residual += (st.v.row(o) - st.m.row(st.s[obs.user])).transpose();
    }
    const int n_i = static_cast<int>(obs_by_item_[i].size());
    const Eigen::MatrixXd precision = n_i * b_inv_ + sigma_inv;
    const Eigen::VectorXd info = b_inv_ * residual + prior_info;
    st.z.row(i) = mvn_draw_precision(info, precision, rng).transpose();
  }
}

GaussianConditional GibbsSampler::latent_response_conditional(const LatentState& st,
                                                              int obs_index) const {
  const int aspects = data_.num_aspects;
  const int sticks = data_.num_levels - 1;
  const Observation& obs = data_.observations[obs_index];
  Eigen::VectorXd prec_diag = Eigen::VectorXd::Zero(aspects);
  Eigen::VectorXd like_info = Eigen::VectorXd::Zero(aspects);
  for (int a = 0; a < aspects; ++a) {
    const int level = obs.ratings[a];
    for (int k = 1; k <= std::min(level, sticks); ++k) {
      const double w = st.omega_at(obs_index, a, k);
      if (w <= 0.0) continue;  // a vanished auxiliary removes its whole term
      prec_diag[a] += w;
      like_info[a] += w * st.c.cut(k) - kappa_(obs_index, a * sticks + k - 1);
    }
  }
  const Eigen::VectorXd prior_mean =
      (st.z.row(obs.item) + st.m.row(st.s[obs.user])).transpose();
  Eigen::MatrixXd precision = b_inv_;
  precision.diagonal() += prec_diag;
  const Eigen::VectorXd info = b_inv_ * prior_mean + like_info;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  GaussianConditional out;
  out.covariance = llt.solve(Eigen::MatrixXd::Identity(aspects, aspects));
  out.mean = llt.solve(info);
  return out;
}

void GibbsSampler::resample_omega(LatentState& st) const {
  if (!spec_.ordinal_link || data_.num_levels < 2) return;
  const int aspects = data_.num_aspects;
  const int sticks = data_.num_levels - 1;
  const int n_obs = static_cast<int>(data_.observations.size());

#pragma omp parallel for schedule(static) if (cfg_.parallel_blocks)
  for (int o = 0; o < n_obs; ++o) {
    RngStream rng = RngStream::derive(cfg_.seed, st.sweep_index, kPhaseLatent, o);
    const Observation& obs = data_.observations[o];
    for (int a = 0; a < aspects; ++a) {
      const int level = obs.ratings[a];
      for (int k = 1; k <= sticks; ++k) {
        st.omega_at(o, a, k) =
            k <= level ? sample_pg1(st.c.cut(k) - st.v(o, a), rng) : 0.0;
      }
    }
  }
}

void GibbsSampler::sample_latent_responses(LatentState& st) const {
  if (!spec_.ordinal_link) return;
  const int aspects = data_.num_aspects;
  const int sticks = data_.num_levels - 1;
  const int n_obs = static_cast<int>(data_.observations.size());

#pragma omp parallel for schedule(static) if (cfg_.parallel_blocks)
  for (int o = 0; o < n_obs; ++o) {
    RngStream rng = RngStream::derive(cfg_.seed, st.sweep_index, kPhaseLatent, o);
    const Observation& obs = data_.observations[o];
    Eigen::VectorXd prec_diag = Eigen::VectorXd::Zero(aspects);
    Eigen::VectorXd like_info = Eigen::VectorXd::Zero(aspects);
    for (int a = 0; a < aspects; ++a) {
      const int level = obs.ratings[a];
      for (int k = 1; k <= std::min(level, sticks); ++k) {
        const double w = sample_pg1(st.c.cut(k) - st.v(o, a), rng);
        st.omega_at(o, a, k) = w;
        prec_diag[a] += w;
        like_info[a] += w * st.c.cut(k) - kappa_(o, a * sticks + k - 1);
      }
    }
    const Eigen::VectorXd prior_mean =
        (st.z.row(obs.item) + st.m.row(st.s[obs.user])).transpose();
    Eigen::MatrixXd precision = b_inv_;
    precision.diagonal() += prec_diag;
    const Eigen::VectorXd info = b_inv_ * prior_mean + like_info;
    st.v.row(o) = mvn_draw_precision(info, precision, rng).transpose();
  }
}

Eigen::MatrixXi GibbsSampler::argmax_cells(const LatentState& st) const {
  const int n_obs = static_cast<int>(data_.observations.size());
  Eigen::MatrixXi cells(n_obs, data_.num_aspects);
  for (int o = 0; o < n_obs; ++o) {
    for (int a = 0; a < data_.num_aspects; ++a) {
      cells(o, a) = argmax_category(st.v(o, a), st.c);
    }
  }
  return cells;
}

CutpointInterval GibbsSampler::interval_from_cells(const LatentState& st, int k,
                                                   const Eigen::MatrixXi& cells) const {
  const int sticks = st.c.size();
  const double inf = std::numeric_limits<double>::infinity();

  // Extreme responses in the four cells the move can touch.
  double max_cell_k = -inf;
  double min_cell_k = inf;
  double min_cell_next = inf;
  double max_cell_prev = -inf;
  for (int o = 0; o < cells.rows(); ++o) {
    for (int a = 0; a < cells.cols(); ++a) {
      const int cell = cells(o, a);
      const double value = st.v(o, a);
      if (cell == k) {
        max_cell_k = std::max(max_cell_k, value);
        min_cell_k = std::min(min_cell_k, value);
      } else if (cell == k + 1) {
        min_cell_next = std::min(min_cell_next, value);
      } else if (cell == k - 1) {
        max_cell_prev = std::max(max_cell_prev, value);
      }
    }
  }
  const bool have_lo = std::isfinite(max_cell_k);
  const bool have_hi = std::isfinite(min_cell_next);

  const double ck = st.c.cut(k);
  const double prev = k > 1 ? st.c.cut(k - 1) : -inf;
  const double next = k < sticks ? st.c.cut(k + 1) : inf;
  const double left_gap = k > 1 ? ck - prev : 1.0;
  const double right_gap = k < sticks ? next - ck : 1.0;
  // Empty-cell fallback bounds: pad off the neighbouring cut-point, or off
  // the current value at the ends of the scale.
  const double fallback_lo = k > 1 ? prev + 0.1 * left_gap : ck - 0.1 * right_gap;
  const double fallback_hi = k < sticks ? next - 0.1 * right_gap : ck + 0.1 * left_gap;

  double lo;
  double hi;
  if (cfg_.literal_cutpoint_range) {
    // Printed range: both endpoints shifted by -ln(1 - e^{-(c_k - c_{k-1})}).
    const double offset = k > 1 ? -std::log(-std::expm1(-(ck - prev))) : 0.0;
    lo = have_lo ? max_cell_k - offset : fallback_lo;
    hi = have_hi ? min_cell_next - offset : fallback_hi;
  } else {
    // Solve the boundary equations exactly. For k < K-1 the boundary between
    // cells k and k+1 sits at t_k = c_k - ln(1 - e^{-(c_{k+1} - c_k)}), and
    // t_k = t has the closed-form solution c_k = -ln(e^{-t} + e^{-c_{k+1}}).
    if (k < sticks) {
      lo = have_lo ? -log_sum_exp2(-max_cell_k, -next) : fallback_lo;
      hi = have_hi ? -log_sum_exp2(-min_cell_next, -next) : fallback_hi;
    } else {
      lo = have_lo ? max_cell_k : fallback_lo;
      hi = have_hi ? min_cell_next : fallback_hi;
    }
    if (k > 1) {
      // Keep the k-1 | k boundary t_{k-1} clear of the neighbouring cells:
      // t_{k-1} < min{v in cell k} bounds c_k below, t_{k-1} >= max{v in
      // cell k-1} bounds it above.
      if (std::isfinite(min_cell_k) && min_cell_k > prev) {
        lo = std::max(lo, prev - std::log(-std::expm1(prev - min_cell_k)));
      }
      if (std::isfinite(max_cell_prev) && max_cell_prev > prev) {
        hi = std::min(hi, prev - std::log(-std::expm1(prev - max_cell_prev)));
      }
    }
  }

  // Strict ordering window.
  if (k > 1) lo = std::max(lo, prev + 1e-9 * (1.0 + std::fabs(prev)));
  if (k < sticks) hi = std::min(hi, next - 1e-9 * (1.0 + std::fabs(next)));

  CutpointInterval out;
  out.lo = lo;
  out.hi = hi;
  out.lo_from_data = have_lo;
  out.hi_from_data = have_hi;
  out.empty = !(lo < hi);
  return out;
}

CutpointInterval GibbsSampler::cutpoint_interval(const LatentState& st, int k) const {
  if (k < 1 || k > st.c.size()) {
    throw Error(ErrorCode::invalid_argument, "cut-point index outside 1..K-1");
  }
  return interval_from_cells(st, k, argmax_cells(st));
}

void GibbsSampler::sample_cutpoints(LatentState& st) const {
  if (!spec_.ordinal_link || data_.num_levels < 2) return;
  const int sticks = st.c.size();
  Eigen::MatrixXi cells = argmax_cells(st);

  for (int k = 1; k <= sticks; ++k) {
    RngStream rng = RngStream::derive(cfg_.seed, st.sweep_index, kPhaseCutpoints, k);
    const CutpointInterval interval = interval_from_cells(st, k, cells);
    if (interval.empty) continue;

    const double original = st.c.cut(k);
    std::vector<double> cuts = st.c.values();
    bool accepted = false;
    for (int attempt = 0; attempt < 8 && !accepted; ++attempt) {
      const double candidate = rng.uniform(interval.lo, interval.hi);
      if (k > 1 && !(cuts[k - 2] < candidate)) continue;
      if (k < sticks && !(candidate < cuts[k])) continue;
      cuts[k - 1] = candidate;
      const CutPoints trial(cuts);
      // Accept only if every component keeps its argmax cell.
      Eigen::MatrixXi trial_cells(cells.rows(), cells.cols());
      bool preserved = true;
      for (int o = 0; o < cells.rows() && preserved; ++o) {
        for (int a = 0; a < cells.cols(); ++a) {
          trial_cells(o, a) = argmax_category(st.v(o, a), trial);
          if (trial_cells(o, a) != cells(o, a)) {
            preserved = false;
            break;
          }
        }
      }
      if (preserved) {
        st.c = trial;
        cells = std::move(trial_cells);
        accepted = true;
      } else {
        cuts[k - 1] = original;
      }
    }
  }
}

void GibbsSampler::sweep(LatentState& st) const {
  ++st.sweep_index;
  sample_group_bias(st);
  sample_user_groups(st);
  sample_niw(st);
  sample_intrinsic(st);
  sample_latent_responses(st);
  sample_cutpoints(st);
}

double GibbsSampler::joint_log_density(const LatentState& st) const {
  const int aspects = data_.num_aspects;
  double total = 0.0;

  if (spec_.bias != BiasMode::none) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(aspects);
    for (int g = 0; g < groups_; ++g) {
      total += mvn_log_density(st.m.row(g).transpose(), zero, hp_.Lambda);
    }
  }
  if (spec_.bias == BiasMode::group && groups_ > 1) {
    total += dirichlet_multinomial_log(hp_.alpha, st.group_counts);
  }

  total += mvn_log_density(st.mu, hp_.niw_mu0, st.Sigma / hp_.niw_kappa0);
  total += inverse_wishart_log_density(st.Sigma, hp_.niw_nu0, hp_.niw_Psi0);
  for (int i = 0; i < data_.num_items; ++i) {
    total += mvn_log_density(st.z.row(i).transpose(), st.mu, st.Sigma);
  }

  for (int o = 0; o < static_cast<int>(data_.observations.size()); ++o) {
    const Observation& obs = data_.observations[o];
    const Eigen::VectorXd mean = (st.z.row(obs.item) + st.m.row(st.s[obs.user])).transpose();
    const Eigen::VectorXd diff = st.v.row(o).transpose() - mean;
    total += -0.5 * (aspects * kLogTwoPi + b_log_det_ +
                     diff.dot(b_inv_ * diff));
    if (spec_.ordinal_link) {
      total += log_likelihood_vector(obs.ratings, st.v.row(o).transpose(), st.c);
    }
  }
  return total;
}

PosteriorSamples GibbsSampler::fit() const {
  LatentState st = make_initial_state();
  PosteriorSamples out;
  out.spec = spec_;
  out.sweep_log.reserve(cfg_.burn_in + cfg_.num_samples * cfg_.thinning);

  for (int t = 0; t < cfg_.burn_in; ++t) {
    sweep(st);
    out.sweep_log.push_back(joint_log_density(st));
  }
  out.alignment_reference = st.m;

  out.states.reserve(cfg_.num_samples);
  for (int n = 0; n < cfg_.num_samples; ++n) {
    for (int t = 0; t < cfg_.thinning; ++t) {
      sweep(st);
      out.sweep_log.push_back(joint_log_density(st));
    }
    out.states.push_back({st.z, st.m, st.s, st.c.values(), st.mu, st.Sigma});
  }
  return out;
}

PosteriorSamples fit(const RatingsDataset& data, const Hyperparameters& hp, const RunConfig& cfg,
                     ModelSpec spec) {
  return GibbsSampler(data, hp, cfg, spec).fit();
}

}  // namespace ordbias
