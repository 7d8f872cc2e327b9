// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ordbias/linalg.hpp"
#include "ordbias/rng.hpp"
#include "ordbias/stats.hpp"
#include "ordbias/stick_breaking.hpp"

namespace ordbias {

std::vector<FoldPair> kfold_split(const RatingsDataset& data, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::invalid_argument, "k-fold needs k >= 2");
  const int n = static_cast<int>(data.observations.size());
  if (n < k) throw Error(ErrorCode::too_few_observations, "fewer observations than folds");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  RngStream rng = RngStream::derive(seed, 0x666f6c64ULL, 0, 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(i + 1));
    std::swap(order[i], order[j]);
  }

  std::vector<FoldPair> folds;
  folds.reserve(k);
  for (int f = 0; f < k; ++f) {
    std::vector<Observation> train;
    std::vector<Observation> test;
    for (int pos = 0; pos < n; ++pos) {
      const Observation& obs = data.observations[order[pos]];
      if (pos % k == f) {
        test.push_back(obs);
      } else {
        train.push_back(obs);
      }
    }
    folds.push_back({data.with_observations(std::move(train)),
                     data.with_observations(std::move(test))});
  }
  return folds;
}

RmseResult rmse(const std::vector<PredictionRecord>& records, int num_aspects) {
  if (records.empty()) throw Error(ErrorCode::invalid_argument, "rmse of empty prediction set");
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(num_aspects);
  for (const PredictionRecord& rec : records) {
    for (int a = 0; a < num_aspects; ++a) {
      const double err = rec.predicted[a] - rec.observed[a];
      sq[a] += err * err;
    }
  }
  RmseResult out;
  out.pooled = std::sqrt(sq.sum() / (records.size() * num_aspects));
  out.per_aspect = (sq / static_cast<double>(records.size())).cwiseSqrt();
  return out;
}

Eigen::VectorXd fcp(const std::vector<PredictionRecord>& records, int num_aspects,
                    const FcpOptions& options) {
  std::map<int, std::vector<const PredictionRecord*>> by_user;
  for (const PredictionRecord& rec : records) by_user[rec.user].push_back(&rec);

  Eigen::VectorXd out(num_aspects);
  for (int a = 0; a < num_aspects; ++a) {
    double pooled_concordant = 0.0;
    double pooled_total = 0.0;
    double user_sum = 0.0;
    int user_count = 0;
    for (const auto& [user, recs] : by_user) {
      double concordant = 0.0;
      double total = 0.0;
      for (std::size_t i = 0; i < recs.size(); ++i) {
        for (std::size_t j = i + 1; j < recs.size(); ++j) {
          const int obs_diff = recs[i]->observed[a] - recs[j]->observed[a];
          if (obs_diff == 0) continue;  // incomparable pair
          const double pred_diff = recs[i]->predicted[a] - recs[j]->predicted[a];
          total += 1.0;
          if (pred_diff == 0.0) {
            if (options.tie_half_credit) concordant += 0.5;
          } else if ((pred_diff > 0.0) == (obs_diff > 0)) {
            concordant += 1.0;
          }
        }
      }
      pooled_concordant += concordant;
      pooled_total += total;
      if (total > 0.0) {
        user_sum += concordant / total;
        ++user_count;
      }
    }
    if (options.per_user_average) {
      if (user_count == 0) throw Error(ErrorCode::invalid_argument, "no comparable pairs");
      out[a] = user_sum / user_count;
    } else {
      if (pooled_total == 0.0) throw Error(ErrorCode::invalid_argument, "no comparable pairs");
      out[a] = pooled_concordant / pooled_total;
    }
  }
  return out;
}

double aspect_ranking_pearson(const std::vector<PredictionRecord>& records) {
  double acc = 0.0;
  int used = 0;
  for (const PredictionRecord& rec : records) {
    const int aspects = static_cast<int>(rec.observed.size());
    if (aspects < 2) continue;
    std::vector<double> obs(rec.observed.begin(), rec.observed.end());
    std::vector<double> pred(rec.predicted.data(), rec.predicted.data() + aspects);
    const std::vector<double> obs_ranks = stats::average_ranks(obs);
    const std::vector<double> pred_ranks = stats::average_ranks(pred);
    const bool obs_flat =
        std::equal(obs_ranks.begin() + 1, obs_ranks.end(), obs_ranks.begin());
    const bool pred_flat =
        std::equal(pred_ranks.begin() + 1, pred_ranks.end(), pred_ranks.begin());
    if (obs_flat || pred_flat) continue;
    acc += stats::pearson(obs_ranks, pred_ranks);
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::invalid_argument, "no evaluable user-item pairs");
  return acc / used;
}

TestLoglik test_loglik(const PosteriorSamples& samples, const Hyperparameters& hp,
                       const RatingsDataset& test, const TestLoglikOptions& options) {
  if (samples.states.empty()) throw Error(ErrorCode::invalid_argument, "no retained samples");
  const int aspects = test.num_aspects;
  const Eigen::MatrixXd b_chol = Eigen::LLT<Eigen::MatrixXd>(hp.B).matrixL();

  TestLoglik out;
  out.per_observation.reserve(test.observations.size());
  for (int o = 0; o < static_cast<int>(test.observations.size()); ++o) {
    const Observation& obs = test.observations[o];
    RngStream rng = RngStream::derive(options.seed, 0x6c6cULL, o, 0);
    std::vector<double> log_terms;
    for (const SampleSnapshot& snap : samples.states) {
      Eigen::VectorXd mean = snap.z.row(obs.item).transpose();
      if (samples.spec.bias != BiasMode::none) {
        mean += snap.m.row(snap.s[obs.user]).transpose();
      }
      if (samples.spec.ordinal_link) {
        const CutPoints cuts(snap.cuts);
        for (int d = 0; d < options.mc_draws; ++d) {
          const Eigen::VectorXd v = mvn_draw_chol(mean, b_chol, rng);
          log_terms.push_back(log_likelihood_vector(obs.ratings, v, cuts));
        }
      } else {
        Eigen::VectorXd r_real(aspects);
        for (int a = 0; a < aspects; ++a) r_real[a] = obs.ratings[a];
        log_terms.push_back(mvn_log_density(r_real, mean, hp.B));
      }
    }
    const double peak = *std::max_element(log_terms.begin(), log_terms.end());
    double acc = 0.0;
    for (double t : log_terms) acc += std::exp(t - peak);
    out.per_observation.push_back(peak + std::log(acc / log_terms.size()));
  }
  out.mean = stats::mean(out.per_observation);
  return out;
}

std::vector<GroupSdPoint> group_sd_analysis(const PosteriorSamples& samples,
                                            const RatingsDataset& data) {
  const std::vector<int> modes = posterior_mode_groups(samples, data.num_users);
  std::vector<std::vector<int>> by_item(data.num_items);
  for (int o = 0; o < static_cast<int>(data.observations.size()); ++o) {
    by_item[data.observations[o].item].push_back(o);
  }

  std::vector<GroupSdPoint> points;
  for (int i = 0; i < data.num_items; ++i) {
    if (by_item[i].size() < 2) continue;
    std::map<int, std::vector<int>> by_group;
    for (int o : by_item[i]) by_group[modes[data.observations[o].user]].push_back(o);
    for (int a = 0; a < data.num_aspects; ++a) {
      std::vector<double> control;
      control.reserve(by_item[i].size());
      for (int o : by_item[i]) control.push_back(data.observations[o].ratings[a]);
      const double control_sd = stats::standard_deviation(control);
      for (const auto& [g, members] : by_group) {
        if (members.size() < 2) continue;
        std::vector<double> vals;
        vals.reserve(members.size());
        for (int o : members) vals.push_back(data.observations[o].ratings[a]);
        GroupSdPoint p;
        p.item = i;
        p.aspect = a;
        p.group = g;
        p.group_raters = static_cast<int>(members.size());
        p.group_sd = stats::standard_deviation(vals);
        p.control_sd = control_sd;
        points.push_back(p);
      }
    }
  }
  return points;
}

Eigen::MatrixXd intrinsic_rating_scale(const PosteriorSamples& samples,
                                       const RatingsDataset& data) {
  if (samples.states.empty()) throw Error(ErrorCode::invalid_argument, "no retained samples");
  Eigen::MatrixXd z_mean = Eigen::MatrixXd::Zero(data.num_items, data.num_aspects);
  for (const SampleSnapshot& snap : samples.states) z_mean += snap.z;
  z_mean /= static_cast<double>(samples.states.size());

  Eigen::MatrixXd out(data.num_items, data.num_aspects);
  if (!samples.spec.ordinal_link) return z_mean;
  for (int i = 0; i < data.num_items; ++i) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(data.num_aspects);
    for (const SampleSnapshot& snap : samples.states) {
      acc += expected_rating_single(z_mean.row(i).transpose(), CutPoints(snap.cuts));
    }
    out.row(i) = (acc / static_cast<double>(samples.states.size())).transpose();
  }
  return out;
}

namespace {

std::vector<DeltaBin> bin_deltas(const std::vector<DeltaTriple>& triples, bool against_int,
                                 int num_bins = 9) {
  if (triples.empty()) return {};
  double lo = 1e300;
  double hi = -1e300;
  for (const DeltaTriple& t : triples) {
    const double x = against_int ? t.d_int : t.d_avg;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!(hi > lo)) {
    hi = lo + 1.0;
  }
  std::vector<DeltaBin> bins(num_bins);
  const double width = (hi - lo) / num_bins;
  std::vector<double> sums(num_bins, 0.0);
  for (const DeltaTriple& t : triples) {
    const double x = against_int ? t.d_int : t.d_avg;
    int b = static_cast<int>((x - lo) / width);
    b = std::clamp(b, 0, num_bins - 1);
    sums[b] += t.d_obs;
    ++bins[b].count;
  }
  for (int b = 0; b < num_bins; ++b) {
    bins[b].center = lo + (b + 0.5) * width;
    bins[b].mean_d_obs = bins[b].count > 0 ? sums[b] / bins[b].count : 0.0;
  }
  return bins;
}

}  // namespace

DeltaAnalysis intrinsic_delta_analysis(const PosteriorSamples& samples,
                                       const RatingsDataset& data, int max_ratings,
                                       double min_gap) {
  const Eigen::MatrixXd intrinsic = intrinsic_rating_scale(samples, data);

  std::vector<int> item_counts(data.num_items, 0);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(data.num_items, data.num_aspects);
  for (const Observation& obs : data.observations) {
    ++item_counts[obs.item];
    for (int a = 0; a < data.num_aspects; ++a) sums(obs.item, a) += obs.ratings[a];
  }
  Eigen::MatrixXd avg = sums;
  for (int i = 0; i < data.num_items; ++i) {
    if (item_counts[i] > 0) avg.row(i) /= item_counts[i];
  }

  // qualifies(i, a): sparsely rated and the learned intrinsic rating visibly
  // disagrees with the raw average.
  auto qualifies = [&](int i, int a) {
    return item_counts[i] < max_ratings &&
           std::fabs(intrinsic(i, a) - avg(i, a)) >= min_gap;
  };

  std::vector<std::vector<std::pair<int, int>>> rated_by_user(data.num_users);
  for (int o = 0; o < static_cast<int>(data.observations.size()); ++o) {
    const Observation& obs = data.observations[o];
    rated_by_user[obs.user].emplace_back(obs.item, o);
  }

  DeltaAnalysis out;
  for (int j = 0; j < data.num_users; ++j) {
    const auto& rated = rated_by_user[j];
    for (std::size_t p = 0; p < rated.size(); ++p) {
      for (std::size_t q = p + 1; q < rated.size(); ++q) {
        const auto [i1, o1] = rated[p];
        const auto [i2, o2] = rated[q];
        // d_obs is this user's own rating difference, so the item averages
        // exclude the user; otherwise the comparison is circular
        if (item_counts[i1] < 2 || item_counts[i2] < 2) continue;
        for (int a = 0; a < data.num_aspects; ++a) {
          if (!qualifies(i1, a) || !qualifies(i2, a)) continue;
          const int r1 = data.observations[o1].ratings[a];
          const int r2 = data.observations[o2].ratings[a];
          DeltaTriple t;
          t.d_obs = r1 - r2;
          t.d_avg = (sums(i1, a) - r1) / (item_counts[i1] - 1) -
                    (sums(i2, a) - r2) / (item_counts[i2] - 1);
          t.d_int = intrinsic(i1, a) - intrinsic(i2, a);
          out.triples.push_back(t);
        }
      }
    }
  }

  if (out.triples.size() >= 2) {
    std::vector<double> d_obs;
    std::vector<double> d_avg;
    std::vector<double> d_int;
    for (const DeltaTriple& t : out.triples) {
      d_obs.push_back(t.d_obs);
      d_avg.push_back(t.d_avg);
      d_int.push_back(t.d_int);
    }
    const auto constant = [](const std::vector<double>& x) {
      return std::equal(x.begin() + 1, x.end(), x.begin());
    };
    if (!constant(d_obs) && !constant(d_int)) out.pearson_obs_int = stats::pearson(d_obs, d_int);
    if (!constant(d_obs) && !constant(d_avg)) out.pearson_obs_avg = stats::pearson(d_obs, d_avg);
  }
  out.bins_int = bin_deltas(out.triples, true);
  out.bins_avg = bin_deltas(out.triples, false);
  return out;
}

EvaluationReport evaluate_model(const RatingsDataset& data, const ModelSpec& spec,
                                const Hyperparameters& hp, const RunConfig& cfg,
                                const EvaluateOptions& options) {
  const std::vector<FoldPair> folds = kfold_split(data, options.folds, cfg.seed);

  EvaluationReport report;
  std::vector<PredictionRecord> all_records;
  double loglik_weighted = 0.0;
  for (const FoldPair& fold : folds) {
    FittedModel model = fit_model(fold.train, hp, cfg, spec);
    for (const Observation& obs : fold.test.observations) {
      PredictionRecord rec;
      rec.user = obs.user;
      rec.item = obs.item;
      rec.observed = obs.ratings;
      rec.predicted = predict(model, obs.user, obs.item, options.predict);
      all_records.push_back(std::move(rec));
    }
    const TestLoglik ll = test_loglik(model.samples, hp, fold.test, options.loglik);
    loglik_weighted += ll.mean * static_cast<double>(ll.per_observation.size());
    report.per_observation_loglik.insert(report.per_observation_loglik.end(),
                                         ll.per_observation.begin(), ll.per_observation.end());
  }

  const RmseResult r = rmse(all_records, data.num_aspects);
  report.per_aspect_rmse = r.per_aspect;
  report.pooled_rmse = r.pooled;
  report.per_aspect_fcp = fcp(all_records, data.num_aspects);
  report.aspect_pearson = aspect_ranking_pearson(all_records);
  report.mean_test_loglik = loglik_weighted / report.per_observation_loglik.size();

  if (options.run_analyses) {
    FittedModel full = fit_model(data, hp, cfg, spec);
    report.group_sd_pairs = group_sd_analysis(full.samples, data);
    report.deltas = intrinsic_delta_analysis(full.samples, data);
    report.group_bias = posterior_mean_group_bias(full);
    if (spec.ordinal_link && data.num_levels > 1) {
      report.mean_cutpoints.assign(data.num_levels - 1, 0.0);
      for (const SampleSnapshot& snap : full.samples.states) {
        for (std::size_t k = 0; k < report.mean_cutpoints.size(); ++k) {
          report.mean_cutpoints[k] += snap.cuts[k];
        }
      }
      for (double& c : report.mean_cutpoints) c /= full.samples.states.size();
    }
  }
  return report;
}

}  // namespace ordbias
