// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/diagnostics.hpp"

#include <cmath>

#include "ordbias/gibbs.hpp"
#include "ordbias/linalg.hpp"
#include "ordbias/polya_gamma.hpp"
#include "ordbias/rng.hpp"
#include "ordbias/stats.hpp"
#include "ordbias/stick_breaking.hpp"
#include "ordbias/synthetic.hpp"

namespace ordbias {

std::vector<MomentCheck> pg_moment_checks(std::span<const double> tilts, int num_draws,
                                          std::uint64_t seed) {
  std::vector<MomentCheck> out;
  for (std::size_t t = 0; t < tilts.size(); ++t) {
    RngStream rng = RngStream::derive(seed, 0x7067ULL, t, 0);
    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = 0; i < num_draws; ++i) {
      const double w = sample_pg1(tilts[t], rng);
      sum += w;
      sumsq += w * w;
    }
    MomentCheck check;
    check.name = "pg_mean(c=" + std::to_string(tilts[t]) + ")";
    check.reference = pg_mean(1, tilts[t]);
    check.estimate = sum / num_draws;
    const double var = (sumsq - sum * sum / num_draws) / (num_draws - 1);
    check.se = std::sqrt(var / num_draws);
    check.zscore = (check.estimate - check.reference) / check.se;
    out.push_back(std::move(check));
  }
  return out;
}

namespace {

struct GewekeStats {
  double z_mean, z_sq, m_mean, m_sq, v_mean, v_sq;
};

struct GewekeAccumulator {
  std::vector<double> z_mean, z_sq, m_mean, m_sq, v_mean, v_sq;
  void push(const GewekeStats& s) {
    z_mean.push_back(s.z_mean);
    z_sq.push_back(s.z_sq);
    m_mean.push_back(s.m_mean);
    m_sq.push_back(s.m_sq);
    v_mean.push_back(s.v_mean);
    v_sq.push_back(s.v_sq);
  }
};

GewekeStats summarize(const Eigen::MatrixXd& z, const Eigen::MatrixXd& m,
                      const Eigen::MatrixXd& v) {
  GewekeStats s;
  s.z_mean = z.mean();
  s.z_sq = z.array().square().mean();
  s.m_mean = m.mean();
  s.m_sq = m.array().square().mean();
  s.v_mean = v.mean();
  s.v_sq = v.array().square().mean();
  return s;
}

MomentCheck compare_chain(const std::string& name, std::span<const double> forward,
                          std::span<const double> chain) {
  MomentCheck check;
  check.name = name;
  check.reference = stats::mean(forward);
  check.estimate = stats::mean(chain);
  const double se_f = stats::standard_deviation(forward) / std::sqrt(double(forward.size()));
  const double se_c = stats::batch_means_se(chain);
  check.se = std::sqrt(se_f * se_f + se_c * se_c);
  check.zscore = (check.estimate - check.reference) / check.se;
  return check;
}

}  // namespace

GewekeResult geweke_check(const GewekeConfig& config) {
  const int aspects = config.num_aspects;
  Hyperparameters hp = Hyperparameters::defaults(aspects, config.num_groups);
  // Fat-tailed NIW priors make second-moment chains noisy; tighten them so
  // the comparison has usable standard errors.
  hp.niw_kappa0 = 2.0;
  hp.niw_nu0 = aspects + 20.0;
  hp.niw_Psi0 = (hp.niw_nu0 - aspects - 1.0) * Eigen::MatrixXd::Identity(aspects, aspects);
  hp.Lambda = 0.5 * Eigen::MatrixXd::Identity(aspects, aspects);

  const std::vector<double> cuts = RunConfig::default_cutpoints(config.num_levels);

  SimOptions sim;
  sim.num_users = config.num_users;
  sim.num_items = config.num_items;
  sim.num_aspects = aspects;
  sim.num_levels = config.num_levels;
  sim.density = 1.0;
  sim.cutpoints = cuts;

  // Forward side: independent draws from the generative process.
  GewekeAccumulator forward;
  for (int d = 0; d < config.forward_draws; ++d) {
    sim.seed = mix64(config.seed ^ (0xf0f0ULL + d));
    auto [data, truth] = generate(hp, sim);
    forward.push(summarize(truth.z_true, truth.m_true, truth.v_true));
  }

  // Successive-conditional side: alternate one Gibbs sweep of the latents
  // with a re-draw of the observed ratings from the likelihood.
  RunConfig cfg;
  cfg.seed = mix64(config.seed ^ 0xc4a1ULL);
  cfg.init_cutpoints = cuts;
  sim.seed = mix64(config.seed ^ 0x90ULL);
  auto [data, truth] = generate(hp, sim);
  GibbsSampler engine(data, hp, cfg, ModelSpec{});
  LatentState state = engine.make_initial_state();
  // start the latents from a forward draw
  state.z = truth.z_true;
  state.m = truth.m_true;
  state.s = truth.s_true;
  state.v = truth.v_true;
  std::fill(state.group_counts.begin(), state.group_counts.end(), 0);
  for (int g : state.s) ++state.group_counts[g];
  state.mu = truth.mu_true;
  state.Sigma = truth.sigma_true;
  engine.resample_omega(state);

  const CutPoints cut_fixed(cuts);
  GewekeAccumulator chain;
  std::vector<Observation> observations = data.observations;
  for (int cycle = 0; cycle < config.chain_cycles; ++cycle) {
    ++state.sweep_index;
    engine.sample_group_bias(state);
    engine.sample_user_groups(state);
    engine.sample_niw(state);
    engine.sample_intrinsic(state);
    engine.sample_latent_responses(state);
    // cut-points stay fixed

    // data step: r | v, c
    RngStream rng = RngStream::derive(config.seed, 0xda7aULL, cycle, 0);
    for (int o = 0; o < static_cast<int>(observations.size()); ++o) {
      for (int a = 0; a < aspects; ++a) {
        observations[o].ratings[a] = draw_ordinal(state.v(o, a), cut_fixed, rng);
      }
    }
    RatingsDataset next = data.with_observations(observations);
    const std::uint64_t sweep_token = state.sweep_index;
    engine = GibbsSampler(std::move(next), hp, cfg, ModelSpec{});
    state.sweep_index = sweep_token;

    if (cycle % config.chain_thin == 0) {
      chain.push(summarize(state.z, state.m, state.v));
    }
  }

  GewekeResult result;
  result.checks.push_back(compare_chain("mean(z)", forward.z_mean, chain.z_mean));
  result.checks.push_back(compare_chain("mean(z^2)", forward.z_sq, chain.z_sq));
  result.checks.push_back(compare_chain("mean(m)", forward.m_mean, chain.m_mean));
  result.checks.push_back(compare_chain("mean(m^2)", forward.m_sq, chain.m_sq));
  result.checks.push_back(compare_chain("mean(v)", forward.v_mean, chain.v_mean));
  result.checks.push_back(compare_chain("mean(v^2)", forward.v_sq, chain.v_sq));
  for (const MomentCheck& c : result.checks) {
    result.max_abs_z = std::max(result.max_abs_z, std::fabs(c.zscore));
  }
  return result;
}

TraceStats trace_stats(std::span<const double> sweep_log) {
  TraceStats out;
  for (double v : sweep_log) {
    if (!std::isfinite(v)) {
      out.finite = false;
      return out;
    }
  }
  if (sweep_log.size() < 8) return out;
  const std::size_t quartile = sweep_log.size() / 4;
  const auto last_quartile = sweep_log.subspan(sweep_log.size() - quartile);
  const auto first_half = sweep_log.subspan(0, sweep_log.size() / 2);
  out.last_quartile_slope = stats::slope(last_quartile);
  out.first_half_mean = stats::mean(first_half);
  out.last_quartile_mean = stats::mean(last_quartile);
  return out;
}

}  // namespace ordbias
