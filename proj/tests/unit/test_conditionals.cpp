// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
//
// Draw-free conditional parameters against closed-form conjugacy oracles,
// plus distributional checks on the actual draw paths with everything else
// frozen.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ordbias/gibbs.hpp"
#include "ordbias/rng.hpp"
#include "ordbias/stats.hpp"
#include "ordbias/stick_breaking.hpp"

using namespace ordbias;

namespace {

RatingsDataset tiny_dataset(int users, int items, int aspects, int levels,
                            std::uint64_t seed = 7) {
  RngStream rng(seed);
  std::vector<RawRating> raw;
  for (int j = 0; j < users; ++j) {
    for (int i = 0; i < items; ++i) {
      RawRating row;
      row.user_id = "u" + std::to_string(j);
      row.item_id = "i" + std::to_string(i);
      for (int a = 0; a < aspects; ++a) {
        row.ratings.push_back(1 + static_cast<int>(rng.below(levels)));
      }
      raw.push_back(std::move(row));
    }
  }
  return validate_dataset(raw, levels);
}

Eigen::MatrixXd empirical_covariance(const std::vector<Eigen::VectorXd>& draws) {
  const int dim = static_cast<int>(draws.front().size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& d : draws) cov += (d - mean) * (d - mean).transpose();
  return cov / static_cast<double>(draws.size() - 1);
}

}  // namespace

TEST_CASE("group bias conditional: empty group falls back to the prior") {
  const RatingsDataset data = tiny_dataset(3, 2, 4, 5);
  Hyperparameters hp = Hyperparameters::defaults(4, 2);
  RunConfig cfg;
  cfg.seed = 11;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  std::fill(st.s.begin(), st.s.end(), 0);  // group 1 has no ratings
  st.group_counts = {3, 0};

  const GaussianConditional prior = engine.group_bias_conditional(st, 1);
  CHECK(prior.mean.norm() == doctest::Approx(0.0));
  CHECK((prior.covariance - hp.Lambda).norm() == doctest::Approx(0.0).epsilon(1e-10));

  // 1e4 repeated draws: sample covariance within 5% of Lambda
  std::vector<Eigen::VectorXd> draws;
  for (int rep = 0; rep < 10000; ++rep) {
    st.sweep_index = rep + 1;
    engine.sample_group_bias(st);
    draws.push_back(st.m.row(1).transpose());
  }
  const Eigen::MatrixXd cov = empirical_covariance(draws);
  for (int a = 0; a < 4; ++a) {
    CHECK(cov(a, a) == doctest::Approx(1.0).epsilon(0.05));
    for (int b = 0; b < a; ++b) CHECK(std::fabs(cov(a, b)) < 0.05);
  }
}

TEST_CASE("group bias conditional: single-rating closed form") {
  const std::vector<RawRating> raw = {{"u0", "i0", {3, 3, 3, 3}}};
  const RatingsDataset data = validate_dataset(raw, 5);
  Hyperparameters hp = Hyperparameters::defaults(4, 1);
  hp.B = Eigen::MatrixXd::Identity(4, 4);
  hp.Lambda = Eigen::MatrixXd::Identity(4, 4);
  RunConfig cfg;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.z.setZero();
  st.v.row(0) << 1.0, 0.0, 0.0, 0.0;

  const GaussianConditional cond = engine.group_bias_conditional(st, 0);
  Eigen::VectorXd expected_mean(4);
  expected_mean << 0.5, 0.0, 0.0, 0.0;
  CHECK((cond.mean - expected_mean).norm() < 1e-10);
  CHECK((cond.covariance - 0.5 * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("group bias conditional: grid cross-check of the density") {
  // three ratings in one group, A=2; scan each axis of prior x likelihood
  const RatingsDataset data = tiny_dataset(1, 3, 2, 5);
  Hyperparameters hp = Hyperparameters::defaults(2, 1);
  hp.B << 0.3, 0.1, 0.1, 0.4;
  hp.Lambda << 1.2, -0.3, -0.3, 0.9;
  RunConfig cfg;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  RngStream noise(3);
  for (int o = 0; o < 3; ++o) {
    for (int a = 0; a < 2; ++a) st.v(o, a) = noise.normal();
    for (int a = 0; a < 2; ++a) st.z(data.observations[o].item, a) = noise.normal();
  }

  const GaussianConditional cond = engine.group_bias_conditional(st, 0);
  auto log_true = [&](const Eigen::VectorXd& x) {
    double acc = -0.5 * x.dot(hp.Lambda.inverse() * x);
    for (int o = 0; o < 3; ++o) {
      const Eigen::VectorXd diff =
          st.v.row(o).transpose() - st.z.row(data.observations[o].item).transpose() - x;
      acc += -0.5 * diff.dot(hp.B.inverse() * diff);
    }
    return acc;
  };
  auto log_gauss = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd d = x - cond.mean;
    return -0.5 * d.dot(cond.covariance.inverse() * d);
  };
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<double> lhs;
    std::vector<double> rhs;
    const double sd = std::sqrt(cond.covariance(axis, axis));
    for (int i = 0; i <= 200; ++i) {
      Eigen::VectorXd x = cond.mean;
      x[axis] += -4.0 * sd + 8.0 * sd * i / 200.0;
      lhs.push_back(log_true(x));
      rhs.push_back(log_gauss(x));
    }
    CHECK(stats::pearson(lhs, rhs) > 0.9999);
  }
}

TEST_CASE("user group scores: G=1 leaves assignments untouched") {
  const RatingsDataset data = tiny_dataset(3, 2, 2, 5);
  const Hyperparameters hp = Hyperparameters::defaults(2, 1);
  RunConfig cfg;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  const std::vector<int> before = st.s;
  st.sweep_index = 1;
  engine.sample_user_groups(st);
  CHECK(st.s == before);
}

TEST_CASE("user group scores: separated biases pin the assignment") {
  const RatingsDataset data = tiny_dataset(3, 3, 2, 5);
  Hyperparameters hp = Hyperparameters::defaults(2, 2);
  hp.B = 0.25 * Eigen::MatrixXd::Identity(2, 2);
  RunConfig cfg;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.z.setZero();
  st.m.row(0) << 2.0, 2.0;
  st.m.row(1) << -2.0, -2.0;
  // user 0's residuals match group 0 exactly
  for (int o : engine.observations_by_user()[0]) st.v.row(o) << 2.0, 2.0;

  const Eigen::VectorXd scores = engine.user_group_log_scores(st, 0);
  const double p0 = 1.0 / (1.0 + std::exp(scores[1] - scores[0]));
  CHECK(p0 > 0.999);
}

TEST_CASE("user group scores: symmetric case is an exact coin flip") {
  const RatingsDataset data = tiny_dataset(3, 2, 2, 5);
  const Hyperparameters hp = Hyperparameters::defaults(2, 2);
  RunConfig cfg;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.m.setZero();
  st.s = {0, 0, 1};  // leave-one-out counts for user 0 are (1, 1)
  st.group_counts = {2, 1};

  const Eigen::VectorXd scores = engine.user_group_log_scores(st, 0);
  const double p0 = 1.0 / (1.0 + std::exp(scores[1] - scores[0]));
  CHECK(p0 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("user group draw matches its categorical distribution") {
  const RatingsDataset data = tiny_dataset(3, 3, 2, 5, 23);
  Hyperparameters hp = Hyperparameters::defaults(2, 3);
  hp.alpha << 1.0, 2.0, 0.5;
  RunConfig cfg;
  cfg.seed = 5;
  const GibbsSampler engine(data, hp, cfg);
  LatentState base = engine.make_initial_state();
  base.m.row(0) << 0.5, -0.2;
  base.m.row(1) << -0.3, 0.4;
  base.m.row(2) << 0.0, 0.0;

  const Eigen::VectorXd scores = engine.user_group_log_scores(base, 0);
  Eigen::VectorXd probs = (scores.array() - scores.maxCoeff()).exp();
  probs /= probs.sum();

  const int n = 20000;
  std::vector<int> counts(3, 0);
  for (int rep = 0; rep < n; ++rep) {
    LatentState st = base;
    st.sweep_index = rep + 1;
    engine.sample_user_groups(st);
    ++counts[st.s[0]];
  }
  double chi2 = 0.0;
  for (int g = 0; g < 3; ++g) {
    const double expect = n * probs[g];
    chi2 += (counts[g] - expect) * (counts[g] - expect) / expect;
  }
  CHECK(stats::chi_square_p_value(chi2, 2.0) > 0.001);
}

TEST_CASE("NIW posterior parameters") {
  const int aspects = 2;
  Hyperparameters hp = Hyperparameters::defaults(aspects, 1);
  hp.niw_kappa0 = 2.5;
  hp.niw_nu0 = 6.0;
  hp.niw_mu0 << 0.4, -0.7;
  hp.niw_Psi0 << 1.5, 0.2, 0.2, 0.8;

  SUBCASE("no items reduces to the prior") {
    const RatingsDataset data = tiny_dataset(1, 1, aspects, 5);
    RunConfig cfg;
    const GibbsSampler engine(data, hp, cfg);
    LatentState st = engine.make_initial_state();
    st.z.resize(0, aspects);
    const NiwPosterior post = engine.niw_posterior(st);
    CHECK(post.kappa_n == doctest::Approx(hp.niw_kappa0));
    CHECK(post.nu_n == doctest::Approx(hp.niw_nu0));
    CHECK((post.mu_n - hp.niw_mu0).norm() < 1e-12);
    CHECK((post.psi_n - hp.niw_Psi0).norm() < 1e-12);
  }

  SUBCASE("one item at the prior mean leaves mu and Psi unchanged") {
    const RatingsDataset data = tiny_dataset(1, 1, aspects, 5);
    RunConfig cfg;
    const GibbsSampler engine(data, hp, cfg);
    LatentState st = engine.make_initial_state();
    st.z.row(0) = hp.niw_mu0.transpose();
    const NiwPosterior post = engine.niw_posterior(st);
    CHECK((post.mu_n - hp.niw_mu0).norm() < 1e-12);
    CHECK((post.psi_n - hp.niw_Psi0).norm() < 1e-12);
    CHECK(post.kappa_n == doctest::Approx(hp.niw_kappa0 + 1.0));
    CHECK(post.nu_n == doctest::Approx(hp.niw_nu0 + 1.0));
  }

  SUBCASE("random 20-item case against a square-completion oracle") {
    const RatingsDataset data = tiny_dataset(2, 20, aspects, 5);
    RunConfig cfg;
    const GibbsSampler engine(data, hp, cfg);
    LatentState st = engine.make_initial_state();
    RngStream noise(77);
    for (int i = 0; i < 20; ++i) {
      for (int a = 0; a < aspects; ++a) st.z(i, a) = noise.normal() + 0.3 * a;
    }
    const NiwPosterior post = engine.niw_posterior(st);

    // oracle via the uncentered identity:
    // Psi_n = Psi0 + sum z z^T + kappa0 mu0 mu0^T - kappa_n mu_n mu_n^T
    const double kappa_n = hp.niw_kappa0 + 20.0;
    Eigen::VectorXd sum_z = Eigen::VectorXd::Zero(aspects);
    Eigen::MatrixXd sum_zz = Eigen::MatrixXd::Zero(aspects, aspects);
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd z = st.z.row(i).transpose();
      sum_z += z;
      sum_zz += z * z.transpose();
    }
    const Eigen::VectorXd mu_n = (hp.niw_kappa0 * hp.niw_mu0 + sum_z) / kappa_n;
    const Eigen::MatrixXd psi_n = hp.niw_Psi0 + sum_zz +
                                  hp.niw_kappa0 * hp.niw_mu0 * hp.niw_mu0.transpose() -
                                  kappa_n * mu_n * mu_n.transpose();
    CHECK(post.kappa_n == doctest::Approx(kappa_n));
    CHECK(post.nu_n == doctest::Approx(hp.niw_nu0 + 20.0));
    CHECK((post.mu_n - mu_n).norm() < 1e-10);
    CHECK((post.psi_n - psi_n).norm() < 1e-10);
  }
}

TEST_CASE("NIW draws concentrate on the posterior parameters") {
  const int aspects = 2;
  const RatingsDataset data = tiny_dataset(2, 10, aspects, 5);
  Hyperparameters hp = Hyperparameters::defaults(aspects, 1);
  hp.niw_nu0 = 30.0;
  RunConfig cfg;
  cfg.seed = 9;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  const NiwPosterior post = engine.niw_posterior(st);

  Eigen::MatrixXd sigma_mean = Eigen::MatrixXd::Zero(aspects, aspects);
  Eigen::VectorXd mu_mean = Eigen::VectorXd::Zero(aspects);
  const int n = 20000;
  for (int rep = 0; rep < n; ++rep) {
    st.sweep_index = rep + 1;
    engine.sample_niw(st);
    sigma_mean += st.Sigma;
    mu_mean += st.mu;
  }
  sigma_mean /= n;
  mu_mean /= n;
  const Eigen::MatrixXd expected_sigma = post.psi_n / (post.nu_n - aspects - 1.0);
  CHECK((sigma_mean - expected_sigma).norm() / expected_sigma.norm() < 0.05);
  CHECK((mu_mean - post.mu_n).norm() < 0.05);
}

TEST_CASE("intrinsic conditional: empty item draws from N(mu, Sigma)") {
  // one rated item plus one unrated item in the index space
  const std::vector<RawRating> raw = {{"u0", "i0", {2, 3}}, {"u1", "i0", {4, 1}},
                                      {"u0", "i1", {1, 1}}};
  RatingsDataset data = validate_dataset(raw, 5);
  data.observations.pop_back();  // i1 keeps its index but loses its rating
  Hyperparameters hp = Hyperparameters::defaults(2, 1);
  RunConfig cfg;
  cfg.seed = 13;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.mu << 0.7, -0.2;
  st.Sigma << 0.9, 0.2, 0.2, 1.1;

  const GaussianConditional cond = engine.intrinsic_conditional(st, 1);
  CHECK((cond.mean - st.mu).norm() < 1e-12);
  CHECK((cond.covariance - st.Sigma).norm() < 1e-10);

  std::vector<Eigen::VectorXd> draws;
  for (int rep = 0; rep < 10000; ++rep) {
    st.sweep_index = rep + 1;
    engine.sample_intrinsic(st);
    draws.push_back(st.z.row(1).transpose());
  }
  const Eigen::MatrixXd cov = empirical_covariance(draws);
  CHECK((cov - st.Sigma).norm() / st.Sigma.norm() < 0.05);
}

TEST_CASE("intrinsic conditional: single-rating closed form") {
  const std::vector<RawRating> raw = {{"u0", "i0", {3, 3, 3, 3}}};
  const RatingsDataset data = validate_dataset(raw, 5);
  Hyperparameters hp = Hyperparameters::defaults(4, 1);
  hp.B = Eigen::MatrixXd::Identity(4, 4);
  RunConfig cfg;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.mu.setZero();
  st.Sigma = Eigen::MatrixXd::Identity(4, 4);
  st.m.setZero();
  st.v.row(0) << 2.0, 2.0, 2.0, 2.0;

  const GaussianConditional cond = engine.intrinsic_conditional(st, 0);
  CHECK((cond.mean - Eigen::VectorXd::Ones(4)).norm() < 1e-10);
  CHECK((cond.covariance - 0.5 * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("intrinsic conditional: grid cross-check") {
  const RatingsDataset data = tiny_dataset(3, 1, 2, 5, 31);
  Hyperparameters hp = Hyperparameters::defaults(2, 2);
  hp.B << 0.5, -0.1, -0.1, 0.3;
  RunConfig cfg;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.mu << 0.2, -0.4;
  st.Sigma << 1.4, 0.3, 0.3, 0.7;
  RngStream noise(19);
  for (int o = 0; o < 3; ++o) {
    for (int a = 0; a < 2; ++a) st.v(o, a) = noise.normal();
  }

  const GaussianConditional cond = engine.intrinsic_conditional(st, 0);
  auto log_true = [&](const Eigen::VectorXd& x) {
    double acc = -0.5 * (x - st.mu).dot(st.Sigma.inverse() * (x - st.mu));
    for (int o = 0; o < 3; ++o) {
      const Eigen::VectorXd diff =
          st.v.row(o).transpose() - x - st.m.row(st.s[data.observations[o].user]).transpose();
      acc += -0.5 * diff.dot(hp.B.inverse() * diff);
    }
    return acc;
  };
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<double> lhs;
    std::vector<double> rhs;
    const double sd = std::sqrt(cond.covariance(axis, axis));
    for (int i = 0; i <= 200; ++i) {
      Eigen::VectorXd x = cond.mean;
      x[axis] += -4.0 * sd + 8.0 * sd * i / 200.0;
      lhs.push_back(log_true(x));
      const Eigen::VectorXd d = x - cond.mean;
      rhs.push_back(-0.5 * d.dot(cond.covariance.inverse() * d));
    }
    CHECK(stats::pearson(lhs, rhs) > 0.9999);
  }
}

TEST_CASE("latent responses: K=1 degenerate scale draws from the prior") {
  const std::vector<RawRating> raw = {{"u0", "i0", {1, 1}}};
  const RatingsDataset data = validate_dataset(raw, 1);
  const Hyperparameters hp = Hyperparameters::defaults(2, 1);
  RunConfig cfg;
  cfg.seed = 3;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.z.row(0) << 0.4, -0.6;
  st.m.setZero();

  const GaussianConditional cond = engine.latent_response_conditional(st, 0);
  CHECK((cond.mean - st.z.row(0).transpose()).norm() < 1e-10);
  CHECK((cond.covariance - hp.B).norm() < 1e-10);
}

TEST_CASE("latent responses: zero auxiliaries reduce to the prior") {
  const std::vector<RawRating> raw = {{"u0", "i0", {3, 2}}};
  const RatingsDataset data = validate_dataset(raw, 5);
  const Hyperparameters hp = Hyperparameters::defaults(2, 1);
  RunConfig cfg;
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.omega.setZero();
  st.z.row(0) << 1.0, -1.0;
  const GaussianConditional cond = engine.latent_response_conditional(st, 0);
  CHECK((cond.mean - st.z.row(0).transpose()).norm() < 1e-10);
  CHECK((cond.covariance - hp.B).norm() < 1e-10);
}

TEST_CASE("latent responses: Gibbs marginal matches the grid-normalized density") {
  // A=1, K=2, c=(0), r=1, B=1, z+m=0: marginal of v is phi(v) sigma(-v) / Z
  const std::vector<RawRating> raw = {{"u0", "i0", {1}}};
  const RatingsDataset data = validate_dataset(raw, 2);
  Hyperparameters hp = Hyperparameters::defaults(1, 1);
  hp.B = Eigen::MatrixXd::Identity(1, 1);
  RunConfig cfg;
  cfg.seed = 21;
  cfg.init_cutpoints = {0.0};
  const GibbsSampler engine(data, hp, cfg, {true, BiasMode::none});
  LatentState st = engine.make_initial_state();
  st.z.setZero();

  std::vector<double> draws;
  for (int it = 0; it < 60000; ++it) {
    st.sweep_index = it + 1;
    engine.sample_latent_responses(st);
    if (it % 3 == 2) draws.push_back(st.v(0, 0));
  }

  std::vector<double> grid;
  std::vector<double> cdf;
  double mass = 0.0;
  double prev_density = 0.0;
  const double step = 0.002;
  for (double x = -7.0; x <= 7.0; x += step) {
    const double density = std::exp(-0.5 * x * x) / (1.0 + std::exp(x));
    if (!grid.empty()) mass += 0.5 * (prev_density + density) * step;
    grid.push_back(x);
    cdf.push_back(mass);
    prev_density = density;
  }
  for (double& c : cdf) c /= mass;
  CHECK(stats::ks_against_grid_cdf(draws, grid, cdf).p > 0.001);
}

TEST_CASE("cut-point interval brackets the two response clusters (K=2)") {
  const std::vector<RawRating> raw = {{"u0", "i0", {1}}, {"u1", "i0", {1}},
                                      {"u0", "i1", {2}}, {"u1", "i1", {2}}};
  const RatingsDataset data = validate_dataset(raw, 2);
  const Hyperparameters hp = Hyperparameters::defaults(1, 1);
  RunConfig cfg;
  cfg.seed = 27;
  cfg.init_cutpoints = {0.0};
  const GibbsSampler engine(data, hp, cfg);
  LatentState base = engine.make_initial_state();
  base.v(0, 0) = -1.3;
  base.v(1, 0) = -0.5;
  base.v(2, 0) = 1.2;
  base.v(3, 0) = 2.0;

  const CutpointInterval interval = engine.cutpoint_interval(base, 1);
  CHECK_FALSE(interval.empty);
  CHECK(interval.lo == doctest::Approx(-0.5));
  CHECK(interval.hi == doctest::Approx(1.2));

  for (int rep = 0; rep < 500; ++rep) {
    LatentState st = base;
    st.sweep_index = rep + 1;
    engine.sample_cutpoints(st);
    const double c1 = st.c.cut(1);
    CHECK(c1 >= -0.5);
    CHECK(c1 < 1.2);
    // argmax cells preserved
    CHECK(argmax_category(-0.5, st.c) == 1);
    CHECK(argmax_category(1.2, st.c) == 2);
  }
}

TEST_CASE("cut-point fallback keeps ordering when cells are empty") {
  const std::vector<RawRating> raw = {{"u0", "i0", {3}}, {"u1", "i0", {3}}};
  const RatingsDataset data = validate_dataset(raw, 3);
  const Hyperparameters hp = Hyperparameters::defaults(1, 1);
  RunConfig cfg;
  cfg.seed = 29;
  cfg.init_cutpoints = {-1.0, 1.0};
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.v.setConstant(6.0);  // everything lands in the top cell

  for (int rep = 0; rep < 200; ++rep) {
    st.sweep_index = rep + 1;
    engine.sample_cutpoints(st);
    CHECK(st.c.cut(1) < st.c.cut(2));
  }
}

TEST_CASE("repeated cut-point updates stay inside the data bracket") {
  const std::vector<RawRating> raw = {{"u0", "i0", {1}}, {"u1", "i0", {2}},
                                      {"u0", "i1", {3}}, {"u1", "i1", {2}}};
  const RatingsDataset data = validate_dataset(raw, 3);
  const Hyperparameters hp = Hyperparameters::defaults(1, 1);
  RunConfig cfg;
  cfg.seed = 33;
  cfg.init_cutpoints = {-1.0, 1.0};
  const GibbsSampler engine(data, hp, cfg);
  LatentState st = engine.make_initial_state();
  st.v(0, 0) = -2.0;
  st.v(1, 0) = 0.1;
  st.v(2, 0) = 2.5;
  st.v(3, 0) = -0.1;

  const double v_min = -2.0;
  const double v_max = 2.5;
  for (int rep = 0; rep < 300; ++rep) {
    st.sweep_index = rep + 1;
    engine.sample_cutpoints(st);
    CHECK(st.c.cut(1) < st.c.cut(2));
    CHECK(st.c.cut(1) > v_min - 10.0);
    CHECK(st.c.cut(2) < v_max + 10.0);
  }
}

TEST_CASE("cut-point draws are uniform over the K=2 bracket") {
  const std::vector<RawRating> raw = {{"u0", "i0", {1}}, {"u0", "i1", {2}}};
  const RatingsDataset data = validate_dataset(raw, 2);
  const Hyperparameters hp = Hyperparameters::defaults(1, 1);
  RunConfig cfg;
  cfg.seed = 39;
  cfg.init_cutpoints = {0.3};
  const GibbsSampler engine(data, hp, cfg);
  LatentState base = engine.make_initial_state();
  base.v(0, 0) = -0.8;
  base.v(1, 0) = 1.1;

  std::vector<double> draws;
  for (int rep = 0; rep < 20000; ++rep) {
    LatentState st = base;
    st.sweep_index = rep + 1;
    engine.sample_cutpoints(st);
    draws.push_back(st.c.cut(1));
  }
  std::vector<double> grid = {-0.8, 1.1};
  std::vector<double> cdf = {0.0, 1.0};
  CHECK(stats::ks_against_grid_cdf(draws, grid, cdf).p > 0.001);
}
