#include "spa/simulate.hpp"
#include "spa/summary.hpp"
#include "spa/summary_io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace spa;
namespace fs = std::filesystem;

namespace {

Snapshot make_snapshot(std::size_t t, double b, Eigen::MatrixXd betas, Eigen::VectorXd weights)
{
  Snapshot s;
  s.t = t;
  s.b = b;
  s.betas = std::move(betas);
  s.weights = std::move(weights);
  return s;
}

SmcOutput two_step_output()
{
  SmcOutput out;
  out.a = 2.0;
  out.names = {"x1", "x2"};
  StepRecord r1;
  r1.t = 1;
  r1.b = 2.0;
  r1.log_z_ratio = 0.0;
  StepRecord r2 = r1;
  r2.t = 2;
  r2.b = 1.0;
  r2.log_z_ratio = std::log(3.0);
  out.steps = {r1, r2};
  Eigen::MatrixXd b1(2, 2), b2(2, 2);
  b1 << 0.0, 1.0, 0.2, -1.0;
  b2 << 0.4, 0.5, 0.6, 0.7;
  out.snapshots = {make_snapshot(1, 2.0, b1, Eigen::Vector2d(0.5, 0.5)),
                   make_snapshot(2, 1.0, b2, Eigen::Vector2d(0.25, 0.75))};
  return out;
}

std::vector<double> vec(std::initializer_list<double> v) { return v; }

} // namespace

TEST(WeightedQuantile, Examples)
{
  const auto v = vec({3.0, 1.0, 2.0});
  const auto w = vec({1.0, 1.0, 1.0});
  EXPECT_EQ(weighted_quantile(v, w, 0.5), 2.0);
  EXPECT_EQ(weighted_quantile(v, w, 0.1), 1.0);
  EXPECT_EQ(weighted_quantile(v, w, 0.95), 3.0);
  // Exactly on a cumulative step: left-continuous inverse picks the lower value.
  const auto v4 = vec({1.0, 2.0, 3.0, 4.0});
  const auto w4 = vec({0.25, 0.25, 0.25, 0.25});
  EXPECT_EQ(weighted_quantile(v4, w4, 0.5), 2.0);
  EXPECT_EQ(weighted_quantile(v4, w4, 0.75), 3.0);
  // Heavy weight dominates.
  EXPECT_EQ(weighted_quantile(v, vec({0.1, 0.8, 0.1}), 0.5), 1.0);
  EXPECT_EQ(weighted_quantile(v, vec({0.0, 0.0, 5.0}), 0.01), 2.0);
}

TEST(WeightedQuantile, StepSumsWithRoundingStillHit)
{
  std::vector<double> values(10), weights(10, 0.1);
  for (int i = 0; i < 10; ++i)
    values[static_cast<std::size_t>(i)] = i;
  EXPECT_EQ(weighted_quantile(values, weights, 0.3), 2.0);
  EXPECT_EQ(weighted_quantile(values, weights, 0.7), 6.0);
}

TEST(WeightedQuantile, InverseOfCdf)
{
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(500), weights(500);
  for (std::size_t i = 0; i < 500; ++i) {
    values[i] = g(rng);
    weights[i] = u(rng);
  }
  const WeightedSample s(values, weights);
  for (double q : {0.01, 0.1, 0.25, 0.5, 0.77, 0.9, 0.99}) {
    const double x = s.quantile(q);
    EXPECT_GE(s.cdf(x), q - 1e-12);
    const double below = std::nextafter(x, -INFINITY);
    EXPECT_LT(s.cdf(below), q);
  }
  EXPECT_THROW(s.quantile(0.0), std::invalid_argument);
  EXPECT_THROW(s.quantile(1.0), std::invalid_argument);
}

TEST(WeightedQuantile, WeightedMean)
{
  const WeightedSample s(vec({1.0, 3.0}), vec({3.0, 1.0}));
  EXPECT_DOUBLE_EQ(s.mean(), 1.5);
  EXPECT_THROW(WeightedSample(vec({1.0}), vec({-1.0})), std::invalid_argument);
  EXPECT_THROW(WeightedSample(vec({1.0}), vec({0.0})), std::invalid_argument);
  EXPECT_THROW(WeightedSample(vec({}), vec({})), std::invalid_argument);
}

TEST(Concentration, Examples)
{
  const auto v = vec({-0.2, -0.05, 0.0, 0.05, 0.3});
  const auto w = vec({0.1, 0.2, 0.3, 0.2, 0.2});
  // Boundary values +-0.05 are outside the open interval.
  EXPECT_NEAR(concentration(v, w, 0.05), 1.0 - 0.3, 1e-15);
  EXPECT_NEAR(concentration(v, w, 0.1), 1.0 - 0.7, 1e-15);
  EXPECT_NEAR(concentration(v, w, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(concentration(vec({0.0}), vec({1.0}), 0.1), 0.0, 1e-15);
  EXPECT_THROW(concentration(v, w, 0.0), std::invalid_argument);
}

TEST(AbsMedianPath, SignFlipInvariant)
{
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.3, 1.0);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  auto out = two_step_output();
  for (auto& s : out.snapshots) {
    s.betas.resize(51, 2);
    s.weights.resize(51);
    for (Index i = 0; i < 51; ++i) {
      s.betas(i, 0) = g(rng);
      s.betas(i, 1) = g(rng);
      s.weights[i] = u(rng);
    }
    s.weights /= s.weights.sum();
  }
  const auto m = abs_median_path(out);
  for (auto& s : out.snapshots)
    s.betas = -s.betas;
  EXPECT_TRUE(abs_median_path(out) == m);
  EXPECT_EQ(m.rows(), 2);
  EXPECT_TRUE((m.array() >= 0.0).all());
}

TEST(AbsMedianPath, Values)
{
  const auto m = abs_median_path(two_step_output());
  EXPECT_EQ(m(0, 0), 0.0);
  EXPECT_EQ(m(0, 1), 1.0);
  EXPECT_EQ(m(1, 0), 0.6);
  EXPECT_EQ(m(1, 1), 0.7);
}

TEST(CPosterior, UniformAndDominant)
{
  auto out = two_step_output();
  out.steps[1].log_z_ratio = 0.0;
  auto post = c_posterior(out);
  EXPECT_DOUBLE_EQ(post.mass[0], 0.5);
  EXPECT_DOUBLE_EQ(post.mass[1], 0.5);
  EXPECT_EQ(post.mode, 0u); // ties go to the first step
  EXPECT_DOUBLE_EQ(post.c[0], 1.0);
  EXPECT_DOUBLE_EQ(post.c[1], 0.5);

  out.steps[1].log_z_ratio = 800.0; // would overflow without rescaling
  post = c_posterior(out);
  EXPECT_NEAR(post.mass[1], 1.0, 1e-15);
  EXPECT_EQ(post.mode, 1u);
  EXPECT_DOUBLE_EQ(post.mode_c(), 0.5);

  out.steps[1].log_z_ratio = std::log(3.0);
  post = c_posterior(out);
  EXPECT_NEAR(post.mass[0], 0.25, 1e-15);
  EXPECT_NEAR(post.mass[1], 0.75, 1e-15);
}

TEST(PooledPosterior, HandComputedWeights)
{
  const auto out = two_step_output();
  const auto pooled = pooled_posterior(out);
  ASSERT_EQ(pooled.betas.rows(), 4);
  EXPECT_NEAR(pooled.weights[0], 0.25 * 0.5, 1e-15);
  EXPECT_NEAR(pooled.weights[1], 0.25 * 0.5, 1e-15);
  EXPECT_NEAR(pooled.weights[2], 0.75 * 0.25, 1e-15);
  EXPECT_NEAR(pooled.weights[3], 0.75 * 0.75, 1e-15);
  EXPECT_NEAR(pooled.weights.sum(), 1.0, 1e-15);
  EXPECT_EQ(pooled.betas(3, 1), 0.7);
}

TEST(PooledPosterior, SingleStepIsTheSnapshot)
{
  auto out = two_step_output();
  out.steps.resize(1);
  out.snapshots.resize(1);
  const auto pooled = pooled_posterior(out);
  EXPECT_TRUE(pooled.betas == out.snapshots[0].betas);
  EXPECT_LT((pooled.weights - out.snapshots[0].weights).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PooledPosterior, RequiresEverySnapshot)
{
  auto out = two_step_output();
  out.snapshots.pop_back();
  EXPECT_THROW(pooled_posterior(out), std::invalid_argument);
  EXPECT_THROW(summarize(out, nullptr), std::invalid_argument);
}

TEST(Kde, MatchesNaiveOracle)
{
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(300), weights(300), grid(101);
  for (std::size_t i = 0; i < 300; ++i) {
    values[i] = g(rng);
    weights[i] = i % 7 == 0 ? 0.0 : u(rng);
  }
  for (std::size_t k = 0; k < grid.size(); ++k)
    grid[k] = -4.0 + 0.08 * static_cast<double>(k);
  const double h = silverman_bandwidth(values, weights);
  const auto dens = weighted_kde(values, weights, grid);
  const auto naive = oracle::naive_kde(values, weights, grid, h);
  for (std::size_t k = 0; k < grid.size(); ++k)
    EXPECT_NEAR(dens[static_cast<Index>(k)], naive[k], 1e-10);

  // Trapezoid integral over a wide grid.
  std::vector<double> wide(2001);
  for (std::size_t k = 0; k < wide.size(); ++k)
    wide[k] = -10.0 + 0.01 * static_cast<double>(k);
  const auto wd = weighted_kde(values, weights, wide);
  double integral = 0.0;
  for (Index k = 1; k < wd.size(); ++k)
    integral += 0.005 * (wd[k] + wd[k - 1]);
  EXPECT_NEAR(integral, 1.0, 1e-6);
}

TEST(Kde, SymmetricSampleGivesSymmetricDensity)
{
  const auto values = vec({-1.0, -0.3, 0.3, 1.0});
  const auto weights = vec({1.0, 2.0, 2.0, 1.0});
  const auto grid = vec({-2.0, -0.5, 0.5, 2.0});
  const auto d = weighted_kde(values, weights, grid, 0.4);
  EXPECT_NEAR(d[0], d[3], 1e-15);
  EXPECT_NEAR(d[1], d[2], 1e-15);
}

TEST(Kde, BandwidthRules)
{
  const auto values = vec({0.0, 1.0, 2.0, 3.0});
  const auto equal = vec({1.0, 1.0, 1.0, 1.0});
  const double sd = std::sqrt(1.25); // weighted (population) sd
  EXPECT_NEAR(silverman_bandwidth(values, equal), 1.06 * sd * std::pow(4.0, -0.2), 1e-14);
  // All weight on one value: unweighted sample sd with n = 4.
  const auto spike = vec({0.0, 0.0, 1.0, 0.0});
  EXPECT_NEAR(silverman_bandwidth(values, spike), 1.06 * std::sqrt(5.0 / 3.0) * std::pow(4.0, -0.2), 1e-14);
  EXPECT_THROW(silverman_bandwidth(vec({1.0, 1.0}), vec({1.0, 1.0})), std::invalid_argument);
}

TEST(MapPath, PicksHigherPosteriorAndShrinksNoise)
{
  SimSpec spec;
  spec.n = 200;
  spec.p = 4;
  spec.block_size = 4;
  spec.seed = 3;
  const auto data = simulate_dataset(spec).data; // no signal
  SmcConfig cfg;
  cfg.particles = 64;
  cfg.burn_in = 100;
  cfg.thin = 1;
  cfg.threads = 1;
  const auto out = run_sampler(data, 4.0, Schedule(0.2, 0.5, 6), cfg);
  const auto path = map_path(out, data);
  ASSERT_EQ(path.t.size(), 6u);
  EXPECT_FALSE(path.from_previous[0]);
  for (std::size_t k = 0; k < 6; ++k) {
    const auto prior = GtPrior::from_rate(4.0, out.snapshots[k].b);
    EXPECT_NEAR(path.log_post[k], log_posterior_unnorm(data, path.beta.row(static_cast<Index>(k)).transpose(), prior),
                1e-9);
    EXPECT_TRUE(path.converged[k]);
    if (k > 0) {
      const auto prev = em_map(data, prior, path.beta.row(static_cast<Index>(k - 1)).transpose());
      EXPECT_GE(path.log_post[k], prev.log_post - 1e-12);
    }
  }
  // Strong shrinkage at the smallest scale on noise data.
  EXPECT_TRUE(path.beta.row(5).isZero(0.0));
}

TEST(Summarize, EndToEndAndRoundTrip)
{
  SimSpec spec;
  spec.n = 150;
  spec.p = 5;
  spec.block_size = 5;
  spec.nonzero = std::vector<FixedEffect>{{2, 1.0}};
  spec.seed = 4;
  const auto data = simulate_dataset(spec).data;
  SmcConfig cfg;
  cfg.particles = 100;
  cfg.burn_in = 100;
  cfg.thin = 1;
  cfg.threads = 1;
  const auto out = run_sampler(data, 4.0, Schedule(2.0, 0.8, 10), cfg);

  SummaryOptions opt;
  opt.kde_steps = 3;
  opt.kde_points = 21;
  const auto res = summarize(out, &data, opt);
  ASSERT_EQ(res.steps.size(), 10u);
  ASSERT_TRUE(res.map.has_value());
  ASSERT_EQ(res.pooled.size(), 5u);
  EXPECT_EQ(res.ranking(1).front(), 1u);
  EXPECT_DOUBLE_EQ(res.pooled[1].map, res.map->beta(static_cast<Index>(res.c_posterior.mode), 1));
  for (const auto& st : res.steps)
    for (Index j = 0; j < 5; ++j) {
      EXPECT_LE(st.lower[j], st.median[j]);
      EXPECT_LE(st.median[j], st.upper[j]);
      EXPECT_GE(st.concentration(0, j), st.concentration(1, j));
    }
  EXPECT_FALSE(res.densities.empty());
  EXPECT_NE(format_report(res).find("snp_002"), std::string::npos);

  const auto dir = fs::temp_directory_path() / "spa_unit_summary";
  fs::remove_all(dir);
  write_spa_result(res, dir);
  const auto back = read_spa_result(dir);
  EXPECT_EQ(back.names, res.names);
  EXPECT_EQ(back.deltas, res.deltas);
  ASSERT_EQ(back.steps.size(), res.steps.size());
  EXPECT_EQ(back.c_posterior.mode, res.c_posterior.mode);
  for (std::size_t k = 0; k < res.steps.size(); ++k) {
    EXPECT_TRUE(back.steps[k].median == res.steps[k].median);
    EXPECT_TRUE(back.steps[k].concentration == res.steps[k].concentration);
    EXPECT_EQ(back.c_posterior.mass[k], res.c_posterior.mass[k]);
  }
  ASSERT_TRUE(back.map.has_value());
  EXPECT_TRUE(back.map->beta == res.map->beta);
  ASSERT_EQ(back.densities.size(), res.densities.size());
  EXPECT_EQ(back.densities[0].density, res.densities[0].density);
  EXPECT_EQ(back.pooled[1].concentration, res.pooled[1].concentration);
  EXPECT_EQ(back.ranking(1), res.ranking(1));
}

TEST(Summarize, WithoutMapPath)
{
  auto out = two_step_output();
  SummaryOptions opt;
  opt.compute_map = false;
  opt.kde_points = 11;
  const auto res = summarize(out, nullptr, opt);
  EXPECT_FALSE(res.map.has_value());
  EXPECT_TRUE(std::isnan(res.pooled[0].map));
  opt.compute_map = true;
  EXPECT_THROW(summarize(out, nullptr, opt), std::invalid_argument);
  opt.deltas = {};
  EXPECT_THROW(validate(opt), std::invalid_argument);
}

TEST(SummaryIo, LabelsAndRankingDelta)
{
  EXPECT_EQ(concentration_label(0.1), "V_0.1");
  EXPECT_EQ(concentration_label(0.05), "V_0.05");
  EXPECT_EQ(ranking_delta_index({0.05, 0.1}), 1u);
  EXPECT_EQ(ranking_delta_index({0.05, 0.2, 0.01}), 1u);
}
