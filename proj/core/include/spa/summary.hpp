#pragma once

#include "spa/dataset.hpp"
#include "spa/em_map.hpp"
#include "spa/smc.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spa {

/// Weighted empirical distribution of one coefficient, sorted once so that
/// several quantiles can be read off cheaply.
class WeightedSample
{
public:
  /// Weights need not be normalized but must be >= 0 with a positive sum.
  WeightedSample(std::span<const double> values, std::span<const double> weights);

  /// Smallest value v with F(v) >= q (left-continuous inverse, no
  /// interpolation). Requires 0 < q < 1.
  double quantile(double q) const;

  /// Weighted fraction of samples <= x.
  double cdf(double x) const;

  double mean() const noexcept { return mean_; }

private:
  std::vector<double> sorted_;
  std::vector<double> cumulative_;
  double mean_ = 0.0;
};

double weighted_quantile(std::span<const double> values, std::span<const double> weights, double q);

/// 1 - weighted fraction of samples strictly inside (-delta, delta).
double concentration(std::span<const double> values, std::span<const double> weights, double delta);

/// |weighted median| per step (rows, in snapshot order) and coefficient.
Eigen::MatrixXd abs_median_path(const SmcOutput& output);

struct CPosterior
{
  std::vector<std::size_t> t;
  std::vector<double> c;
  std::vector<double> mass; // sums to 1
  std::size_t mode = 0;     // index into the vectors above

  double mode_c() const { return c.at(mode); }
};

/// Posterior over the grid c_t = b_t / a under a flat prior on log b, so
/// mass_t is proportional to Z_t / Z_1.
CPosterior c_posterior(const SmcOutput& output);

/// All snapshot particles pooled with weights (Z_t/Z_1 normalized over t)
/// times W_t^i, which marginalizes the scale.
struct PooledPosterior
{
  Eigen::MatrixXd betas;
  Eigen::VectorXd weights;
};

PooledPosterior pooled_posterior(const SmcOutput& output);

struct MapPath
{
  std::vector<std::size_t> t;
  Eigen::MatrixXd beta;              // steps x coefficients
  std::vector<double> log_post;
  std::vector<bool> converged;
  std::vector<bool> from_previous;   // chosen estimate was seeded at the previous MAP
};

/// For every snapshot step, EM from the highest-density particle and EM from
/// the previous step's MAP; the one with higher posterior density wins, ties
/// going to the previous-MAP seed.
MapPath map_path(const SmcOutput& output, const Dataset& data, const EmOptions& options = {}, unsigned threads = 0);

/// 1.06 * weighted sd * ESS^(-1/5). Falls back to the unweighted spread when
/// all weight sits on one value; throws if every sample is identical.
double silverman_bandwidth(std::span<const double> values, std::span<const double> weights);

/// Weighted Gaussian kernel density on `grid`. A non-positive or NaN
/// bandwidth selects silverman_bandwidth().
Eigen::VectorXd weighted_kde(std::span<const double> values,
                             std::span<const double> weights,
                             std::span<const double> grid,
                             double bandwidth = 0.0);

struct SummaryOptions
{
  std::vector<double> deltas = {0.05, 0.1};
  double level = 0.9;            // central credible interval
  std::size_t kde_points = 201;
  std::size_t kde_steps = 8;     // density curves per coefficient, plus the mode step
  bool compute_map = true;
  EmOptions em{};
  unsigned threads = 0;
};

void validate(const SummaryOptions& options);

struct StepSummary
{
  std::size_t t = 1;
  double b = 0.0;
  double c = 0.0;
  double log_z_ratio = 0.0;
  Eigen::VectorXd mean;
  Eigen::VectorXd median;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::MatrixXd concentration; // deltas x coefficients
};

struct PooledCoefficient
{
  double map = 0.0;    // MAP path value at the posterior mode of c (NaN without MAP path)
  double median = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> concentration; // one per delta
};

struct DensityCurve
{
  std::size_t coefficient = 0;
  std::size_t t = 1;
  double c = 0.0;
  std::vector<double> x;
  std::vector<double> density;
};

struct SpaResult
{
  std::vector<std::string> names;
  std::vector<double> deltas;
  double level = 0.9;
  std::vector<StepSummary> steps;
  std::optional<MapPath> map;
  CPosterior c_posterior;
  std::vector<PooledCoefficient> pooled;
  std::vector<DensityCurve> densities;

  /// Coefficient indices sorted by decreasing pooled concentration for
  /// deltas[delta_index].
  std::vector<std::size_t> ranking(std::size_t delta_index) const;
};

/// Every path statistic. Requires a snapshot at every step; `data` is only
/// needed when options.compute_map is set.
SpaResult summarize(const SmcOutput& output, const Dataset* data, const SummaryOptions& options = {});

} // namespace spa
