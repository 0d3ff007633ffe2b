#include "spa/summary.hpp"

#include "spa/likelihood.hpp"
#include "spa/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spa {

namespace {

constexpr double kCumulativeSlack = 1e-12;

std::span<const double> column(const Eigen::MatrixXd& m, Index j)
{
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

std::span<const double> as_span(const Eigen::VectorXd& v)
{
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void require_all_snapshots(const SmcOutput& output)
{
  if (output.steps.empty())
    throw std::invalid_argument("sampler output has no steps");
  if (!output.has_all_snapshots())
    throw std::invalid_argument("sampler output is missing particle snapshots for some steps; "
                                "rerun the sampler without snapshot thinning");
}

} // namespace

WeightedSample::WeightedSample(std::span<const double> values, std::span<const double> weights)
{
  if (values.size() != weights.size() || values.empty())
    throw std::invalid_argument("weighted sample needs matching, non-empty values and weights");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return values[l] < values[r]; });

  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0))
      throw std::invalid_argument("weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0))
    throw std::invalid_argument("weights must have a positive sum");

  sorted_.reserve(values.size());
  cumulative_.reserve(values.size());
  double run = 0.0;
  double weighted = 0.0;
  for (auto i : order) {
    sorted_.push_back(values[i]);
    run += weights[i];
    cumulative_.push_back(run / total);
    weighted += weights[i] * values[i];
  }
  mean_ = weighted / total;
}

double WeightedSample::quantile(double q) const
{
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("quantile level must lie in (0, 1)");
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), q - kCumulativeSlack);
  if (it == cumulative_.end())
    return sorted_.back();
  return sorted_[static_cast<std::size_t>(it - cumulative_.begin())];
}

double WeightedSample::cdf(double x) const
{
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  if (it == sorted_.begin())
    return 0.0;
  return cumulative_[static_cast<std::size_t>(it - sorted_.begin()) - 1];
}

double weighted_quantile(std::span<const double> values, std::span<const double> weights, double q)
{
  return WeightedSample(values, weights).quantile(q);
}

double concentration(std::span<const double> values, std::span<const double> weights, double delta)
{
  if (!(delta > 0.0))
    throw std::invalid_argument("concentration needs delta > 0");
  if (values.size() != weights.size())
    throw std::invalid_argument("concentration needs matching values and weights");
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    total += weights[i];
    if (std::abs(values[i]) < delta)
      inside += weights[i];
  }
  return 1.0 - inside / total;
}

Eigen::MatrixXd abs_median_path(const SmcOutput& output)
{
  const auto rows = static_cast<Index>(output.snapshots.size());
  const Index p = rows ? output.snapshots.front().betas.cols() : 0;
  Eigen::MatrixXd z(rows, p);
  for (Index k = 0; k < rows; ++k) {
    const auto& snap = output.snapshots[static_cast<std::size_t>(k)];
    for (Index j = 0; j < p; ++j)
      z(k, j) = std::abs(weighted_quantile(column(snap.betas, j), as_span(snap.weights), 0.5));
  }
  return z;
}

CPosterior c_posterior(const SmcOutput& output)
{
  if (output.steps.empty())
    throw std::invalid_argument("c posterior needs at least one step");
  if (!(output.a > 0.0))
    throw std::invalid_argument("c posterior needs the prior degrees of freedom a > 0");
  CPosterior post;
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& s : output.steps)
    peak = std::max(peak, s.log_z_ratio);
  double total = 0.0;
  for (const auto& s : output.steps) {
    post.t.push_back(s.t);
    post.c.push_back(s.b / output.a);
    post.mass.push_back(std::exp(s.log_z_ratio - peak));
    total += post.mass.back();
  }
  for (auto& m : post.mass)
    m /= total;
  post.mode = static_cast<std::size_t>(std::max_element(post.mass.begin(), post.mass.end()) - post.mass.begin());
  return post;
}

PooledPosterior pooled_posterior(const SmcOutput& output)
{
  require_all_snapshots(output);
  const auto cpost = c_posterior(output);
  Index total = 0;
  for (const auto& s : output.snapshots)
    total += s.betas.rows();
  const Index p = output.snapshots.front().betas.cols();

  PooledPosterior pooled;
  pooled.betas.resize(total, p);
  pooled.weights.resize(total);
  Index row = 0;
  for (std::size_t k = 0; k < output.snapshots.size(); ++k) {
    const auto& snap = output.snapshots[k];
    const Index N = snap.betas.rows();
    pooled.betas.middleRows(row, N) = snap.betas;
    pooled.weights.segment(row, N) = cpost.mass[k] * snap.weights;
    row += N;
  }
  pooled.weights /= pooled.weights.sum();
  return pooled;
}

MapPath map_path(const SmcOutput& output, const Dataset& data, const EmOptions& options, unsigned threads)
{
  if (output.snapshots.empty())
    throw std::invalid_argument("MAP path needs particle snapshots");
  if (output.snapshots.front().betas.cols() != data.p())
    throw std::invalid_argument("MAP path: dataset columns do not match the sampler output");

  const std::size_t K = output.snapshots.size();
  std::vector<EmResult> from_best(K);
  parallel_for(K, threads, [&](std::size_t k) {
    const auto& snap = output.snapshots[k];
    const auto prior = GtPrior::from_rate(output.a, snap.b);
    Index best = 0;
    double best_lp = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < snap.betas.rows(); ++i) {
      const Eigen::VectorXd beta = snap.betas.row(i).transpose();
      const double lp = log_posterior_unnorm(data, beta, prior);
      if (lp > best_lp) {
        best_lp = lp;
        best = i;
      }
    }
    from_best[k] = em_map(data, prior, snap.betas.row(best).transpose(), options);
  });

  MapPath path;
  path.beta.resize(static_cast<Index>(K), data.p());
  for (std::size_t k = 0; k < K; ++k) {
    const auto& snap = output.snapshots[k];
    const EmResult* chosen = &from_best[k];
    bool previous = false;
    EmResult from_prev;
    if (k > 0) {
      const auto prior = GtPrior::from_rate(output.a, snap.b);
      from_prev = em_map(data, prior, path.beta.row(static_cast<Index>(k - 1)).transpose(), options);
      if (from_prev.log_post >= from_best[k].log_post) {
        chosen = &from_prev;
        previous = true;
      }
    }
    path.t.push_back(snap.t);
    path.beta.row(static_cast<Index>(k)) = chosen->beta.transpose();
    path.log_post.push_back(chosen->log_post);
    path.converged.push_back(chosen->converged && chosen->inner_converged);
    path.from_previous.push_back(previous);
  }
  return path;
}

double silverman_bandwidth(std::span<const double> values, std::span<const double> weights)
{
  if (values.size() != weights.size() || values.size() < 2)
    throw std::invalid_argument("bandwidth selection needs at least two samples");
  double total = 0.0;
  double sq = 0.0;
  for (double w : weights) {
    total += w;
    sq += w * w;
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    mean += weights[i] * values[i];
  mean /= total;
  double var = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    var += weights[i] * (values[i] - mean) * (values[i] - mean);
  var /= total;
  double n_eff = total * total / sq;

  if (!(var > 0.0)) {
    const double n = static_cast<double>(values.size());
    const double umean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    var = 0.0;
    for (double v : values)
      var += (v - umean) * (v - umean);
    var /= (n - 1.0);
    n_eff = n;
  }
  if (!(var > 0.0))
    throw std::invalid_argument("kernel density needs at least two distinct samples");
  return 1.06 * std::sqrt(var) * std::pow(n_eff, -0.2);
}

Eigen::VectorXd weighted_kde(std::span<const double> values,
                             std::span<const double> weights,
                             std::span<const double> grid,
                             double bandwidth)
{
  if (!(bandwidth > 0.0))
    bandwidth = silverman_bandwidth(values, weights);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * bandwidth * total);
  Eigen::VectorXd density = Eigen::VectorXd::Zero(static_cast<Index>(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (weights[i] == 0.0)
        continue;
      const double z = (grid[g] - values[i]) / bandwidth;
      acc += weights[i] * std::exp(-0.5 * z * z);
    }
    density[static_cast<Index>(g)] = acc * norm;
  }
  return density;
}

void validate(const SummaryOptions& options)
{
  if (options.deltas.empty())
    throw std::invalid_argument("need at least one concentration delta");
  for (double d : options.deltas)
    if (!(d > 0.0))
      throw std::invalid_argument("concentration deltas must be > 0");
  if (!(options.level > 0.0 && options.level < 1.0))
    throw std::invalid_argument("credible level must lie in (0, 1)");
  if (options.kde_points < 2)
    throw std::invalid_argument("density grid needs at least 2 points");
}

std::vector<std::size_t> SpaResult::ranking(std::size_t delta_index) const
{
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) {
    return pooled[l].concentration.at(delta_index) > pooled[r].concentration.at(delta_index);
  });
  return order;
}

SpaResult summarize(const SmcOutput& output, const Dataset* data, const SummaryOptions& options)
{
  validate(options);
  require_all_snapshots(output);
  if (options.compute_map && data == nullptr)
    throw std::invalid_argument("MAP path requested without a dataset");

  const std::size_t K = output.snapshots.size();
  const Index p = output.snapshots.front().betas.cols();
  const auto D = static_cast<Index>(options.deltas.size());
  const double q_lo = 0.5 * (1.0 - options.level);
  const double q_hi = 0.5 * (1.0 + options.level);

  SpaResult result;
  result.names = output.names;
  result.deltas = options.deltas;
  result.level = options.level;
  result.steps.resize(K);

  parallel_for(K, options.threads, [&](std::size_t k) {
    const auto& snap = output.snapshots[k];
    auto& s = result.steps[k];
    s.t = snap.t;
    s.b = snap.b;
    s.c = snap.b / output.a;
    s.log_z_ratio = output.steps[k].log_z_ratio;
    s.mean.resize(p);
    s.median.resize(p);
    s.lower.resize(p);
    s.upper.resize(p);
    s.concentration.resize(D, p);
    for (Index j = 0; j < p; ++j) {
      const auto values = column(snap.betas, j);
      const WeightedSample sample(values, as_span(snap.weights));
      s.mean[j] = sample.mean();
      s.median[j] = sample.quantile(0.5);
      s.lower[j] = sample.quantile(q_lo);
      s.upper[j] = sample.quantile(q_hi);
      for (Index d = 0; d < D; ++d)
        s.concentration(d, j) = concentration(values, as_span(snap.weights), options.deltas[static_cast<std::size_t>(d)]);
    }
  });

  result.c_posterior = c_posterior(output);
  if (options.compute_map)
    result.map = map_path(output, *data, options.em, options.threads);

  const auto pooled = pooled_posterior(output);
  result.pooled.resize(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) {
    const auto values = column(pooled.betas, j);
    const WeightedSample sample(values, as_span(pooled.weights));
    auto& pc = result.pooled[static_cast<std::size_t>(j)];
    pc.median = sample.quantile(0.5);
    pc.lower = sample.quantile(q_lo);
    pc.upper = sample.quantile(q_hi);
    pc.map = result.map ? result.map->beta(static_cast<Index>(result.c_posterior.mode), j)
                        : std::numeric_limits<double>::quiet_NaN();
    for (double delta : options.deltas)
      pc.concentration.push_back(concentration(values, as_span(pooled.weights), delta));
  }

  // Density curves at evenly spaced steps plus the mode of c.
  std::vector<std::size_t> picks;
  const std::size_t wanted = std::min(options.kde_steps, K);
  for (std::size_t m = 0; m < wanted; ++m)
    picks.push_back(wanted > 1 ? m * (K - 1) / (wanted - 1) : 0);
  picks.push_back(result.c_posterior.mode);
  std::sort(picks.begin(), picks.end());
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());

  for (Index j = 0; j < p; ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (auto k : picks) {
      lo = std::min(lo, output.snapshots[k].betas.col(j).minCoeff());
      hi = std::max(hi, output.snapshots[k].betas.col(j).maxCoeff());
    }
    const double pad = std::max(0.1 * (hi - lo), 1e-3);
    std::vector<double> grid(options.kde_points);
    for (std::size_t g = 0; g < grid.size(); ++g)
      grid[g] = (lo - pad) + (hi - lo + 2.0 * pad) * static_cast<double>(g) / static_cast<double>(grid.size() - 1);

    for (auto k : picks) {
      const auto& snap = output.snapshots[k];
      DensityCurve curve;
      curve.coefficient = static_cast<std::size_t>(j);
      curve.t = snap.t;
      curve.c = snap.b / output.a;
      curve.x = grid;
      try {
        const auto dens = weighted_kde(column(snap.betas, j), as_span(snap.weights), grid);
        curve.density.assign(dens.data(), dens.data() + dens.size());
      } catch (const std::invalid_argument&) {
        continue; // every particle identical for this coefficient
      }
      result.densities.push_back(std::move(curve));
    }
  }
  return result;
}

} // namespace spa
