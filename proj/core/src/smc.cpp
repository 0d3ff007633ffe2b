#include "spa/smc.hpp"

#include "spa/error.hpp"
#include "spa/parallel.hpp"
#include "spa/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spa {

void validate(const SmcConfig& config)
{
  if (config.particles < 2)
    throw std::invalid_argument("SMC needs at least 2 particles");
  if (config.cycles < 1)
    throw std::invalid_argument("SMC needs at least one kernel cycle per step");
  if (!(config.step_sd > 0.0))
    throw std::invalid_argument("proposal sd must be > 0");
  if (!(config.ess_threshold_frac > 0.0 && config.ess_threshold_frac <= 1.0))
    throw std::invalid_argument("ESS threshold fraction must lie in (0, 1]");
  if (config.burn_in < 0 || config.thin < 1)
    throw std::invalid_argument("initial chain needs burn_in >= 0 and thin >= 1");
  if (config.snapshot_every < 1)
    throw std::invalid_argument("snapshot interval must be >= 1");
}

bool keeps_snapshot(std::size_t t, std::size_t T, std::size_t every)
{
  return every > 0 && ((t - 1) % every == 0 || t == T);
}

double mh_accept_probability(double log_ratio)
{
  if (std::isnan(log_ratio))
    return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

int mwg_sweep(Particle& particle, const Dataset& data, const GtPrior& prior, double step_sd, Engine& rng)
{
  std::normal_distribution<double> proposal(0.0, step_sd);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int accepted = 0;
  for (Index j = 0; j < data.p(); ++j) {
    const double delta = proposal(rng);
    const double old_bj = particle.beta[j];
    const double new_bj = old_bj + delta;
    const double new_loglik = log_likelihood_after_delta(particle.cache, data, j, delta);
    double log_ratio = new_loglik - particle.cache.loglik;
    if (data.penalized(j))
      log_ratio += gt_log_density(new_bj, prior) - gt_log_density(old_bj, prior);
    if (unif(rng) < mh_accept_probability(log_ratio)) {
      commit_delta(particle.cache, data, j, delta, new_loglik);
      particle.beta[j] = new_bj;
      ++accepted;
    }
  }
  return accepted;
}

double incremental_log_weight(const Dataset& data,
                              const Eigen::Ref<const Eigen::VectorXd>& beta,
                              const GtPrior& prior_t,
                              const GtPrior& prior_prev)
{
  double lw = 0.0;
  for (Index j = data.first_penalized(); j < beta.size(); ++j)
    lw += gt_log_density(beta[j], prior_t) - gt_log_density(beta[j], prior_prev);
  return lw;
}

ReweightResult reweight(ParticleSystem& system, const Dataset& data, const GtPrior& prior_t, const GtPrior& prior_prev)
{
  if (prior_t.a() != prior_prev.a())
    throw std::invalid_argument("reweight: consecutive priors must share a");
  const auto N = static_cast<Index>(system.size());
  ReweightResult result;
  result.log_increments.resize(N);
  Eigen::VectorXd next(N);
  for (Index i = 0; i < N; ++i) {
    result.log_increments[i] =
      incremental_log_weight(data, system.particles[static_cast<std::size_t>(i)].beta, prior_t, prior_prev);
    next[i] = system.log_weights[i] + result.log_increments[i];
  }
  const double lse = log_sum_exp(next.data(), static_cast<std::size_t>(N));
  if (!std::isfinite(lse))
    throw DegeneracyError(system.t + 1, "all incremental weights vanished at step "
                                          + std::to_string(system.t + 1));
  system.log_weights = next.array() - lse;
  system.weights = system.log_weights.array().exp();
  system.weights /= system.weights.sum();
  system.log_z_ratio += lse;
  result.log_z_increment = lse;
  return result;
}

double ess(const Eigen::Ref<const Eigen::VectorXd>& weights)
{
  return 1.0 / weights.squaredNorm();
}

std::vector<std::size_t> systematic_resample_indices(const Eigen::Ref<const Eigen::VectorXd>& weights, double u)
{
  const auto N = static_cast<std::size_t>(weights.size());
  if (N == 0)
    return {};
  const double step = 1.0 / static_cast<double>(N);
  if (!(u >= 0.0 && u < step))
    throw std::invalid_argument("systematic resampling offset must lie in [0, 1/N)");

  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < N; ++i)
    if (weights[static_cast<Index>(i)] > 0.0)
      last_positive = i;

  std::vector<std::size_t> idx(N);
  std::size_t i = 0;
  double cum = weights[0];
  for (std::size_t k = 0; k < N; ++k) {
    const double pos = u + static_cast<double>(k) * step;
    while (pos >= cum && i < last_positive) {
      ++i;
      cum += weights[static_cast<Index>(i)];
    }
    idx[k] = i;
  }
  return idx;
}

void systematic_resample(ParticleSystem& system, Engine& rng)
{
  const std::size_t N = system.size();
  std::uniform_real_distribution<double> unif(0.0, 1.0 / static_cast<double>(N));
  double u = unif(rng);
  if (u >= 1.0 / static_cast<double>(N))
    u = 0.0;
  const auto idx = systematic_resample_indices(system.weights, u);
  std::vector<Particle> next;
  next.reserve(N);
  for (auto k : idx)
    next.push_back(system.particles[k]);
  system.particles = std::move(next);
  system.weights.setConstant(static_cast<Index>(N), 1.0 / static_cast<double>(N));
  system.log_weights.setConstant(static_cast<Index>(N), -std::log(static_cast<double>(N)));
}

ParticleSystem init_particles(const Dataset& data, const GtPrior& prior, const SmcConfig& config, InitDiagnostics* diagnostics)
{
  validate(config);
  auto rng = stream_engine(config.seed, Stream::init_chain);

  Particle state;
  state.beta = Eigen::VectorXd::Zero(data.p());
  state.cache = log_likelihood(data, state.beta);

  long long accepted = 0;
  long long proposed = 0;
  for (int s = 0; s < config.burn_in; ++s) {
    accepted += mwg_sweep(state, data, prior, config.step_sd, rng);
    proposed += data.p();
  }

  const std::size_t N = config.particles;
  ParticleSystem system;
  system.particles.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    for (int s = 0; s < config.thin; ++s) {
      accepted += mwg_sweep(state, data, prior, config.step_sd, rng);
      proposed += data.p();
    }
    system.particles.push_back(state);
  }
  system.weights = Eigen::VectorXd::Constant(static_cast<Index>(N), 1.0 / static_cast<double>(N));
  system.log_weights = Eigen::VectorXd::Constant(static_cast<Index>(N), -std::log(static_cast<double>(N)));
  system.t = 1;
  system.b = prior.b();
  system.log_z_ratio = 0.0;
  if (diagnostics)
    diagnostics->acceptance_rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  return system;
}

StepRecord smc_step(ParticleSystem& system, const Dataset& data, double a, double b_t, const SmcConfig& config)
{
  const std::size_t t = system.t + 1;
  const auto prior_prev = GtPrior::from_rate(a, system.b);
  const auto prior_t = GtPrior::from_rate(a, b_t);

  StepRecord rec;
  rec.t = t;
  rec.b = b_t;

  reweight(system, data, prior_t, prior_prev);
  rec.ess = ess(system.weights);
  rec.log_z_ratio = system.log_z_ratio;

  const double N = static_cast<double>(system.size());
  if (rec.ess < config.ess_threshold_frac * N) {
    auto rng = stream_engine(config.seed, Stream::resampling, t);
    systematic_resample(system, rng);
    rec.resampled = true;
  }

  std::vector<long long> accepted(system.size(), 0);
  parallel_for(system.size(), config.threads, [&](std::size_t i) {
    auto rng = stream_engine(config.seed, Stream::moves, t, i);
    for (int c = 0; c < config.cycles; ++c)
      accepted[i] += mwg_sweep(system.particles[i], data, prior_t, config.step_sd, rng);
  });
  long long total = 0;
  for (auto v : accepted)
    total += v;
  const double proposals = N * static_cast<double>(config.cycles) * static_cast<double>(data.p());
  rec.acceptance_rate = proposals > 0 ? static_cast<double>(total) / proposals : 0.0;

  system.t = t;
  system.b = b_t;
  return rec;
}

Snapshot take_snapshot(const ParticleSystem& system)
{
  Snapshot snap;
  snap.t = system.t;
  snap.b = system.b;
  snap.weights = system.weights;
  const auto N = static_cast<Index>(system.size());
  const Index p = N ? system.particles.front().beta.size() : 0;
  snap.betas.resize(N, p);
  for (Index i = 0; i < N; ++i)
    snap.betas.row(i) = system.particles[static_cast<std::size_t>(i)].beta.transpose();
  return snap;
}

const Snapshot* SmcOutput::snapshot_at(std::size_t t) const
{
  for (const auto& s : snapshots)
    if (s.t == t)
      return &s;
  return nullptr;
}

bool SmcOutput::has_all_snapshots() const
{
  if (snapshots.size() != steps.size())
    return false;
  for (std::size_t k = 0; k < steps.size(); ++k)
    if (snapshots[k].t != steps[k].t)
      return false;
  return true;
}

SmcOutput run_sampler(const Dataset& data,
                      double a,
                      const Schedule& schedule,
                      const SmcConfig& config,
                      const StepObserver& observer)
{
  validate(config);
  SmcOutput out;
  out.a = a;
  out.names = data.names;

  const std::size_t T = schedule.size();
  auto keep = [&](std::size_t t) {
    return config.retain_snapshots && keeps_snapshot(t, T, config.snapshot_every);
  };

  InitDiagnostics diag;
  auto system = init_particles(data, GtPrior::from_rate(a, schedule.at(1)), config, &diag);
  StepRecord first;
  first.t = 1;
  first.b = schedule.at(1);
  first.ess = ess(system.weights);
  first.log_z_ratio = 0.0;
  first.acceptance_rate = diag.acceptance_rate;
  out.steps.push_back(first);
  if (keep(1))
    out.snapshots.push_back(take_snapshot(system));
  if (observer)
    observer(first, system);

  for (std::size_t t = 2; t <= T; ++t) {
    auto rec = smc_step(system, data, a, schedule.at(t), config);
    out.steps.push_back(rec);
    if (keep(t))
      out.snapshots.push_back(take_snapshot(system));
    if (observer)
      observer(rec, system);
  }
  return out;
}

McmcSamples fixed_b_mcmc(const Dataset& data, const GtPrior& prior, const McmcOptions& options)
{
  if (options.iterations < 1 || options.burn_in < 0 || options.thin < 1)
    throw std::invalid_argument("fixed-b MCMC needs iterations >= 1, burn_in >= 0, thin >= 1");
  if (!(options.step_sd > 0.0))
    throw std::invalid_argument("proposal sd must be > 0");

  auto rng = stream_engine(options.seed, Stream::fixed_chain);
  Particle state;
  state.beta = Eigen::VectorXd::Zero(data.p());
  state.cache = log_likelihood(data, state.beta);

  long long accepted = 0;
  for (int s = 0; s < options.burn_in; ++s)
    accepted += mwg_sweep(state, data, prior, options.step_sd, rng);

  McmcSamples out;
  out.samples.resize(options.iterations / options.thin, data.p());
  Index kept = 0;
  for (int s = 1; s <= options.iterations; ++s) {
    accepted += mwg_sweep(state, data, prior, options.step_sd, rng);
    if (s % options.thin == 0 && kept < out.samples.rows())
      out.samples.row(kept++) = state.beta.transpose();
  }
  const double proposals =
    static_cast<double>(options.burn_in + options.iterations) * static_cast<double>(data.p());
  out.acceptance_rate = proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0;
  return out;
}

} // namespace spa
