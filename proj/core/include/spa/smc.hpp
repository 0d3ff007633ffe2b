#pragma once

#include "spa/dataset.hpp"
#include "spa/likelihood.hpp"
#include "spa/prior.hpp"
#include "spa/rng.hpp"
#include "spa/schedule.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace spa {

struct SmcConfig
{
  std::size_t particles = 8192;
  int cycles = 5;              // Metropolis-within-Gibbs sweeps per step
  double step_sd = 0.5;        // random-walk proposal sd
  double ess_threshold_frac = 0.75;
  std::uint64_t seed = 1;
  int burn_in = 2000;          // initial chain sweeps discarded
  int thin = 5;                // initial chain sweeps between kept particles
  unsigned threads = 0;        // 0: hardware concurrency
  std::size_t snapshot_every = 1; // keep full particle sets every k-th step
  bool retain_snapshots = true;   // false: snapshots only reach the observer
};

/// Whether step t of a T-step run keeps a full particle snapshot.
bool keeps_snapshot(std::size_t t, std::size_t T, std::size_t every);

void validate(const SmcConfig& config);

struct Particle
{
  Eigen::VectorXd beta;
  LinearPredictorCache cache;
};

/// Weighted particle approximation of the posterior at rate b (step t).
struct ParticleSystem
{
  std::vector<Particle> particles;
  Eigen::VectorXd weights;     // normalized
  Eigen::VectorXd log_weights; // log of `weights`
  double log_z_ratio = 0.0;    // running log(Z_t / Z_1)
  std::size_t t = 1;
  double b = 0.0;

  std::size_t size() const noexcept { return particles.size(); }
};

/// min(1, exp(log_ratio)).
double mh_accept_probability(double log_ratio);

/// One Metropolis-within-Gibbs pass over coordinates 0..p-1 with Normal
/// random-walk proposals; leaves the posterior under `prior` invariant.
/// Returns the number of accepted proposals.
int mwg_sweep(Particle& particle, const Dataset& data, const GtPrior& prior, double step_sd, Engine& rng);

/// log gamma_t(beta) - log gamma_{t-1}(beta); only the prior terms survive.
double incremental_log_weight(const Dataset& data,
                              const Eigen::Ref<const Eigen::VectorXd>& beta,
                              const GtPrior& prior_t,
                              const GtPrior& prior_prev);

struct ReweightResult
{
  Eigen::VectorXd log_increments;
  double log_z_increment = 0.0; // log of sum_i W_{t-1}^i w_t^i
};

/// Moves the weights from the target under prior_prev to the one under
/// prior_t and accumulates log(Z_t / Z_{t-1}) into system.log_z_ratio.
/// Throws DegeneracyError when every incremental weight is zero.
ReweightResult reweight(ParticleSystem& system,
                        const Dataset& data,
                        const GtPrior& prior_t,
                        const GtPrior& prior_prev);

/// 1 / sum_i W_i^2 for normalized weights.
double ess(const Eigen::Ref<const Eigen::VectorXd>& weights);

/// Ancestor indices for positions u + k/N, k = 0..N-1, with u in [0, 1/N).
std::vector<std::size_t> systematic_resample_indices(const Eigen::Ref<const Eigen::VectorXd>& weights, double u);

/// Resamples in place and resets the weights to 1/N.
void systematic_resample(ParticleSystem& system, Engine& rng);

struct InitDiagnostics
{
  double acceptance_rate = 0.0;
};

/// Equally weighted particles from a thinned Metropolis-within-Gibbs chain
/// targeting the posterior under `prior`, started at beta = 0.
ParticleSystem init_particles(const Dataset& data,
                              const GtPrior& prior,
                              const SmcConfig& config,
                              InitDiagnostics* diagnostics = nullptr);

struct StepRecord
{
  std::size_t t = 1;
  double b = 0.0;
  double ess = 0.0;           // after reweighting, before resampling
  double log_z_ratio = 0.0;   // log(Z_t / Z_1)
  double acceptance_rate = 0.0;
  bool resampled = false;
};

/// Reweight to rate b_t, accumulate the evidence ratio, resample when the
/// ESS falls below the threshold, then apply `cycles` sweeps per particle.
StepRecord smc_step(ParticleSystem& system, const Dataset& data, double a, double b_t, const SmcConfig& config);

struct Snapshot
{
  std::size_t t = 1;
  double b = 0.0;
  Eigen::VectorXd weights;
  Eigen::MatrixXd betas; // particles x coefficients
};

struct SmcOutput
{
  double a = 0.0;
  std::vector<std::string> names;
  std::vector<StepRecord> steps;
  std::vector<Snapshot> snapshots;

  /// Snapshot for step t, or nullptr when it was thinned away.
  const Snapshot* snapshot_at(std::size_t t) const;
  bool has_all_snapshots() const;
};

Snapshot take_snapshot(const ParticleSystem& system);

/// Called after initialization and after every step.
using StepObserver = std::function<void(const StepRecord&, const ParticleSystem&)>;

/// Full sweep over the schedule. Snapshots are kept at steps 1, 1+k, 1+2k, ...
/// and at the final step.
SmcOutput run_sampler(const Dataset& data,
                      double a,
                      const Schedule& schedule,
                      const SmcConfig& config,
                      const StepObserver& observer = {});

struct McmcOptions
{
  int iterations = 100000; // sweeps after burn-in
  int burn_in = 2000;
  int thin = 1;
  double step_sd = 0.5;
  std::uint64_t seed = 1;
};

struct McmcSamples
{
  Eigen::MatrixXd samples; // kept draws x coefficients
  double acceptance_rate = 0.0;
};

/// Plain Metropolis-within-Gibbs chain at a fixed prior, used to validate
/// the sampler at one rate.
McmcSamples fixed_b_mcmc(const Dataset& data, const GtPrior& prior, const McmcOptions& options);

} // namespace spa
