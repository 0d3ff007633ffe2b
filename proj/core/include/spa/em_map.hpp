#pragma once

#include "spa/dataset.hpp"
#include "spa/prior.hpp"

#include <Eigen/Dense>

#include <vector>

namespace spa {

/// Expected inverse Laplace scale under the conditional posterior of tau_j:
/// w_j = (a + 1) / (a c + |beta_j|). Unpenalized coordinates get weight 0.
Eigen::VectorXd em_weights(const Dataset& data, const Eigen::VectorXd& beta, const GtPrior& prior);

/// Per-coordinate priors; `priors` has one entry per column of `data`
/// (entries for unpenalized columns are ignored).
Eigen::VectorXd em_weights(const Dataset& data,
                           const Eigen::VectorXd& beta,
                           const std::vector<GtPrior>& priors);

struct L1SolverOptions
{
  double tol = 1e-8;            // KKT residual
  int max_sweeps = 10000;
};

struct L1Solution
{
  Eigen::VectorXd beta;
  bool converged = false;
  int sweeps = 0;
  double kkt_residual = 0.0;
};

/// Maximizes log f(y | X, beta) - sum_j w_j |beta_j| by cyclic coordinate
/// descent on the quadratic majorizer with curvature sum_i X_ij^2 / 4.
/// Each coordinate step is a soft-threshold, so zeros are exact.
L1Solution weighted_l1_logistic(const Dataset& data,
                                const Eigen::VectorXd& weights,
                                const Eigen::VectorXd& beta_init,
                                const L1SolverOptions& options = {});

/// Largest subgradient optimality violation of `beta` for the weighted-L1
/// problem.
double kkt_residual(const Dataset& data, const Eigen::VectorXd& weights, const Eigen::VectorXd& beta);

struct EmOptions
{
  double tol = 1e-6; // max |beta change| between outer iterations
  int max_iter = 500;
  L1SolverOptions inner{};
};

struct EmState
{
  Eigen::VectorXd beta;
  Eigen::VectorXd weights; // weights used to produce `beta`; empty at iter 0
  double log_post = 0.0;
  int iter = 0;
};

struct EmResult
{
  Eigen::VectorXd beta;
  double log_post = 0.0;
  std::vector<EmState> trace;
  bool converged = false;
  bool inner_converged = true; // every inner solve met its tolerance
};

/// Local posterior mode under Gt priors, reached by alternating em_weights()
/// and weighted_l1_logistic() from `beta_init`.
EmResult em_map(const Dataset& data,
                const GtPrior& prior,
                const Eigen::VectorXd& beta_init,
                const EmOptions& options = {});

EmResult em_map(const Dataset& data,
                const std::vector<GtPrior>& priors,
                const Eigen::VectorXd& beta_init,
                const EmOptions& options = {});

} // namespace spa
