#pragma once

#include "spa/dataset.hpp"
#include "spa/prior.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace spa {

/// Linear predictor eta = X beta together with the log-likelihood it implies.
/// Owned by a single particle; single-coordinate edits keep it in sync in O(n).
struct LinearPredictorCache
{
  Eigen::VectorXd eta;
  double loglik = 0.0;
};

/// log(1 + exp(x)) without overflow.
inline double softplus(double x)
{
  return (x > 0.0 ? x : 0.0) + std::log1p(std::exp(-std::abs(x)));
}

/// sum_i y_i eta_i - log(1 + exp(eta_i)).
double bernoulli_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& eta,
                                const Eigen::Ref<const Eigen::VectorXd>& y);

/// Full evaluation: builds eta = X beta and the log-likelihood.
LinearPredictorCache log_likelihood(const Dataset& data, const Eigen::Ref<const Eigen::VectorXd>& beta);

/// Log-likelihood after beta_j += delta, leaving the cache untouched.
double log_likelihood_after_delta(const LinearPredictorCache& cache,
                                  const Dataset& data,
                                  Index j,
                                  double delta);

/// Applies beta_j += delta to the cache; `new_loglik` must come from
/// log_likelihood_after_delta() with the same arguments.
void commit_delta(LinearPredictorCache& cache,
                  const Dataset& data,
                  Index j,
                  double delta,
                  double new_loglik);

/// Moves coordinate j from old_bj to new_bj and refreshes the log-likelihood.
void log_likelihood_delta(LinearPredictorCache& cache,
                          const Dataset& data,
                          Index j,
                          double old_bj,
                          double new_bj);

/// Sum of Gt log-densities over the penalized coordinates.
double log_prior(const Dataset& data, const Eigen::Ref<const Eigen::VectorXd>& beta, const GtPrior& prior);

/// log f(y | X, beta) + log p(beta), i.e. log of Z * posterior density.
double log_posterior_unnorm(const Dataset& data,
                            const Eigen::Ref<const Eigen::VectorXd>& beta,
                            const GtPrior& prior);

} // namespace spa
