#include "spa/likelihood.hpp"

#include <stdexcept>
#include <string>

namespace spa {

namespace {

template <typename Derived>
double softplus_sum_terms(const Eigen::ArrayBase<Derived>& z, const Eigen::Ref<const Eigen::VectorXd>& y)
{
#if defined(__AVX2__)
  // Eigen vectorizes log but not log1p; 1 + exp(-|z|) lies in (1, 2] so the
  // plain log loses nothing that matters for the sum.
  return (y.array() * z - (z.max(0.0) + (1.0 + (-z.abs()).exp()).log())).sum();
#else
  return (y.array() * z - (z.max(0.0) + (-z.abs()).exp().log1p())).sum();
#endif
}

void check_coordinate(const Dataset& data, Index j)
{
  if (j < 0 || j >= data.p())
    throw std::out_of_range("coordinate " + std::to_string(j) + " outside [0, "
                            + std::to_string(data.p()) + ")");
}

} // namespace

double bernoulli_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& eta,
                                const Eigen::Ref<const Eigen::VectorXd>& y)
{
  return softplus_sum_terms(eta.array(), y);
}

LinearPredictorCache log_likelihood(const Dataset& data, const Eigen::Ref<const Eigen::VectorXd>& beta)
{
  if (beta.size() != data.p())
    throw std::invalid_argument("coefficient vector has length " + std::to_string(beta.size())
                                + ", dataset has " + std::to_string(data.p()) + " columns");
  LinearPredictorCache cache;
  cache.eta = data.X * beta;
  cache.loglik = bernoulli_log_likelihood(cache.eta, data.y);
  return cache;
}

double log_likelihood_after_delta(const LinearPredictorCache& cache,
                                  const Dataset& data,
                                  Index j,
                                  double delta)
{
  check_coordinate(data, j);
  if (delta == 0.0)
    return cache.loglik;
  return softplus_sum_terms(cache.eta.array() + delta * data.X.col(j).array(), data.y);
}

void commit_delta(LinearPredictorCache& cache, const Dataset& data, Index j, double delta, double new_loglik)
{
  if (delta == 0.0)
    return;
  cache.eta.array() = cache.eta.array() + delta * data.X.col(j).array();
  cache.loglik = new_loglik;
}

void log_likelihood_delta(LinearPredictorCache& cache, const Dataset& data, Index j, double old_bj, double new_bj)
{
  const double delta = new_bj - old_bj;
  const double value = log_likelihood_after_delta(cache, data, j, delta);
  commit_delta(cache, data, j, delta, value);
}

double log_prior(const Dataset& data, const Eigen::Ref<const Eigen::VectorXd>& beta, const GtPrior& prior)
{
  double lp = 0.0;
  for (Index j = data.first_penalized(); j < beta.size(); ++j)
    lp += gt_log_density(beta[j], prior);
  return lp;
}

double log_posterior_unnorm(const Dataset& data,
                            const Eigen::Ref<const Eigen::VectorXd>& beta,
                            const GtPrior& prior)
{
  return log_likelihood(data, beta).loglik + log_prior(data, beta, prior);
}

} // namespace spa
