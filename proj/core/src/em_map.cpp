#include "spa/em_map.hpp"

#include "spa/likelihood.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spa {

namespace {

Eigen::VectorXd score(const Dataset& data, const Eigen::VectorXd& eta)
{
  const Eigen::VectorXd resid = data.y.array() - 1.0 / (1.0 + (-eta.array()).exp());
  return data.X.transpose() * resid;
}

double soft_threshold(double z, double t)
{
  if (z > t)
    return z - t;
  if (z < -t)
    return z + t;
  return 0.0;
}

double kkt_from_score(const Eigen::VectorXd& g, const Eigen::VectorXd& w, const Eigen::VectorXd& beta)
{
  double worst = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    double v;
    if (beta[j] == 0.0)
      v = std::max(0.0, std::abs(g[j]) - w[j]);
    else
      v = std::abs(g[j] - std::copysign(w[j], beta[j]));
    worst = std::max(worst, v);
  }
  return worst;
}

std::vector<GtPrior> broadcast(const Dataset& data, const GtPrior& prior)
{
  return std::vector<GtPrior>(static_cast<std::size_t>(data.p()), prior);
}

double log_posterior(const Dataset& data, const std::vector<GtPrior>& priors, const Eigen::VectorXd& beta)
{
  double lp = log_likelihood(data, beta).loglik;
  for (Index j = data.first_penalized(); j < data.p(); ++j)
    lp += gt_log_density(beta[j], priors[static_cast<std::size_t>(j)]);
  return lp;
}

} // namespace

Eigen::VectorXd em_weights(const Dataset& data, const Eigen::VectorXd& beta, const std::vector<GtPrior>& priors)
{
  if (beta.size() != data.p() || static_cast<Index>(priors.size()) != data.p())
    throw std::invalid_argument("em_weights: beta and priors must have one entry per column");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(beta.size());
  for (Index j = data.first_penalized(); j < beta.size(); ++j) {
    const auto& pr = priors[static_cast<std::size_t>(j)];
    w[j] = (pr.a() + 1.0) / (pr.b() + std::abs(beta[j]));
  }
  return w;
}

Eigen::VectorXd em_weights(const Dataset& data, const Eigen::VectorXd& beta, const GtPrior& prior)
{
  return em_weights(data, beta, broadcast(data, prior));
}

double kkt_residual(const Dataset& data, const Eigen::VectorXd& weights, const Eigen::VectorXd& beta)
{
  return kkt_from_score(score(data, data.X * beta), weights, beta);
}

L1Solution weighted_l1_logistic(const Dataset& data,
                                const Eigen::VectorXd& weights,
                                const Eigen::VectorXd& beta_init,
                                const L1SolverOptions& options)
{
  const Index p = data.p();
  if (weights.size() != p || beta_init.size() != p)
    throw std::invalid_argument("weighted_l1_logistic: weights and beta must have length p = "
                                + std::to_string(p));
  if (!(options.tol > 0.0))
    throw std::invalid_argument("weighted_l1_logistic: tol must be > 0");
  if ((weights.array() < 0.0).any())
    throw std::invalid_argument("weighted_l1_logistic: weights must be >= 0");

  const Eigen::VectorXd curvature = 0.25 * data.X.colwise().squaredNorm().transpose();

  L1Solution sol;
  sol.beta = beta_init;
  Eigen::VectorXd eta = data.X * sol.beta;

  sol.kkt_residual = kkt_from_score(score(data, eta), weights, sol.beta);
  if (sol.kkt_residual < options.tol) {
    sol.converged = true;
    return sol;
  }

  for (sol.sweeps = 1; sol.sweeps <= options.max_sweeps; ++sol.sweeps) {
    for (Index j = 0; j < p; ++j) {
      if (curvature[j] == 0.0)
        continue;
      const double g = data.X.col(j).dot(
        (data.y.array() - 1.0 / (1.0 + (-eta.array()).exp())).matrix());
      const double old = sol.beta[j];
      const double next = soft_threshold(old + g / curvature[j], weights[j] / curvature[j]);
      if (next != old) {
        eta += (next - old) * data.X.col(j);
        sol.beta[j] = next;
      }
    }
    sol.kkt_residual = kkt_from_score(score(data, eta), weights, sol.beta);
    if (sol.kkt_residual < options.tol) {
      sol.converged = true;
      return sol;
    }
  }
  sol.sweeps = options.max_sweeps;
  return sol;
}

EmResult em_map(const Dataset& data,
                const std::vector<GtPrior>& priors,
                const Eigen::VectorXd& beta_init,
                const EmOptions& options)
{
  if (beta_init.size() != data.p())
    throw std::invalid_argument("em_map: beta_init must have length p = " + std::to_string(data.p()));
  if (static_cast<Index>(priors.size()) != data.p())
    throw std::invalid_argument("em_map: need one prior per column");

  EmResult result;
  result.beta = beta_init;
  result.log_post = log_posterior(data, priors, result.beta);
  result.trace.push_back({result.beta, Eigen::VectorXd(), result.log_post, 0});

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const Eigen::VectorXd w = em_weights(data, result.beta, priors);
    auto sol = weighted_l1_logistic(data, w, result.beta, options.inner);
    result.inner_converged = result.inner_converged && sol.converged;

    const double change = (sol.beta - result.beta).cwiseAbs().maxCoeff();
    result.beta = std::move(sol.beta);
    result.log_post = log_posterior(data, priors, result.beta);
    result.trace.push_back({result.beta, w, result.log_post, iter});
    if (change < options.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

EmResult em_map(const Dataset& data, const GtPrior& prior, const Eigen::VectorXd& beta_init, const EmOptions& options)
{
  return em_map(data, broadcast(data, prior), beta_init, options);
}

} // namespace spa
