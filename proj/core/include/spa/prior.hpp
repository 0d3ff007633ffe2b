#pragma once

#include <cstddef>

namespace spa {

/// Centred L1 generalized-t prior Gt(a, c):
///
///   p(beta) = 1/(2c) * (1 + |beta| / (a c))^-(a+1)
///
/// `a` plays the role of degrees of freedom and `c` is the scale. The same
/// density is the marginal of a Laplace(0, tau) with tau ~ InverseGamma(a, b)
/// where b = a*c, so samplers that sweep over b use from_rate().
class GtPrior
{
public:
  GtPrior(double a, double c);

  static GtPrior from_rate(double a, double b) { return GtPrior(a, b / a); }

  double a() const noexcept { return a_; }
  double c() const noexcept { return c_; }
  double b() const noexcept { return a_ * c_; }

  /// Penalty of the double-exponential limit reached as a grows.
  double lasso_penalty() const noexcept { return 1.0 / c_; }

private:
  double a_;
  double c_;
};

double gt_log_density(double beta, const GtPrior& prior);

/// Laplace log-density -log(2c) - |beta|/c.
double de_log_density(double beta, double c);

struct ScaleMixtureQuadrature
{
  std::size_t nodes = 2001;
};

/// Gt density evaluated by integrating Laplace(beta | 0, tau) against
/// InverseGamma(tau | a, a c) on a log-tau grid. Test oracle only.
double gt_scale_mixture_oracle(double beta,
                               const GtPrior& prior,
                               const ScaleMixtureQuadrature& quad = {});

struct ShrinkageQuadrature
{
  double half_width = 12.0; // in units of the unit observation sd
  std::size_t nodes = 2001;
};

/// E[beta | y] for y ~ Normal(beta, 1) and beta ~ Gt(a, c). Throws
/// NumericalError if the integrand has not decayed at the interval ends.
double shrinkage_posterior_mean(double y,
                                const GtPrior& prior,
                                const ShrinkageQuadrature& quad = {});

struct SparsityThresholds
{
  double c_sparse;     // MAP is sparse for c below this
  double c_continuous; // MAP is continuous in the data at this c
};

SparsityThresholds sparsity_thresholds(double a);

} // namespace spa
