#pragma once

// Brute-force reference computations used only by the tests. Nothing here
// calls into the library's numerical code.

#include <Eigen/Dense>

#include <vector>

namespace oracle {

/// log of (2c)^-1 (1 + |beta|/(a c))^-(a+1), written out directly.
double gt_logpdf(double beta, double a, double c);

/// sum_i y_i z_i - log(1 + exp(z_i)) by an explicit loop, z = X beta.
double logistic_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);

/// One-predictor logistic posterior under Gt(a, c) tabulated on a uniform
/// grid over [-half_width, half_width] with `nodes` points (0 is a node).
class PosteriorGrid
{
public:
  PosteriorGrid(std::vector<double> x, std::vector<double> y, double a, double c,
                double half_width = 8.0, std::size_t nodes = 160001);

  double log_evidence() const { return log_evidence_; }
  double mean() const;
  double cdf(double b) const;
  /// Inverse of the piecewise-linear cdf.
  double quantile(double q) const;
  /// Grid point of highest density.
  double argmax() const;
  double log_unnormalized(double beta) const;

private:
  std::vector<double> x_, y_;
  double a_, c_;
  std::vector<double> grid_, cum_;
  double log_evidence_ = 0.0;
};

/// argmax of `f` over lo, lo + step, ..., hi.
template <typename F>
double grid_search(F f, double lo, double hi, double step)
{
  double best_x = lo, best = f(lo);
  const auto count = static_cast<long>((hi - lo) / step + 0.5);
  for (long k = 1; k <= count; ++k) {
    const double b = lo + static_cast<double>(k) * step;
    const double v = f(b);
    if (v > best) {
      best = v;
      best_x = b;
    }
  }
  return best_x;
}

/// Unpenalized logistic MLE by damped Newton with the full Hessian.
Eigen::VectorXd newton_mle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int max_iter = 200);

/// Weighted Gaussian KDE by direct double loop.
std::vector<double> naive_kde(const std::vector<double>& values, const std::vector<double>& weights,
                              const std::vector<double>& grid, double bandwidth);

/// Pearson correlations by explicit sums over rows, O(n p^2).
Eigen::MatrixXd naive_correlation(const Eigen::MatrixXd& X);

/// E[beta | y] for y ~ N(beta, 1), beta ~ Gt(a, c) by a midpoint Riemann sum
/// over [y - half_width, y + half_width].
double riemann_shrinkage_mean(double y, double a, double c, double step = 1e-4, double half_width = 15.0);

/// Gt density through its Laplace/inverse-gamma mixture, integrated over tau
/// by adaptive Gauss-Kronrod quadrature.
double gt_density_by_mixture(double beta, double a, double c);

} // namespace oracle
