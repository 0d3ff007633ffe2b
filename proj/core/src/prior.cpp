#include "spa/prior.hpp"

#include "spa/error.hpp"
#include "spa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spa {

GtPrior::GtPrior(double a, double c) : a_(a), c_(c)
{
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument("Gt prior needs finite a > 0, got " + std::to_string(a));
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("Gt prior needs finite c > 0, got " + std::to_string(c));
}

double gt_log_density(double beta, const GtPrior& prior)
{
  const double a = prior.a();
  const double c = prior.c();
  return -std::log(2.0 * c) - (a + 1.0) * std::log1p(std::abs(beta) / (a * c));
}

double de_log_density(double beta, double c)
{
  if (!(c > 0.0))
    throw std::invalid_argument("double-exponential scale must be > 0");
  return -std::log(2.0 * c) - std::abs(beta) / c;
}

double gt_scale_mixture_oracle(double beta, const GtPrior& prior, const ScaleMixtureQuadrature& quad)
{
  if (quad.nodes < 2)
    throw std::invalid_argument("scale-mixture quadrature needs at least 2 nodes");

  // Substituting v = log((b + |beta|) / tau) turns the mixing integrand into
  // exp((a + 1) v - e^v) times constants, peaked at v = log(a + 1).
  const double a = prior.a();
  const double b = prior.b();
  const double scale = b + std::abs(beta);
  const double log_const = -std::log(2.0) + a * std::log(b) - std::lgamma(a) - (a + 1.0) * std::log(scale);

  const double peak = std::log(a + 1.0);
  const double spread = 9.0 / std::sqrt(a);
  const double lo = peak - 40.0 / a - spread - 1.0;
  const double hi = peak + std::log1p(40.0 / a) + spread;

  const double log_mass = log_integrate(
    [a](double v) { return (a + 1.0) * v - std::exp(v); }, lo, hi, quad.nodes);
  return std::exp(log_const + log_mass);
}

namespace {

struct Segment
{
  double lo;
  double hi;
  std::size_t nodes;
};

std::size_t odd_at_least_three(double n)
{
  auto k = static_cast<std::size_t>(std::max(3.0, std::round(n)));
  return k % 2 == 0 ? k + 1 : k;
}

} // namespace

double shrinkage_posterior_mean(double y, const GtPrior& prior, const ShrinkageQuadrature& quad)
{
  if (quad.nodes < 3 || !(quad.half_width > 0.0))
    throw std::invalid_argument("shrinkage quadrature needs >= 3 nodes and positive width");

  const double lo = y - quad.half_width;
  const double hi = y + quad.half_width;

  // The prior has a kink at zero; integrate each smooth piece separately.
  std::vector<Segment> segments;
  if (lo < 0.0 && hi > 0.0) {
    const double frac = -lo / (hi - lo);
    segments.push_back({lo, 0.0, odd_at_least_three(frac * static_cast<double>(quad.nodes))});
    segments.push_back({0.0, hi, odd_at_least_three((1.0 - frac) * static_cast<double>(quad.nodes))});
  } else {
    segments.push_back({lo, hi, odd_at_least_three(static_cast<double>(quad.nodes))});
  }

  auto log_integrand = [&](double beta) {
    return -0.5 * (y - beta) * (y - beta) + gt_log_density(beta, prior);
  };

  std::vector<double> xs;
  std::vector<double> logs;
  std::vector<double> ws;
  for (const auto& seg : segments) {
    const auto w = simpson_weights(seg.lo, seg.hi, seg.nodes);
    const double h = (seg.hi - seg.lo) / static_cast<double>(seg.nodes - 1);
    for (std::size_t i = 0; i < seg.nodes; ++i) {
      const double x = (i + 1 == seg.nodes) ? seg.hi : seg.lo + h * static_cast<double>(i);
      xs.push_back(x);
      logs.push_back(log_integrand(x));
      ws.push_back(w[i]);
    }
  }

  const double peak = *std::max_element(logs.begin(), logs.end());
  const double tail = std::max(log_integrand(lo), log_integrand(hi)) - peak;
  if (tail > std::log(1e-12))
    throw NumericalError("shrinkage quadrature interval too narrow: integrand at the ends is "
                         + std::to_string(std::exp(tail)) + " of its peak");

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = ws[i] * std::exp(logs[i] - peak);
    num += xs[i] * f;
    den += f;
  }
  return num / den;
}

SparsityThresholds sparsity_thresholds(double a)
{
  if (!(a > 0.0))
    throw std::invalid_argument("sparsity thresholds need a > 0");
  const double r = std::sqrt(a + 1.0) / a;
  return {2.0 * r, r};
}

} // namespace spa
