#include "spa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spa {

std::vector<double> simpson_weights(double lo, double hi, std::size_t nodes)
{
  if (nodes < 2)
    throw std::invalid_argument("quadrature needs at least 2 nodes");
  if (!(hi > lo))
    throw std::invalid_argument("quadrature interval must have hi > lo");

  const double h = (hi - lo) / static_cast<double>(nodes - 1);
  std::vector<double> w(nodes, h);
  if (nodes % 2 == 0 || nodes == 2) {
    w.front() = w.back() = 0.5 * h;
    return w;
  }
  for (std::size_t i = 0; i < nodes; ++i) {
    if (i == 0 || i == nodes - 1)
      w[i] = h / 3.0;
    else
      w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  }
  return w;
}

double log_integrate(const std::function<double(double)>& log_f,
                     double lo,
                     double hi,
                     std::size_t nodes)
{
  const auto w = simpson_weights(lo, hi, nodes);
  const double h = (hi - lo) / static_cast<double>(nodes - 1);
  std::vector<double> terms(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = (i + 1 == nodes) ? hi : lo + h * static_cast<double>(i);
    terms[i] = log_f(x) + std::log(w[i]);
  }
  return log_sum_exp(terms);
}

double log_sum_exp(const double* values, std::size_t count)
{
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i)
    m = std::max(m, values[i]);
  if (!std::isfinite(m))
    return m;
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    s += std::exp(values[i] - m);
  return m + std::log(s);
}

} // namespace spa
