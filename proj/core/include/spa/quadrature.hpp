#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace spa {

/// Composite Simpson weights for `nodes` equally spaced points on [lo, hi].
/// Falls back to trapezoid weights when `nodes` is even. Requires nodes >= 2.
std::vector<double> simpson_weights(double lo, double hi, std::size_t nodes);

/// Integral of exp(log_f) over [lo, hi] returned on the log scale, with the
/// integrand evaluated at `nodes` equally spaced points. Max-subtracted so
/// that integrands far outside double range are handled.
double log_integrate(const std::function<double(double)>& log_f,
                     double lo,
                     double hi,
                     std::size_t nodes);

double log_sum_exp(const double* values, std::size_t count);

inline double log_sum_exp(const std::vector<double>& values)
{
  return log_sum_exp(values.data(), values.size());
}

} // namespace spa
