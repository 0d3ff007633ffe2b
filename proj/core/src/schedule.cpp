#include "spa/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spa {

Schedule::Schedule(double b1, double ratio, std::size_t steps) : b1_(b1), ratio_(ratio)
{
  if (!(b1 > 0.0) || !std::isfinite(b1))
    throw std::invalid_argument("schedule needs b1 > 0");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("schedule ratio must lie in (0, 1) so that b_t decreases, got "
                                + std::to_string(ratio));
  if (steps < 1)
    throw std::invalid_argument("schedule needs at least one step");
  values_.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const double b = b1 * std::pow(ratio, static_cast<double>(t));
    if (!(b > 0.0))
      throw std::invalid_argument("schedule underflows to zero at step " + std::to_string(t + 1));
    values_.push_back(b);
  }
}

double Schedule::at(std::size_t t) const
{
  if (t < 1 || t > values_.size())
    throw std::out_of_range("schedule step " + std::to_string(t) + " outside [1, "
                            + std::to_string(values_.size()) + "]");
  return values_[t - 1];
}

} // namespace spa
