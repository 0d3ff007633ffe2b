#pragma once

#include <cstddef>
#include <vector>

namespace spa {

/// Geometric rate schedule b_t = b1 * ratio^(t-1), t = 1..steps.
class Schedule
{
public:
  Schedule(double b1, double ratio, std::size_t steps);

  double b1() const noexcept { return b1_; }
  double ratio() const noexcept { return ratio_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// 1-based step index, matching the sampler's step numbering.
  double at(std::size_t t) const;

  const std::vector<double>& values() const noexcept { return values_; }

private:
  double b1_;
  double ratio_;
  std::vector<double> values_;
};

} // namespace spa
