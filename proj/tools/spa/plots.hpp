#pragma once

#include "spa/summary.hpp"

#include <string>
#include <vector>

namespace spa::cli {

/// Four panels against log c: MAP path, absolute medians, posterior of c and
/// concentration V(delta). `highlight` marks coefficients drawn in colour;
/// the rest are grey.
std::string spa_plot(const SpaResult& result, const std::vector<std::size_t>& highlight, std::size_t delta_index);

/// Credible band, median, mean and MAP of one coefficient against log c.
std::string band_plot(const SpaResult& result, std::size_t coefficient);

/// Weighted density curves of one coefficient at the stored steps.
std::string density_plot(const SpaResult& result, std::size_t coefficient);

/// Pooled (c-integrated) medians, intervals and MAP markers, and pooled
/// concentration bars for every delta.
std::string marginal_plot(const SpaResult& result);

} // namespace spa::cli
