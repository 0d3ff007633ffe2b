#pragma once

#include "spa/summary.hpp"

#include <filesystem>
#include <string>

namespace spa {

// Summary directory layout:
//   map_path.csv        t,b,c,<names>              (only when the MAP path was computed)
//   medians.csv         t,b,c,<names>              absolute weighted medians
//   concentration.csv   t,b,c,delta,<names>
//   bands.csv           t,b,c,coefficient,mean,median,lower,upper,map
//   c_posterior.csv     t,c,mass
//   pooled_summary.csv  coefficient,map,median,lo90,hi90,V_0.05,V_0.1
//   densities.csv       coefficient,t,c,x,density
//   report.txt

/// "V_0.1" style column label.
std::string concentration_label(double delta);

/// Position of the delta used to rank coefficients: 0.1 when present,
/// otherwise the largest.
std::size_t ranking_delta_index(const std::vector<double>& deltas);

std::string format_report(const SpaResult& result);

void write_spa_result(const SpaResult& result, const std::filesystem::path& dir);

/// Reads back the files written by write_spa_result. Step log evidence is
/// restored only up to a constant, as log(mass).
SpaResult read_spa_result(const std::filesystem::path& dir);

} // namespace spa
