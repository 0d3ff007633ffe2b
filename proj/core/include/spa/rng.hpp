#pragma once

#include <cstdint>
#include <random>

namespace spa {

using Engine = std::mt19937_64;

/// Purposes that get disjoint random streams from one master seed.
enum class Stream : std::uint64_t
{
  genotypes = 1,
  coefficients = 2,
  phenotypes = 3,
  init_chain = 4,
  moves = 5,
  resampling = 6,
  fixed_chain = 7,
};

/// Engine keyed by (seed, stream, counter0, counter1). Keys are hashed, so
/// e.g. the move stream for (step t, particle i) depends only on those
/// values and not on how work is scheduled across threads.
Engine stream_engine(std::uint64_t seed, Stream stream, std::uint64_t counter0 = 0, std::uint64_t counter1 = 0);

} // namespace spa
