#include "spa/rng.hpp"

namespace spa {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

Engine stream_engine(std::uint64_t seed, Stream stream, std::uint64_t counter0, std::uint64_t counter1)
{
  std::uint64_t key = mix(seed);
  key = mix(key ^ static_cast<std::uint64_t>(stream));
  key = mix(key ^ counter0);
  key = mix(key ^ counter1);
  return Engine(key);
}

} // namespace spa
