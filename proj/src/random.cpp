#include "rpt/random.hpp"

namespace rpt {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

SeededRng SeededRng::derive(std::uint64_t stream) const {
  return SeededRng(splitmix64(seed_ ^ splitmix64(stream ^ 0x5851f42d4c957f2dULL)));
}

double SeededRng::normal() { return normal_(engine_); }

double SeededRng::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

Index SeededRng::uniform_index(Index bound) {
  return std::uniform_int_distribution<Index>(0, bound - 1)(engine_);
}

}  // namespace rpt
