#ifndef AFV_RANDOM_HPP
#define AFV_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace afv {

/// Mixes a run seed and a sample index into an independent stream seed
/// (splitmix64 finalizer), so sample k does not depend on samples 0..k-1.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(derive_seed(seed, index));
}

inline std::vector<double> gaussian_vector(Rng& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace afv

#endif  // AFV_RANDOM_HPP
