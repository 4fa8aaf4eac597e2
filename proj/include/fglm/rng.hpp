#ifndef FGLM_RNG_HPP
#define FGLM_RNG_HPP

#include <cstdint>
#include <random>

namespace fglm {

// SplitMix64 finalizer: cheap, well-mixed, and stateless.  Used only to derive
// independent seeds; actual variates come from std::mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives the seed of an independent stream from a master seed and up to three
// stream coordinates (e.g. scenario, replication, purpose).  Work item (a,b,c)
// gets the same stream no matter which thread runs it or in what order, which
// is what makes parallel runs bit-identical to sequential ones.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
  return std::mt19937_64(stream_seed(master, a, b, c));
}

} // namespace fglm

#endif
