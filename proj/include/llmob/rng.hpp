#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace llmob {

// Seeded RNG with hand-rolled sampling on top of mt19937_64. The standard
// distributions are implementation-defined, so every sampling routine that
// feeds persisted output goes through this class to keep runs bit-identical
// across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n), rejection-sampled to avoid modulo bias. n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  std::size_t index(std::size_t n) { return std::size_t(below(n)); }

  // Uniform in [0, 1) with 53 bits of precision.
  double unit() { return double(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

  // First n elements of a seeded Fisher-Yates permutation of 0..pool-1.
  std::vector<std::size_t> sample_indices(std::size_t pool, std::size_t n) {
    std::vector<std::size_t> idx(pool);
    for (std::size_t i = 0; i < pool; ++i) idx[i] = i;
    shuffle(idx);
    idx.resize(n);
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

// Stable 64-bit string hash (FNV-1a) for deriving per-user sub-seeds.
inline std::uint64_t stable_hash64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace llmob
