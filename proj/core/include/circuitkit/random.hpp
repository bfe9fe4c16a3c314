#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace circuitkit {

// Portable seeded generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard. The standard distributions are not, so
// bounded integers, uniforms, and normals are derived here by fixed
// recipes:
//   below(n)  : rejection sampling on the raw 64-bit output, r % n once
//               r >= (2^64 - n) % n
//   uniform() : (raw >> 11) * 2^-53, in [0, 1)
//   normal()  : Box-Muller on two uniforms, cosine branch only
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n);
  double uniform();
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace circuitkit
