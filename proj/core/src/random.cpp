#include "circuitkit/random.hpp"

#include <cmath>
#include <numbers>

#include "circuitkit/error.hpp"

namespace circuitkit {

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw InvalidInput("Rng::below called with n = 0");
  const std::uint64_t bound = n;
  const std::uint64_t floor = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= floor) return static_cast<std::size_t>(r % bound);
  }
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace circuitkit
