// SPDX-License-Identifier: Apache-2.0
#include "fiedler/rng.hpp"

#include <limits>

namespace fiedler {

namespace {

std::mt19937_64 seeded_engine(std::initializer_list<std::uint32_t> words) {
  std::seed_seq seq(words);
  return std::mt19937_64(seq);
}

std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seeded_engine({lo32(seed), hi32(seed)})) {}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(seeded_engine({lo32(seed), hi32(seed), lo32(stream), hi32(stream), 0x9e3779b9u})) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  if (lo == hi) return lo;
  // 2^53 + 1 grid points so both endpoints are reachable.
  const double u = static_cast<double>(below((std::uint64_t{1} << 53) + 1)) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

int Rng::between(int lo, int hi) {
  return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

}  // namespace fiedler
