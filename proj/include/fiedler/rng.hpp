// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace fiedler {

/// Seeded random source with a platform-independent draw law.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not; every draw here is derived from raw engine output
/// so generated graphs, initial weights and shuffles are identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Independent stream keyed by (seed, stream).
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform on [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi);
  /// Uniform integer on [0, bound), rejection-sampled (no modulo bias).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform integer on [lo, hi].
  int between(int lo, int hi);

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fiedler
