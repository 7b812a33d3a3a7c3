#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace glc {

/// splitmix64 finalizer; used to derive independent per-cycle / per-stream
/// seeds from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Seeded generator whose output sequence is fixed by the standard
/// (mt19937_64) and whose derived draws avoid implementation-defined
/// std:: distributions, so batches are bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace glc
