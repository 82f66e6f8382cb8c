#ifndef MOTIFCLUST_RNG_HPP
#define MOTIFCLUST_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace motifclust {

/// Seeded generator with platform-independent derived draws.
///
/// The standard distributions are implementation-defined, so uniform reals,
/// bounded integers and categorical draws are built directly on the raw
/// 64-bit engine output. Equal seeds give equal streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n - 1}; n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Draws an index with probability proportional to exp(log_weights[i]).
  /// Entries equal to -inf are never chosen. Throws std::invalid_argument
  /// when every entry is -inf or the span is empty.
  std::size_t categorical_log(std::span<const double> log_weights);

  /// Independent seed for stream `stream` of a run seeded with `base`.
  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace motifclust

#endif  // MOTIFCLUST_RNG_HPP
