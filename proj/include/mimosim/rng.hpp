#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <string_view>
#include <utility>

namespace mimosim {

/// Deterministic random stream: xoshiro256** whose 256-bit state is expanded
/// with SplitMix64 from a hash of (master seed, stream id).
///
/// Streams are addressed, not advanced: a stream with the same
/// (master_seed, stream_id) always yields the same sequence, and child
/// streams obtained with derive() are keyed by (parent id, tag). The
/// simulator keys frame streams by make_stream_id(experiment, trial), so
/// results do not depend on which worker runs a trial or in what order.
///
/// A stream is single-owner mutable state; do not share one across threads.
class RngStream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view kAlgorithm = "xoshiro256**/splitmix64";

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

  /// Independent child stream keyed by (this stream's key, tag). Does not
  /// advance this stream.
  RngStream derive(std::uint64_t tag) const noexcept;

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept;
  result_type operator()() noexcept { return next_u64(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;

  /// Two independent N(0, 1) variates by the Box-Muller transform, consuming
  /// exactly two uniforms: u1 in (0, 1] for the radius, u2 in [0, 1) for the
  /// angle; returns (r cos(2 pi u2), r sin(2 pi u2)) with r = sqrt(-2 ln u1).
  std::pair<double, double> gaussian_pair() noexcept;

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_gaussian(double variance) noexcept;

  bool operator==(const RngStream&) const = default;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
};

/// Free-function form of RngStream::gaussian_pair.
inline std::pair<double, double> gaussian_pair(RngStream& rng) noexcept {
  return rng.gaussian_pair();
}

/// SplitMix64 finalizer; bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stream id for trial `trial_index` of experiment `experiment_id`.
std::uint64_t make_stream_id(std::uint64_t experiment_id, std::uint64_t trial_index) noexcept;

}  // namespace mimosim
