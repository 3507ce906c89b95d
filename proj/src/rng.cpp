#include "mimosim/rng.hpp"

#include <cmath>
#include <numbers>

namespace mimosim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t make_stream_id(std::uint64_t experiment_id, std::uint64_t trial_index) noexcept {
  return mix64(mix64(experiment_id + kGolden) ^ (trial_index * kGolden + 0x632BE59BD9B4E019ULL));
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
    : master_seed_(master_seed), stream_id_(stream_id) {
  std::uint64_t sm = mix64(master_seed + kGolden) ^ mix64(stream_id ^ 0xD1B54A32D192ED03ULL);
  for (auto& word : state_) {
    sm += kGolden;
    word = mix64(sm);
  }
  // xoshiro must not start from the all-zero state.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
}

RngStream RngStream::derive(std::uint64_t tag) const noexcept {
  return RngStream(master_seed_, mix64(stream_id_ ^ mix64(tag + 0xA0761D6478BD642FULL)));
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

std::pair<double, double> RngStream::gaussian_pair() noexcept {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(angle), r * std::sin(angle)};
}

std::complex<double> RngStream::complex_gaussian(double variance) noexcept {
  const auto [x, y] = gaussian_pair();
  const double s = std::sqrt(0.5 * variance);
  return {s * x, s * y};
}

}  // namespace mimosim
