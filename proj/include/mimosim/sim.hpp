#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mimosim/channel.hpp"
#include "mimosim/detect.hpp"
#include "mimosim/stbc.hpp"

namespace mimosim {

enum class Experiment { FerVsGain, FerVsDoppler, FerVsSampleRate, BerVsSnr };

/// CLI-style name: fer-vs-gain, fer-vs-doppler, fer-vs-samplerate, ber-vs-snr.
std::string_view to_string(Experiment experiment) noexcept;

/// Full configuration of one experiment. The swept parameter depends on the
/// experiment: path gain (dB), maximum Doppler (Hz), sample rate (Hz), or SNR
/// (dB). The base value of that parameter is replaced point by point.
struct SimConfig {
  Experiment experiment = Experiment::FerVsGain;
  ChannelSpec channel{};
  /// OSTBC for the FER experiments.
  std::optional<CodeChoice> code = CodeChoice{};
  /// Detector for BerVsSnr (uncoded spatial multiplexing).
  std::optional<DetectorKind> detector;
  std::size_t frame_bits = 120;
  double snr_db = 10.0;
  std::vector<double> sweep;
  std::size_t max_frames = 100000;
  std::size_t target_frame_errors = 200;
  std::uint64_t master_seed = 1;

  /// Throws ConfigError on any violated invariant (see README for the list).
  void validate() const;

  /// Copy with the swept parameter set to x.
  SimConfig at(double x) const;
};

struct FrameOutcome {
  bool frame_error = false;
  std::size_t bit_errors = 0;
  std::size_t bits = 0;
  bool operator==(const FrameOutcome&) const = default;
};

/// Stream tags under the per-trial stream.
inline constexpr std::uint64_t kBitStreamTag = 1;
inline constexpr std::uint64_t kChannelStreamTag = 2;
inline constexpr std::uint64_t kNoiseStreamTag = 3;

/// Root stream of a trial: (master_seed, make_stream_id(experiment, trial)).
RngStream trial_stream(const SimConfig& config, std::uint64_t trial_index);

/// Simulates one frame at the config's base parameters (the sweep list is
/// ignored). FER experiments: Bernoulli bits -> QPSK -> OSTBC -> fading
/// channel + AWGN -> combiner using the channel at each block's first row ->
/// QPSK decisions. BerVsSnr: bits -> QPSK -> N_t parallel streams over a
/// fresh i.i.d. Rayleigh H per symbol vector -> detector. A detection failure
/// marks the frame erroneous and counts every bit of that vector as wrong.
FrameOutcome run_frame(const SimConfig& config, std::uint64_t trial_index);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// 95% Wilson score interval for errors / trials.
Interval wilson_interval(std::uint64_t errors, std::uint64_t trials);

/// True if the intervals do not intersect.
inline bool disjoint(const Interval& a, const Interval& b) noexcept {
  return a.hi < b.lo || b.hi < a.lo;
}

struct PointResult {
  double x = 0.0;
  std::uint64_t frames = 0;
  std::uint64_t frame_errors = 0;
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  double fer = 0.0;
  double ber = 0.0;
  Interval ci95_fer{};
  Interval ci95_ber{};
  double elapsed_s = 0.0;
};

struct SimResult {
  std::vector<PointResult> points;
};

struct RunOptions {
  /// Worker threads; never changes the result.
  unsigned workers = 1;
};

/// For each sweep point, runs trials 0, 1, 2, ... in index order until
/// target_frame_errors frame errors or max_frames frames, whichever comes
/// first. Trials are computed in parallel batches and folded in index order.
SimResult run_experiment(const SimConfig& config, const RunOptions& options = {});

}  // namespace mimosim
