#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "mimosim/fading.hpp"
#include "mimosim/numerics.hpp"
#include "mimosim/rng.hpp"

namespace mimosim {

/// Named spatial-correlation levels of the exponential model.
enum class CorrelationLevel { Low, Medium, High };

/// rho for a named level: Low 0.1, Medium 0.5, High 0.9.
double correlation_rho(CorrelationLevel level) noexcept;

/// Accepts "none" (0), "low", "medium", "high" or a number in [0, 1).
double parse_correlation(std::string_view text);

/// Exponential correlation matrix R[i][j] = rho^|i-j|, 0 <= rho < 1.
ComplexMatrix correlation_matrix(std::size_t n, double rho);

struct ChannelSpec {
  std::size_t n_tx = 4;
  std::size_t n_rx = 4;
  FadingSpec fading{};
  /// Exponential-model correlation at each end.
  double tx_correlation = 0.1;
  double rx_correlation = 0.1;
  /// Average per-entry channel power gain in dB.
  double path_gain_db = 0.0;

  /// Throws ConfigError: antenna counts in [1, 4], correlations in [0, 1),
  /// finite gain, valid fading spec.
  void validate() const;

  double amplitude_gain() const noexcept;
};

/// Time-varying N_r x N_t channel, Kronecker-correlated:
///   H(n) = g * Rr^{1/2} * H_iid(n) * Rt^{1/2}
/// where H_iid(r, t) comes from an independent scalar FadingProcess and
/// g = 10^(path_gain_db / 20).
class ChannelProcess {
 public:
  /// Scalar process for entry (r, t) is seeded from rng.derive(r * n_tx + t),
  /// so each link has its own stream. Square roots use psd_sqrt.
  ChannelProcess(const ChannelSpec& spec, const RngStream& rng);

  const ChannelSpec& spec() const noexcept { return spec_; }
  const ComplexMatrix& rt_sqrt() const noexcept { return rt_sqrt_; }
  const ComplexMatrix& rr_sqrt() const noexcept { return rr_sqrt_; }
  std::span<const FadingProcess> scalar_processes() const noexcept { return links_; }
  std::span<const std::uint64_t> link_stream_ids() const noexcept { return link_stream_ids_; }
  std::uint64_t sample_index() const noexcept { return links_.front().sample_index(); }

  /// Channel matrix for the next sample; advances every link by one.
  ComplexMatrix next();
  /// channel_matrix_at: the next n_samples matrices (n_samples >= 1).
  std::vector<ComplexMatrix> next(std::size_t n_samples);

 private:
  ChannelSpec spec_;
  std::vector<FadingProcess> links_;
  std::vector<std::uint64_t> link_stream_ids_;
  ComplexMatrix rt_sqrt_;
  ComplexMatrix rr_sqrt_;
  bool correlated_;
  double gain_;
};

inline ChannelProcess channel_init(const ChannelSpec& spec, const RngStream& rng) {
  return ChannelProcess(spec, rng);
}

inline std::vector<ComplexMatrix> channel_matrix_at(ChannelProcess& proc, std::size_t n_samples) {
  return proc.next(n_samples);
}

/// Received block: one row per channel use, one column per receive antenna.
struct NoisySignal {
  ComplexMatrix samples;
  /// Complex noise variance per receive antenna (0 when noise is disabled).
  double noise_var;
};

struct ChannelOutput {
  NoisySignal signal;
  /// Channel matrix used for each row of the input.
  std::vector<ComplexMatrix> h;
};

/// Pass sentinel for a noiseless channel.
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Linear noise variance for an SNR in dB: 10^(-snr_db/10); 0 for kNoNoise.
double noise_variance(double snr_db);

/// Sends x (N_s x N_t, rows are channel uses) through the next N_s channel
/// matrices: y_row = H_row * x_row^T + w, with w ~ CN(0, noise_var I).
/// SNR is total transmit energy per channel use over per-receive-antenna noise
/// power, so noise_var = 10^(-snr_db/10). Returns y and the exact H per row.
ChannelOutput apply_channel(ChannelProcess& proc, const ComplexMatrix& x, double snr_db,
                            RngStream& noise_rng);

}  // namespace mimosim
