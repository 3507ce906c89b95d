#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mimosim/numerics.hpp"
#include "mimosim/rng.hpp"

namespace mimosim {

enum class FadingModel { Rayleigh, Rician };

std::string_view to_string(FadingModel model) noexcept;
/// Accepts "rayleigh" / "rician" (case-sensitive). Throws ConfigError.
FadingModel parse_fading_model(std::string_view text);

/// K above which a Rician process is treated as the pure line-of-sight limit:
/// the scattered branch is skipped and the LOS phasor has unit amplitude.
inline constexpr double kLosOnlyK = 1e9;

/// Parameters of one scalar (single-link) fading process.
struct FadingSpec {
  FadingModel model = FadingModel::Rayleigh;
  /// Linear Rician K (LOS power over scattered power). Ignored for Rayleigh.
  double k_factor = 0.0;
  /// Maximum Doppler shift of the scattered component, Hz.
  double max_doppler_hz = 100.0;
  /// Doppler shift of the line-of-sight path, Hz.
  double los_doppler_hz = 0.0;
  /// Initial LOS phase, rad.
  double los_phase_rad = 0.0;
  double sample_rate_hz = 1.0e4;
  std::size_t num_sinusoids = 16;

  /// Throws ConfigError unless: max_doppler_hz > 0; sample_rate_hz >
  /// 2 max(max_doppler_hz, |los_doppler_hz|); num_sinusoids >= 8; k_factor
  /// finite and >= 0.
  void validate() const;

  /// Effective K: 0 for Rayleigh.
  double effective_k() const noexcept { return model == FadingModel::Rician ? k_factor : 0.0; }
};

/// Sum-of-sinusoids Rayleigh generator, optionally with a Rician LOS term.
///
/// Scattered part, with w_d = 2 pi max_doppler_hz and t = n / sample_rate_hz:
///
///   u(t) = sqrt(1/M) sum_{i=1..M} [cos(w_d t cos a_i + psi_i)
///                                  + j cos(w_d t sin a_i + theta_i)]
///   a_i  = (2 pi i - pi + phi) / (4M)
///
/// with phi, psi_i, theta_i i.i.d. uniform on [-pi, pi). E|u|^2 = 1 and the
/// in-phase autocorrelation follows J0(w_d tau).
///
/// Rician output: g = sqrt(K/(K+1)) exp(j(2 pi f_los t + theta0))
///                  + sqrt(1/(K+1)) u(t).
class FadingProcess {
 public:
  /// Draws the random angles from `rng` (phi first, then psi_1..M, then
  /// theta_1..M). Throws ConfigError for an invalid spec.
  FadingProcess(const FadingSpec& spec, RngStream& rng);

  const FadingSpec& spec() const noexcept { return spec_; }
  std::span<const double> alphas() const noexcept { return alphas_; }
  std::span<const double> psis() const noexcept { return psis_; }
  std::span<const double> thetas() const noexcept { return thetas_; }
  std::uint64_t sample_index() const noexcept { return sample_index_; }

  /// Value at an absolute sample index; does not advance the process.
  Complex at(std::uint64_t index) const noexcept;

  /// Next sample; advances by one.
  Complex next_sample() noexcept { return at(sample_index_++); }

  /// Fills `out` with the next out.size() samples and advances.
  void next(std::span<Complex> out) noexcept;
  /// Next n samples (n >= 1, else ConfigError).
  std::vector<Complex> next(std::size_t n);

 private:
  FadingSpec spec_;
  std::vector<double> alphas_;
  std::vector<double> psis_;
  std::vector<double> thetas_;
  // w_d cos(a_i) / fs and w_d sin(a_i) / fs: phase advance per sample.
  std::vector<double> step_in_phase_;
  std::vector<double> step_quadrature_;
  double los_amplitude_;
  double scatter_amplitude_;
  double los_step_;
  std::uint64_t sample_index_ = 0;
};

/// fading_init: a fresh process at sample index 0.
inline FadingProcess fading_init(const FadingSpec& spec, RngStream& rng) {
  return FadingProcess(spec, rng);
}

/// fading_next: the next n samples.
inline std::vector<Complex> fading_next(FadingProcess& proc, std::size_t n_samples) {
  return proc.next(n_samples);
}

/// Exponential density of instantaneous power with mean m0.
double pdf_power_rayleigh(double m, double m0);

/// Rician envelope density
///   (x / a2) exp(-(x^2 + cm^2) / (2 a2)) I0(x cm / a2),
/// with a2 the per-component scattered variance. cm = 0 gives Rayleigh.
double pdf_envelope_rician(double x, double cm, double alpha2);

/// Ratio of LOS power cm^2 to scattered power 2 alpha^2.
double k_factor(double cm2, double two_alpha2);

/// Theoretical CDF of |g| for a unit-power process with the given Rician K
/// (K = 0 is Rayleigh). Finite K is tabulated by quadrature of
/// pdf_envelope_rician and interpolated; K above kLosOnlyK is a unit step at 1.
class EnvelopeCdf {
 public:
  explicit EnvelopeCdf(double k);
  double operator()(double r) const noexcept;

 private:
  enum class Kind { Rayleigh, Tabulated, Step } kind_;
  double x_max_ = 0.0;
  double step_ = 0.0;
  std::vector<double> table_;
};

struct AutocorrLag {
  double lag_s;
  double empirical;
  double theoretical;
};

/// Statistics of a generated fading sequence against theory.
struct EnvelopeStats {
  double ks_statistic = 0.0;
  double empirical_mean_power = 0.0;
  /// Ascending in lag_s.
  std::vector<AutocorrLag> autocorr_lags;

  /// RMS of (empirical - theoretical) over lags with lag_s * f_d <= max_tau_fd.
  double autocorr_rmse(double max_doppler_hz, double max_tau_fd = 2.0) const;
};

/// Kolmogorov-Smirnov distance between `samples` (sorted in place) and cdf.
template <typename Cdf>
double ks_statistic(std::span<double> samples, const Cdf& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    worst = std::max({worst, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return worst;
}

/// Two-sample KS distance; both inputs are sorted in place.
double ks_two_sample(std::span<double> a, std::span<double> b);

/// Theoretical normalized autocorrelation of Re g at lag tau for `spec`.
double theoretical_autocorr(const FadingSpec& spec, double tau_s);

/// Draws n_samples (>= 1e5) from `proc` and compares them with theory:
/// envelope KS distance, mean power, and the normalized autocorrelation of
/// the real part at 21 lags spanning tau f_d in [0, 2] where the sample rate
/// allows.
EnvelopeStats validate_process(FadingProcess& proc, std::size_t n_samples);

}  // namespace mimosim

