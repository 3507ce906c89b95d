#include "mimosim/fading.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mimosim/error.hpp"

namespace mimosim {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

std::string_view to_string(FadingModel model) noexcept {
  return model == FadingModel::Rayleigh ? "rayleigh" : "rician";
}

FadingModel parse_fading_model(std::string_view text) {
  if (text == "rayleigh") return FadingModel::Rayleigh;
  if (text == "rician") return FadingModel::Rician;
  throw ConfigError("unknown fading model '" + std::string(text) + "'");
}

void FadingSpec::validate() const {
  if (!(max_doppler_hz > 0.0) || !std::isfinite(max_doppler_hz)) {
    throw ConfigError("max_doppler_hz must be positive and finite");
  }
  if (!std::isfinite(los_doppler_hz) || !std::isfinite(los_phase_rad)) {
    throw ConfigError("LOS Doppler and phase must be finite");
  }
  const double nyquist_floor = 2.0 * std::max(max_doppler_hz, std::abs(los_doppler_hz));
  if (!(sample_rate_hz > nyquist_floor) || !std::isfinite(sample_rate_hz)) {
    throw ConfigError("sample_rate_hz " + std::to_string(sample_rate_hz) +
                      " must exceed twice the largest Doppler shift (" +
                      std::to_string(nyquist_floor) + ")");
  }
  if (num_sinusoids < 8) throw ConfigError("num_sinusoids must be at least 8");
  if (!(k_factor >= 0.0) || !std::isfinite(k_factor)) {
    throw ConfigError("k_factor must be finite and non-negative");
  }
}

FadingProcess::FadingProcess(const FadingSpec& spec, RngStream& rng) : spec_(spec) {
  spec_.validate();
  const std::size_t m = spec_.num_sinusoids;
  const double md = static_cast<double>(m);

  const double phi = rng.uniform(-kPi, kPi);
  psis_.resize(m);
  thetas_.resize(m);
  for (auto& p : psis_) p = rng.uniform(-kPi, kPi);
  for (auto& t : thetas_) t = rng.uniform(-kPi, kPi);

  alphas_.resize(m);
  step_in_phase_.resize(m);
  step_quadrature_.resize(m);
  const double wd_per_sample = 2.0 * kPi * spec_.max_doppler_hz / spec_.sample_rate_hz;
  for (std::size_t i = 0; i < m; ++i) {
    const double alpha = (2.0 * kPi * static_cast<double>(i + 1) - kPi + phi) / (4.0 * md);
    alphas_[i] = alpha;
    step_in_phase_[i] = wd_per_sample * std::cos(alpha);
    step_quadrature_[i] = wd_per_sample * std::sin(alpha);
  }

  const double k = spec_.effective_k();
  if (k > kLosOnlyK) {
    los_amplitude_ = 1.0;
    scatter_amplitude_ = 0.0;
  } else {
    los_amplitude_ = std::sqrt(k / (k + 1.0));
    scatter_amplitude_ = std::sqrt(1.0 / (k + 1.0)) / std::sqrt(md);
  }
  los_step_ = 2.0 * kPi * spec_.los_doppler_hz / spec_.sample_rate_hz;
}

Complex FadingProcess::at(std::uint64_t index) const noexcept {
  const double n = static_cast<double>(index);
  Complex value{};
  if (scatter_amplitude_ != 0.0) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < psis_.size(); ++i) {
      re += std::cos(step_in_phase_[i] * n + psis_[i]);
      im += std::cos(step_quadrature_[i] * n + thetas_[i]);
    }
    value = {scatter_amplitude_ * re, scatter_amplitude_ * im};
  }
  if (los_amplitude_ != 0.0) {
    value += std::polar(los_amplitude_, los_step_ * n + spec_.los_phase_rad);
  }
  return value;
}

void FadingProcess::next(std::span<Complex> out) noexcept {
  for (auto& v : out) v = at(sample_index_++);
}

std::vector<Complex> FadingProcess::next(std::size_t n) {
  if (n == 0) throw ConfigError("fading_next: n_samples must be at least 1");
  std::vector<Complex> out(n);
  next(std::span<Complex>(out));
  return out;
}

double pdf_power_rayleigh(double m, double m0) {
  if (!(m >= 0.0) || !(m0 > 0.0)) {
    throw DomainError("pdf_power_rayleigh requires m >= 0 and m0 > 0");
  }
  return std::exp(-m / m0) / m0;
}

double pdf_envelope_rician(double x, double cm, double alpha2) {
  if (!(x >= 0.0) || !(cm >= 0.0) || !(alpha2 > 0.0)) {
    throw DomainError("pdf_envelope_rician requires x >= 0, cm >= 0 and alpha2 > 0");
  }
  if (cm == 0.0) return x / alpha2 * std::exp(-x * x / (2.0 * alpha2));
  // exp(-(x^2 + cm^2)/(2 a2)) I0(z) == exp(-(x - cm)^2/(2 a2)) * e^{-z} I0(z)
  // with z = x cm / a2; the scaled form cannot overflow.
  const double z = x * cm / alpha2;
  const double d = x - cm;
  return x / alpha2 * std::exp(-d * d / (2.0 * alpha2)) * bessel_i0_scaled(z);
}

double k_factor(double cm2, double two_alpha2) {
  if (!(cm2 >= 0.0) || !(two_alpha2 > 0.0)) {
    throw DomainError("k_factor requires cm2 >= 0 and two_alpha2 > 0");
  }
  return cm2 / two_alpha2;
}

namespace {

constexpr std::size_t kCdfIntervals = 20000;

}  // namespace

EnvelopeCdf::EnvelopeCdf(double k) {
  if (!(k >= 0.0)) throw DomainError("EnvelopeCdf requires K >= 0");
  if (k == 0.0) {
    kind_ = Kind::Rayleigh;
    return;
  }
  if (k > kLosOnlyK) {
    kind_ = Kind::Step;
    return;
  }
  kind_ = Kind::Tabulated;
  const double cm = std::sqrt(k / (k + 1.0));
  const double alpha2 = 0.5 / (k + 1.0);
  x_max_ = cm + 12.0 * std::sqrt(alpha2);
  step_ = x_max_ / static_cast<double>(kCdfIntervals);
  table_.resize(kCdfIntervals + 1);
  table_[0] = 0.0;
  double prev = pdf_envelope_rician(0.0, cm, alpha2);
  for (std::size_t i = 1; i <= kCdfIntervals; ++i) {
    const double x0 = step_ * static_cast<double>(i - 1);
    const double mid = pdf_envelope_rician(x0 + 0.5 * step_, cm, alpha2);
    const double next = pdf_envelope_rician(x0 + step_, cm, alpha2);
    table_[i] = table_[i - 1] + step_ / 6.0 * (prev + 4.0 * mid + next);
    prev = next;
  }
}

double EnvelopeCdf::operator()(double r) const noexcept {
  if (r <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Rayleigh:
      return -std::expm1(-r * r);
    case Kind::Step:
      return r >= 1.0 ? 1.0 : 0.0;
    case Kind::Tabulated:
      break;
  }
  if (r >= x_max_) return std::min(1.0, table_.back());
  const double pos = r / step_;
  const auto idx = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(idx);
  return table_[idx] + frac * (table_[idx + 1] - table_[idx]);
}

double EnvelopeStats::autocorr_rmse(double max_doppler_hz, double max_tau_fd) const {
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& lag : autocorr_lags) {
    if (lag.lag_s * max_doppler_hz > max_tau_fd + 1e-12) continue;
    const double d = lag.empirical - lag.theoretical;
    acc += d * d;
    ++count;
  }
  return count ? std::sqrt(acc / static_cast<double>(count)) : 0.0;
}

double ks_two_sample(std::span<double> a, std::span<double> b) {
  if (a.empty() || b.empty()) throw ConfigError("ks_two_sample needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double worst = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return worst;
}

double theoretical_autocorr(const FadingSpec& spec, double tau_s) {
  const double k = spec.effective_k();
  const bool los_only = k > kLosOnlyK;
  const double los_power = los_only ? 1.0 : k / (k + 1.0);
  const double scatter_power = los_only ? 0.0 : 1.0 / (k + 1.0);

  // Time-averaged E[Re g(t) Re g(t + tau)]. The scattered in-phase part has
  // variance 1/2 and correlation J0(w_d tau); a rotating LOS phasor averages
  // to cos(w tau)/2, a static one contributes cos^2(theta0).
  auto los_term = [&](double tau) {
    if (spec.los_doppler_hz == 0.0) {
      const double c = std::cos(spec.los_phase_rad);
      return c * c;
    }
    return 0.5 * std::cos(2.0 * kPi * spec.los_doppler_hz * tau);
  };
  const double wd = 2.0 * kPi * spec.max_doppler_hz;
  const double arg = wd * tau_s;
  const double j0 = arg <= 100.0 ? bessel_j0(arg) : 0.0;
  const double num = scatter_power * 0.5 * j0 + los_power * los_term(tau_s);
  const double den = scatter_power * 0.5 + los_power * los_term(0.0);
  return den > 0.0 ? num / den : 0.0;
}

EnvelopeStats validate_process(FadingProcess& proc, std::size_t n_samples) {
  if (n_samples < 100000) throw ConfigError("validate_process needs at least 1e5 samples");
  const FadingSpec& spec = proc.spec();
  const std::vector<Complex> g = proc.next(n_samples);
  const double n = static_cast<double>(n_samples);

  EnvelopeStats stats;
  std::vector<double> envelope(n_samples);
  double power = 0.0;
  double re_power = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    power += std::norm(g[i]);
    re_power += g[i].real() * g[i].real();
    envelope[i] = std::abs(g[i]);
  }
  stats.empirical_mean_power = power / n;
  stats.ks_statistic = ks_statistic(std::span<double>(envelope), EnvelopeCdf(spec.effective_k()));

  constexpr std::size_t kLagCount = 21;
  const double samples_per_span = 2.0 * spec.sample_rate_hz / spec.max_doppler_hz;
  const auto lag_step = std::max<std::size_t>(
      1, static_cast<std::size_t>(samples_per_span / static_cast<double>(kLagCount - 1)));
  const double re_mean_sq = re_power / n;
  for (std::size_t k = 0; k < kLagCount; ++k) {
    const std::size_t lag = k * lag_step;
    if (lag >= n_samples) break;
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n_samples; ++i) acc += g[i].real() * g[i + lag].real();
    const double empirical =
        re_mean_sq > 0.0 ? acc / static_cast<double>(n_samples - lag) / re_mean_sq : 0.0;
    const double lag_s = static_cast<double>(lag) / spec.sample_rate_hz;
    stats.autocorr_lags.push_back({lag_s, empirical, theoretical_autocorr(spec, lag_s)});
  }
  return stats;
}

}  // namespace mimosim
