#include "mimosim/channel.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "mimosim/error.hpp"

namespace mimosim {

double correlation_rho(CorrelationLevel level) noexcept {
  switch (level) {
    case CorrelationLevel::Low:
      return 0.1;
    case CorrelationLevel::Medium:
      return 0.5;
    case CorrelationLevel::High:
      return 0.9;
  }
  return 0.0;
}

double parse_correlation(std::string_view text) {
  if (text == "none") return 0.0;
  if (text == "low") return correlation_rho(CorrelationLevel::Low);
  if (text == "medium") return correlation_rho(CorrelationLevel::Medium);
  if (text == "high") return correlation_rho(CorrelationLevel::High);
  double rho = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), rho);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(rho >= 0.0 && rho < 1.0)) {
    throw ConfigError("correlation must be none|low|medium|high or a number in [0, 1), got '" +
                      std::string(text) + "'");
  }
  return rho;
}

ComplexMatrix correlation_matrix(std::size_t n, double rho) {
  if (n == 0) throw DimensionError("correlation_matrix: n must be at least 1");
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw DomainError("correlation_matrix: rho must lie in [0, 1)");
  }
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto d = static_cast<double>(i > j ? i - j : j - i);
      r(i, j) = std::pow(rho, d);
    }
  }
  return r;
}

void ChannelSpec::validate() const {
  if (n_tx < 1 || n_tx > 4 || n_rx < 1 || n_rx > 4) {
    throw ConfigError("antenna counts must lie in [1, 4]");
  }
  if (!(tx_correlation >= 0.0 && tx_correlation < 1.0) ||
      !(rx_correlation >= 0.0 && rx_correlation < 1.0)) {
    throw ConfigError("correlation coefficients must lie in [0, 1)");
  }
  if (!std::isfinite(path_gain_db)) throw ConfigError("path_gain_db must be finite");
  fading.validate();
}

double ChannelSpec::amplitude_gain() const noexcept { return std::pow(10.0, path_gain_db / 20.0); }

ChannelProcess::ChannelProcess(const ChannelSpec& spec, const RngStream& rng)
    : spec_(spec),
      rt_sqrt_(1, 1),
      rr_sqrt_(1, 1),
      correlated_(spec.tx_correlation > 0.0 || spec.rx_correlation > 0.0),
      gain_(spec.amplitude_gain()) {
  spec_.validate();
  const std::size_t links = spec_.n_rx * spec_.n_tx;
  links_.reserve(links);
  link_stream_ids_.reserve(links);
  for (std::size_t l = 0; l < links; ++l) {
    RngStream link_rng = rng.derive(l);
    link_stream_ids_.push_back(link_rng.stream_id());
    links_.emplace_back(spec_.fading, link_rng);
  }
  rt_sqrt_ = psd_sqrt(correlation_matrix(spec_.n_tx, spec_.tx_correlation));
  rr_sqrt_ = psd_sqrt(correlation_matrix(spec_.n_rx, spec_.rx_correlation));
}

ComplexMatrix ChannelProcess::next() {
  ComplexMatrix h(spec_.n_rx, spec_.n_tx);
  for (std::size_t r = 0; r < spec_.n_rx; ++r) {
    for (std::size_t t = 0; t < spec_.n_tx; ++t) {
      h(r, t) = links_[r * spec_.n_tx + t].next_sample();
    }
  }
  if (correlated_) h = rr_sqrt_ * h * rt_sqrt_;
  if (gain_ != 1.0) h *= gain_;
  return h;
}

std::vector<ComplexMatrix> ChannelProcess::next(std::size_t n_samples) {
  if (n_samples == 0) throw ConfigError("channel_matrix_at: n_samples must be at least 1");
  std::vector<ComplexMatrix> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) out.push_back(next());
  return out;
}

double noise_variance(double snr_db) {
  if (std::isnan(snr_db)) throw ConfigError("snr_db is NaN");
  if (snr_db == kNoNoise) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);
}

ChannelOutput apply_channel(ChannelProcess& proc, const ComplexMatrix& x, double snr_db,
                            RngStream& noise_rng) {
  const ChannelSpec& spec = proc.spec();
  if (x.cols() != spec.n_tx) {
    throw DimensionError("apply_channel: input has " + std::to_string(x.cols()) +
                         " columns, channel has " + std::to_string(spec.n_tx) +
                         " transmit antennas");
  }
  const double noise_var = noise_variance(snr_db);
  ChannelOutput out{{ComplexMatrix(x.rows(), spec.n_rx), noise_var}, {}};
  out.h.reserve(x.rows());
  for (std::size_t row = 0; row < x.rows(); ++row) {
    ComplexMatrix h = proc.next();
    const std::span<const Complex> xs = x.row(row);
    for (std::size_t r = 0; r < spec.n_rx; ++r) {
      Complex acc{};
      for (std::size_t t = 0; t < spec.n_tx; ++t) acc += h(r, t) * xs[t];
      if (noise_var > 0.0) acc += noise_rng.complex_gaussian(noise_var);
      out.signal.samples(row, r) = acc;
    }
    out.h.push_back(std::move(h));
  }
  return out;
}

}  // namespace mimosim
