#include "mimosim/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "mimosim/error.hpp"
#include "mimosim/modem.hpp"

namespace mimosim {

std::string_view to_string(Experiment experiment) noexcept {
  switch (experiment) {
    case Experiment::FerVsGain:
      return "fer-vs-gain";
    case Experiment::FerVsDoppler:
      return "fer-vs-doppler";
    case Experiment::FerVsSampleRate:
      return "fer-vs-samplerate";
    case Experiment::BerVsSnr:
      return "ber-vs-snr";
  }
  return "?";
}

SimConfig SimConfig::at(double x) const {
  SimConfig point = *this;
  switch (experiment) {
    case Experiment::FerVsGain:
      point.channel.path_gain_db = x;
      break;
    case Experiment::FerVsDoppler:
      point.channel.fading.max_doppler_hz = x;
      break;
    case Experiment::FerVsSampleRate:
      point.channel.fading.sample_rate_hz = x;
      break;
    case Experiment::BerVsSnr:
      point.snr_db = x;
      break;
  }
  return point;
}

namespace {

void validate_point(const SimConfig& c) {
  c.channel.validate();
  if (std::isnan(c.snr_db)) throw ConfigError("snr_db is NaN");
  if (c.frame_bits == 0 || c.frame_bits % 2 != 0) {
    throw ConfigError("frame_bits must be positive and even");
  }
  if (c.experiment == Experiment::BerVsSnr) {
    if (!c.detector) throw ConfigError("ber-vs-snr needs a detector");
    if (c.channel.n_rx < c.channel.n_tx) throw ConfigError("spatial multiplexing needs n_rx >= n_tx");
    const std::size_t per_vector = 2 * c.channel.n_tx;
    if (c.frame_bits % per_vector != 0) {
      throw ConfigError("frame_bits must be a multiple of 2 * n_tx = " + std::to_string(per_vector));
    }
  } else {
    if (!c.code) throw ConfigError(std::string(to_string(c.experiment)) + " needs an OSTBC code");
    const OstbcCode code = ostbc_code(*c.code);
    if (code.n_tx() != c.channel.n_tx) {
      throw ConfigError("code " + to_string(*c.code) + " needs n_tx=" +
                        std::to_string(code.n_tx()) + ", channel has " +
                        std::to_string(c.channel.n_tx));
    }
    const std::size_t per_block = 2 * code.symbols_per_block();
    if (c.frame_bits % per_block != 0) {
      throw ConfigError("frame_bits must be a multiple of 2k = " + std::to_string(per_block));
    }
  }
}

}  // namespace

void SimConfig::validate() const {
  if (sweep.empty()) throw ConfigError("sweep must not be empty");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!std::isfinite(sweep[i])) throw ConfigError("sweep values must be finite");
    if (i > 0 && !(sweep[i] > sweep[i - 1])) throw ConfigError("sweep must be strictly increasing");
  }
  if (max_frames < 1) throw ConfigError("max_frames must be at least 1");
  if (target_frame_errors < 1) throw ConfigError("target_frame_errors must be at least 1");
  validate_point(*this);
  for (double x : sweep) validate_point(at(x));
}

RngStream trial_stream(const SimConfig& config, std::uint64_t trial_index) {
  return RngStream(config.master_seed,
                   make_stream_id(static_cast<std::uint64_t>(config.experiment), trial_index));
}

namespace {

FrameOutcome run_ostbc_frame(const SimConfig& config, std::uint64_t trial_index) {
  const RngStream root = trial_stream(config, trial_index);
  RngStream bit_rng = root.derive(kBitStreamTag);
  RngStream noise_rng = root.derive(kNoiseStreamTag);

  const OstbcCode code = ostbc_code(*config.code);
  const BitBlock bits = bernoulli_bits(config.frame_bits, 0.5, bit_rng);
  const SymbolBlock symbols = qpsk_modulate(bits);
  const std::vector<CodewordBlock> blocks = ostbc_encode(code, symbols);
  const ComplexMatrix x = stack_blocks(blocks);

  ChannelProcess channel(config.channel, root.derive(kChannelStreamTag));
  const ChannelOutput rx = apply_channel(channel, x, config.snr_db, noise_rng);

  const std::size_t t = code.rows_per_block();
  const std::size_t n_rx = config.channel.n_rx;
  SymbolBlock estimates;
  estimates.reserve(symbols.size());
  ComplexMatrix y_block(t, n_rx);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t row = 0; row < t; ++row) {
      const auto src = rx.signal.samples.row(b * t + row);
      std::copy(src.begin(), src.end(), y_block.row(row).begin());
    }
    // The combiner only knows the channel at the block's first channel use.
    const SymbolBlock s_hat = ostbc_combine(code, y_block, rx.h[b * t]);
    estimates.insert(estimates.end(), s_hat.begin(), s_hat.end());
  }

  const BitBlock decided = qpsk_demodulate(estimates);
  FrameOutcome out;
  out.bits = bits.size();
  out.bit_errors = count_bit_errors(bits, decided);
  out.frame_error = out.bit_errors > 0;
  return out;
}

FrameOutcome run_spatial_mux_frame(const SimConfig& config, std::uint64_t trial_index) {
  const RngStream root = trial_stream(config, trial_index);
  RngStream bit_rng = root.derive(kBitStreamTag);
  RngStream channel_rng = root.derive(kChannelStreamTag);
  RngStream noise_rng = root.derive(kNoiseStreamTag);

  const ChannelSpec& spec = config.channel;
  const std::size_t n_tx = spec.n_tx;
  const std::size_t n_rx = spec.n_rx;
  const BitBlock bits = bernoulli_bits(config.frame_bits, 0.5, bit_rng);
  const SymbolBlock symbols = qpsk_modulate(bits);

  const bool correlated = spec.tx_correlation > 0.0 || spec.rx_correlation > 0.0;
  const ComplexMatrix rt = psd_sqrt(correlation_matrix(n_tx, spec.tx_correlation));
  const ComplexMatrix rr = psd_sqrt(correlation_matrix(n_rx, spec.rx_correlation));
  const double gain = spec.amplitude_gain();
  const double noise_var = noise_variance(config.snr_db);
  const double tx_scale = 1.0 / std::sqrt(static_cast<double>(n_tx));

  std::array<Complex, 4> scaled_constellation{};
  for (std::size_t c = 0; c < 4; ++c) scaled_constellation[c] = kQpskConstellation[c] * tx_scale;

  FrameOutcome out;
  out.bits = bits.size();
  SymbolBlock tx(n_tx);
  std::vector<Complex> y(n_rx);
  for (std::size_t v = 0; v * n_tx < symbols.size(); ++v) {
    ComplexMatrix h(n_rx, n_tx);
    for (auto& e : h.data()) e = channel_rng.complex_gaussian(1.0);
    if (correlated) h = rr * h * rt;
    if (gain != 1.0) h *= gain;

    for (std::size_t n = 0; n < n_tx; ++n) tx[n] = symbols[v * n_tx + n] * tx_scale;
    for (std::size_t r = 0; r < n_rx; ++r) {
      Complex acc{};
      for (std::size_t n = 0; n < n_tx; ++n) acc += h(r, n) * tx[n];
      if (noise_var > 0.0) acc += noise_rng.complex_gaussian(noise_var);
      y[r] = acc;
    }

    const std::span<const Bit> sent(bits.data() + 2 * v * n_tx, 2 * n_tx);
    try {
      SymbolBlock decided;
      switch (*config.detector) {
        case DetectorKind::ZF:
          decided = zf_detect(h, y);
          break;
        case DetectorKind::MMSE:
          decided = mmse_detect(h, y, noise_var);
          break;
        case DetectorKind::ML:
          decided = ml_detect(h, y, scaled_constellation);
          break;
      }
      out.bit_errors += count_bit_errors(sent, qpsk_demodulate(decided));
    } catch (const DetectionFailure&) {
      out.bit_errors += sent.size();
    }
  }
  out.frame_error = out.bit_errors > 0;
  return out;
}

}  // namespace

FrameOutcome run_frame(const SimConfig& config, std::uint64_t trial_index) {
  validate_point(config);
  if (config.experiment == Experiment::BerVsSnr) return run_spatial_mux_frame(config, trial_index);
  return run_ostbc_frame(config, trial_index);
}

Interval wilson_interval(std::uint64_t errors, std::uint64_t trials) {
  if (trials == 0 || errors > trials) {
    throw DomainError("wilson_interval requires 0 <= errors <= trials and trials >= 1");
  }
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2n = z * z / n;
  const double center = (p + 0.5 * z2n) / (1.0 + z2n);
  const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n);
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (errors == 0) ci.lo = 0.0;
  if (errors == trials) ci.hi = 1.0;
  // Keep the point estimate inside the bounds despite round-off.
  ci.lo = std::min(ci.lo, p);
  ci.hi = std::max(ci.hi, p);
  return ci;
}

namespace {

// Runs trials [first, first + outcomes.size()) split across workers.
void run_batch(const SimConfig& point, std::uint64_t first, std::span<FrameOutcome> outcomes,
               unsigned workers) {
  if (workers <= 1 || outcomes.size() < 2) {
    for (std::size_t i = 0; i < outcomes.size(); ++i) outcomes[i] = run_frame(point, first + i);
    return;
  }
  const std::size_t n = outcomes.size();
  const std::size_t used = std::min<std::size_t>(workers, n);
  std::vector<std::exception_ptr> errors(used);
  {
    std::vector<std::jthread> threads;
    threads.reserve(used);
    for (std::size_t w = 0; w < used; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += used) outcomes[i] = run_frame(point, first + i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SimResult run_experiment(const SimConfig& config, const RunOptions& options) {
  config.validate();
  const unsigned workers = std::max(1u, options.workers);
  const std::size_t batch = workers == 1 ? 64 : 32 * static_cast<std::size_t>(workers);

  SimResult result;
  result.points.reserve(config.sweep.size());
  std::vector<FrameOutcome> outcomes;
  for (double x : config.sweep) {
    const SimConfig point = config.at(x);
    const auto start = std::chrono::steady_clock::now();
    PointResult pr;
    pr.x = x;
    bool done = false;
    std::uint64_t next_trial = 0;
    while (!done) {
      const std::size_t remaining = config.max_frames - pr.frames;
      outcomes.assign(std::min(batch, remaining), FrameOutcome{});
      run_batch(point, next_trial, outcomes, workers);
      next_trial += outcomes.size();
      for (const FrameOutcome& o : outcomes) {
        ++pr.frames;
        pr.bits += o.bits;
        pr.bit_errors += o.bit_errors;
        pr.frame_errors += o.frame_error ? 1 : 0;
        if (pr.frame_errors >= config.target_frame_errors || pr.frames >= config.max_frames) {
          done = true;
          break;
        }
      }
    }
    pr.fer = static_cast<double>(pr.frame_errors) / static_cast<double>(pr.frames);
    pr.ber = static_cast<double>(pr.bit_errors) / static_cast<double>(pr.bits);
    pr.ci95_fer = wilson_interval(pr.frame_errors, pr.frames);
    pr.ci95_ber = wilson_interval(pr.bit_errors, pr.bits);
    pr.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.points.push_back(pr);
  }
  return result;
}

}  // namespace mimosim
