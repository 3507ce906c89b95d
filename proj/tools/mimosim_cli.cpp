// mimosim: command-line front end for the link-level MIMO simulator.

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mimosim/channel.hpp"
#include "mimosim/error.hpp"
#include "mimosim/fading.hpp"
#include "mimosim/report.hpp"
#include "mimosim/rng.hpp"
#include "mimosim/sim.hpp"

namespace {

using namespace mimosim;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

// Experiment id for the validate-fading stream; distinct from the Experiment enum.
constexpr std::uint64_t kValidateFadingId = 100;

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("not a number: '" + text + "'");
  return v;
}

// "start:step:stop", "a,b,c" or a single value.
std::vector<double> parse_sweep(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = text.find(':', start);
      parts.push_back(text.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (parts.size() != 3) throw ConfigError("range must be start:step:stop, got '" + text + "'");
    const double lo = parse_number(parts[0]);
    const double step = parse_number(parts[1]);
    const double hi = parse_number(parts[2]);
    if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("range needs step > 0 and stop >= start");
    const double n = std::floor((hi - lo) / step + 1e-9);
    if (n > 1e5) throw ConfigError("range has too many points");
    for (int i = 0; i <= static_cast<int>(n); ++i) out.push_back(lo + step * i);
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    out.push_back(parse_number(text.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

struct CommonOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out;
  std::string plot_script;
};

struct FadingOptions {
  std::string model = "rayleigh";
  double k = 4.0;
  double doppler_hz = 100.0;
  double los_doppler_hz = 0.0;
  double sample_rate_hz = 1.0e4;
  std::size_t sinusoids = 16;
};

struct ChannelOptions {
  std::size_t nt = 4;
  std::size_t nr = 4;
  std::string tx_corr = "low";
  std::string rx_corr = "low";
};

struct RunLimits {
  std::size_t frame_bits = 120;
  std::size_t max_frames = 100000;
  std::size_t target_errors = 200;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app->add_option("--workers", o.workers, "Worker threads (output does not depend on it)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--out", o.out, "Output CSV path (default: stdout)");
  app->add_option("--plot-script", o.plot_script, "Also write a gnuplot script here");
}

void add_fading(CLI::App* app, FadingOptions& o) {
  app->add_option("--fading", o.model, "rayleigh or rician")->capture_default_str();
  app->add_option("--k", o.k, "Rician K factor (linear)")->capture_default_str();
  app->add_option("--los-doppler-hz", o.los_doppler_hz, "Doppler shift of the LOS path")
      ->capture_default_str();
  app->add_option("--sinusoids", o.sinusoids, "Sinusoids per quadrature branch")
      ->capture_default_str();
}

void add_channel(CLI::App* app, ChannelOptions& o) {
  app->add_option("--nt", o.nt, "Transmit antennas")->capture_default_str();
  app->add_option("--nr", o.nr, "Receive antennas")->capture_default_str();
  app->add_option("--tx-corr", o.tx_corr, "none, low, medium, high or rho")->capture_default_str();
  app->add_option("--rx-corr", o.rx_corr, "none, low, medium, high or rho")->capture_default_str();
}

void add_limits(CLI::App* app, RunLimits& o) {
  app->add_option("--frame-bits", o.frame_bits, "Information bits per frame")->capture_default_str();
  app->add_option("--max-frames", o.max_frames, "Frame cap per sweep point")->capture_default_str();
  app->add_option("--target-errors", o.target_errors, "Frame errors that end a sweep point")
      ->capture_default_str();
}

FadingSpec make_fading(const FadingOptions& o) {
  FadingSpec f;
  f.model = parse_fading_model(o.model);
  f.k_factor = f.model == FadingModel::Rician ? o.k : 0.0;
  f.max_doppler_hz = o.doppler_hz;
  f.los_doppler_hz = o.los_doppler_hz;
  f.sample_rate_hz = o.sample_rate_hz;
  f.num_sinusoids = o.sinusoids;
  return f;
}

ChannelSpec make_channel(const ChannelOptions& c, const FadingOptions& f) {
  ChannelSpec spec;
  spec.n_tx = c.nt;
  spec.n_rx = c.nr;
  spec.tx_correlation = parse_correlation(c.tx_corr);
  spec.rx_correlation = parse_correlation(c.rx_corr);
  spec.fading = make_fading(f);
  return spec;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

void run_and_emit(const SimConfig& config, const CommonOptions& common) {
  config.validate();
  const SimResult result = run_experiment(config, RunOptions{common.workers});
  write_text(common.out, emit_csv(result, config));
  if (!common.plot_script.empty()) {
    const std::string csv = common.out.empty() ? "data.csv" : common.out;
    write_text(common.plot_script, emit_plot_script(config, csv));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level MIMO simulator: OSTBC over Rayleigh/Rician fading, ZF/MMSE/ML detection"};
  app.require_subcommand(1);

  CommonOptions common;
  FadingOptions fading;
  ChannelOptions channel;
  RunLimits limits;
  std::string code = "4x3/4";
  double snr_db = 10.0;
  std::string gain_sweep = "-20:2:0";
  double gain_db = -6.0;
  std::string doppler_sweep = "25,50,100";
  std::string rates =
      "100000,200000,500000,1000000,2000000,5000000,10000000";
  std::string snr_sweep = "0:2:20";
  std::string detector = "mmse";
  std::size_t samples = 1000000;

  auto* gain = app.add_subcommand("fer-vs-gain", "FER of an OSTBC link against path gain");
  auto* doppler = app.add_subcommand("fer-vs-doppler", "FER of an OSTBC link against maximum Doppler");
  auto* samplerate = app.add_subcommand("fer-vs-samplerate", "FER of an OSTBC link against sample rate");
  auto* ber = app.add_subcommand("ber-vs-snr", "BER of 4x4 uncoded QPSK spatial multiplexing against SNR");
  auto* validate = app.add_subcommand("validate-fading", "Compare generated fading with theory");

  for (auto* sub : {gain, doppler, samplerate}) {
    add_common(sub, common);
    add_fading(sub, fading);
    add_channel(sub, channel);
    add_limits(sub, limits);
    sub->add_option("--code", code, "OSTBC as <n_tx>x<rate>: 2x1, 3x1/2, 3x3/4, 4x1/2, 4x3/4")
        ->capture_default_str();
    sub->add_option("--snr-db", snr_db, "SNR in dB ('inf' disables noise)")->capture_default_str();
  }
  gain->add_option("--gain-db", gain_sweep, "Path gain sweep start:step:stop (dB)")->capture_default_str();
  gain->add_option("--doppler-hz", fading.doppler_hz, "Maximum Doppler (Hz)")->capture_default_str();
  gain->add_option("--sample-rate-hz", fading.sample_rate_hz, "Channel uses per second")->capture_default_str();

  doppler->add_option("--doppler-hz", doppler_sweep, "Maximum Doppler sweep (Hz), list or range")
      ->capture_default_str();
  doppler->add_option("--gain-db", gain_db, "Path gain (dB)")->capture_default_str();
  doppler->add_option("--sample-rate-hz", fading.sample_rate_hz, "Channel uses per second")->capture_default_str();

  samplerate->add_option("--rates", rates, "Sample rate sweep (Hz), list or range")->capture_default_str();
  samplerate->add_option("--doppler-hz", fading.doppler_hz, "Maximum Doppler (Hz)")->capture_default_str();
  samplerate->add_option("--gain-db", gain_db, "Path gain (dB)")->capture_default_str();

  add_common(ber, common);
  add_limits(ber, limits);
  ber->add_option("--detector", detector, "zf, mmse or ml")->capture_default_str();
  ber->add_option("--snr-db", snr_sweep, "SNR sweep start:step:stop (dB)")->capture_default_str();
  ber->add_option("--nt", channel.nt, "Transmit antennas")->capture_default_str();
  ber->add_option("--nr", channel.nr, "Receive antennas")->capture_default_str();
  ber->add_option("--tx-corr", channel.tx_corr, "none, low, medium, high or rho");
  ber->add_option("--rx-corr", channel.rx_corr, "none, low, medium, high or rho");

  add_common(validate, common);
  add_fading(validate, fading);
  validate->add_option("--doppler-hz", fading.doppler_hz, "Maximum Doppler (Hz)")->capture_default_str();
  validate->add_option("--sample-rate-hz", fading.sample_rate_hz, "Samples per second")->capture_default_str();
  validate->add_option("--samples", samples, "Number of samples (>= 100000)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code_from_cli = app.exit(e);
    return code_from_cli == 0 ? 0 : kExitConfig;
  }

  try {
    SimConfig config;
    config.master_seed = common.seed;
    config.frame_bits = limits.frame_bits;
    config.max_frames = limits.max_frames;
    config.target_frame_errors = limits.target_errors;

    if (*validate) {
      const FadingSpec spec = make_fading(fading);
      spec.validate();
      RngStream rng(common.seed, make_stream_id(kValidateFadingId, 0));
      FadingProcess proc(spec, rng);
      const EnvelopeStats stats = validate_process(proc, samples);
      write_text(common.out, emit_envelope_csv(stats, spec, common.seed, samples));
      if (!common.plot_script.empty()) {
        write_text(common.plot_script,
                   emit_envelope_plot_script(common.out.empty() ? "data.csv" : common.out));
      }
      return 0;
    }

    if (*ber) {
      // Figure-7 style link: i.i.d. Rayleigh unless a correlation is given.
      if (ber->count("--tx-corr") == 0) channel.tx_corr = "none";
      if (ber->count("--rx-corr") == 0) channel.rx_corr = "none";
      fading.model = "rayleigh";
      config.experiment = Experiment::BerVsSnr;
      config.channel = make_channel(channel, fading);
      config.code.reset();
      config.detector = parse_detector(detector);
      config.sweep = parse_sweep(snr_sweep);
      config.snr_db = config.sweep.front();
      run_and_emit(config, common);
      return 0;
    }

    config.code = parse_code_choice(code);
    config.snr_db = snr_db;
    if (*gain) {
      config.experiment = Experiment::FerVsGain;
      config.channel = make_channel(channel, fading);
      config.sweep = parse_sweep(gain_sweep);
      config.channel.path_gain_db = config.sweep.front();
    } else if (*doppler) {
      config.experiment = Experiment::FerVsDoppler;
      config.sweep = parse_sweep(doppler_sweep);
      fading.doppler_hz = config.sweep.front();
      config.channel = make_channel(channel, fading);
      config.channel.path_gain_db = gain_db;
    } else {
      config.experiment = Experiment::FerVsSampleRate;
      config.sweep = parse_sweep(rates);
      fading.sample_rate_hz = config.sweep.front();
      config.channel = make_channel(channel, fading);
      config.channel.path_gain_db = gain_db;
    }
    run_and_emit(config, common);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "mimosim: invalid configuration: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mimosim: %s\n", e.what());
    return kExitRuntime;
  }
}
