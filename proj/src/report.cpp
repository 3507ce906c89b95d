#include "mimosim/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "mimosim/error.hpp"

namespace mimosim {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

// Shortest text that reads back to the same double.
std::string exact_real(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string join_reals(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += exact_real(values[i]);
  }
  return out;
}

void append_fading(KeyValues& kv, const FadingSpec& f) {
  kv.emplace_back("fading", std::string(to_string(f.model)));
  kv.emplace_back("k_factor", exact_real(f.k_factor));
  kv.emplace_back("max_doppler_hz", exact_real(f.max_doppler_hz));
  kv.emplace_back("los_doppler_hz", exact_real(f.los_doppler_hz));
  kv.emplace_back("los_phase_rad", exact_real(f.los_phase_rad));
  kv.emplace_back("sample_rate_hz", exact_real(f.sample_rate_hz));
  kv.emplace_back("num_sinusoids", std::to_string(f.num_sinusoids));
}

std::string swept_parameter(Experiment e) {
  switch (e) {
    case Experiment::FerVsGain:
      return "path_gain_db";
    case Experiment::FerVsDoppler:
      return "max_doppler_hz";
    case Experiment::FerVsSampleRate:
      return "sample_rate_hz";
    case Experiment::BerVsSnr:
      return "snr_db";
  }
  return "x";
}

void write_comments(std::string& out, const KeyValues& kv) {
  for (const auto& [key, value] : kv) out += "# " + key + "=" + value + "\n";
}

}  // namespace

KeyValues config_echo(const SimConfig& c) {
  KeyValues kv;
  kv.emplace_back("experiment", std::string(to_string(c.experiment)));
  kv.emplace_back("x", swept_parameter(c.experiment));
  kv.emplace_back("sweep", join_reals(c.sweep));
  kv.emplace_back("n_tx", std::to_string(c.channel.n_tx));
  kv.emplace_back("n_rx", std::to_string(c.channel.n_rx));
  append_fading(kv, c.channel.fading);
  kv.emplace_back("tx_correlation", exact_real(c.channel.tx_correlation));
  kv.emplace_back("rx_correlation", exact_real(c.channel.rx_correlation));
  kv.emplace_back("path_gain_db", exact_real(c.channel.path_gain_db));
  kv.emplace_back("code", c.code ? to_string(*c.code) : "none");
  kv.emplace_back("detector", c.detector ? std::string(to_string(*c.detector)) : "none");
  kv.emplace_back("frame_bits", std::to_string(c.frame_bits));
  kv.emplace_back("snr_db", exact_real(c.snr_db));
  kv.emplace_back("snr_definition", "total transmit power 1 over noise variance per receive antenna");
  kv.emplace_back("max_frames", std::to_string(c.max_frames));
  kv.emplace_back("target_frame_errors", std::to_string(c.target_frame_errors));
  kv.emplace_back("master_seed", std::to_string(c.master_seed));
  kv.emplace_back("rng", std::string(RngStream::kAlgorithm));
  return kv;
}

std::string emit_csv(const SimResult& result, const SimConfig& config) {
  std::string out;
  write_comments(out, config_echo(config));
  out += kCsvHeader;
  out += '\n';
  for (const PointResult& p : result.points) {
    out += format_real(p.x) + ',' + std::to_string(p.frames) + ',' +
           std::to_string(p.frame_errors) + ',' + format_real(p.fer) + ',' +
           format_real(p.ci95_fer.lo) + ',' + format_real(p.ci95_fer.hi) + ',' +
           std::to_string(p.bits) + ',' + std::to_string(p.bit_errors) + ',' +
           format_real(p.ber) + ',' + format_real(p.ci95_ber.lo) + ',' +
           format_real(p.ci95_ber.hi) + '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_count(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("csv: bad count '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s) {
  const std::string text(s);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ConfigError("csv: bad number '" + text + "'");
  }
  return v;
}

}  // namespace

ParsedCsv parse_csv(std::string_view text) {
  ParsedCsv parsed;
  bool header_seen = false;
  for (std::string_view line : split(text, '\n')) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError("csv: comment without '='");
      parsed.comments.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) throw ConfigError("csv: unexpected header '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 11) throw ConfigError("csv: expected 11 fields, got " + std::to_string(f.size()));
    PointResult p;
    p.x = parse_real(f[0]);
    p.frames = parse_count(f[1]);
    p.frame_errors = parse_count(f[2]);
    p.fer = parse_real(f[3]);
    p.ci95_fer = {parse_real(f[4]), parse_real(f[5])};
    p.bits = parse_count(f[6]);
    p.bit_errors = parse_count(f[7]);
    p.ber = parse_real(f[8]);
    p.ci95_ber = {parse_real(f[9]), parse_real(f[10])};
    parsed.points.push_back(p);
  }
  if (!header_seen) throw ConfigError("csv: missing header row");
  return parsed;
}

std::string emit_plot_script(const SimConfig& config, std::string_view csv_path) {
  const bool ber = config.experiment == Experiment::BerVsSnr;
  std::string xlabel;
  switch (config.experiment) {
    case Experiment::FerVsGain:
      xlabel = "path gain (dB)";
      break;
    case Experiment::FerVsDoppler:
      xlabel = "maximum Doppler (Hz)";
      break;
    case Experiment::FerVsSampleRate:
      xlabel = "sample rate (Hz)";
      break;
    case Experiment::BerVsSnr:
      xlabel = "SNR (dB)";
      break;
  }
  std::string out;
  out += "set datafile separator ','\n";
  out += "set key autotitle columnheader\n";
  out += "set logscale y\n";
  if (config.experiment == Experiment::FerVsSampleRate) out += "set logscale x\n";
  out += "set grid\n";
  out += "set xlabel '" + xlabel + "'\n";
  out += ber ? "set ylabel 'BER'\n" : "set ylabel 'FER'\n";
  out += "set title '" + std::string(to_string(config.experiment)) + "'\n";
  const std::string cols = ber ? "1:9:10:11" : "1:4:5:6";
  out += "plot '" + std::string(csv_path) + "' using " + cols +
         " with yerrorlines title '" + (ber ? "BER" : "FER") + "'\n";
  return out;
}

std::string emit_envelope_csv(const EnvelopeStats& stats, const FadingSpec& spec,
                              std::uint64_t master_seed, std::size_t n_samples) {
  KeyValues kv;
  kv.emplace_back("experiment", "validate-fading");
  append_fading(kv, spec);
  kv.emplace_back("samples", std::to_string(n_samples));
  kv.emplace_back("master_seed", std::to_string(master_seed));
  kv.emplace_back("rng", std::string(RngStream::kAlgorithm));
  kv.emplace_back("ks_statistic", format_real(stats.ks_statistic));
  kv.emplace_back("empirical_mean_power", format_real(stats.empirical_mean_power));
  kv.emplace_back("autocorr_rmse", format_real(stats.autocorr_rmse(spec.max_doppler_hz)));
  std::string out;
  write_comments(out, kv);
  out += "lag_s,tau_fd,empirical,theoretical\n";
  for (const AutocorrLag& lag : stats.autocorr_lags) {
    out += format_real(lag.lag_s) + ',' + format_real(lag.lag_s * spec.max_doppler_hz) + ',' +
           format_real(lag.empirical) + ',' + format_real(lag.theoretical) + '\n';
  }
  return out;
}

std::string emit_envelope_plot_script(std::string_view csv_path) {
  std::string out;
  out += "set datafile separator ','\n";
  out += "set key autotitle columnheader\n";
  out += "set grid\n";
  out += "set xlabel 'tau f_d'\n";
  out += "set ylabel 'normalized autocorrelation'\n";
  out += "plot '" + std::string(csv_path) + "' using 2:3 with points, '' using 2:4 with lines\n";
  return out;
}

}  // namespace mimosim
