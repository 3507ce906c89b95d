#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mimosim/fading.hpp"
#include "mimosim/sim.hpp"

namespace mimosim {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Every field of the config as ordered key/value pairs, plus the SNR
/// convention and RNG algorithm.
KeyValues config_echo(const SimConfig& config);

inline constexpr std::string_view kCsvHeader =
    "x,frames,frame_errors,fer,fer_ci_lo,fer_ci_hi,bits,bit_errors,ber,ber_ci_lo,ber_ci_hi";

/// `# key=value` comment lines, the header row, then one row per sweep point.
/// Reals use %.6g; lines end in LF.
std::string emit_csv(const SimResult& result, const SimConfig& config);

struct ParsedCsv {
  KeyValues comments;
  /// elapsed_s is not stored in the CSV and parses as 0.
  std::vector<PointResult> points;
};

/// Inverse of emit_csv. Throws ConfigError on malformed input.
ParsedCsv parse_csv(std::string_view text);

/// gnuplot script plotting FER (or BER for ber-vs-snr) with CI error bars
/// from csv_path.
std::string emit_plot_script(const SimConfig& config, std::string_view csv_path);

/// Envelope statistics as CSV: echo comments, a summary block, then lags.
std::string emit_envelope_csv(const EnvelopeStats& stats, const FadingSpec& spec,
                              std::uint64_t master_seed, std::size_t n_samples);

/// gnuplot script for the autocorrelation section of emit_envelope_csv.
std::string emit_envelope_plot_script(std::string_view csv_path);

/// printf("%.6g").
std::string format_real(double v);

}  // namespace mimosim
