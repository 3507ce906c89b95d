#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mimosim/modem.hpp"
#include "mimosim/numerics.hpp"

namespace mimosim {

enum class DetectorKind { ZF, MMSE, ML };

std::string_view to_string(DetectorKind kind) noexcept;
/// "zf", "mmse" or "ml".
DetectorKind parse_detector(std::string_view text);

// Spatial-multiplexing detectors for y = H x + w with H N_r x N_t, N_r >= N_t.
// The transmitter sends unit-energy QPSK symbols at 1/sqrt(N_t) amplitude per
// antenna, so the linear estimates below are estimates of s / sqrt(N_t).
// Hard decisions are quadrant decisions and map back to the unit-energy
// constellation.

/// (H^H H)^{-1} H^H y. Throws DetectionFailure if H^H H is singular.
std::vector<Complex> zf_estimate(const ComplexMatrix& h, std::span<const Complex> y);

/// (H^H H + noise_var N_t I)^{-1} H^H y.
std::vector<Complex> mmse_estimate(const ComplexMatrix& h, std::span<const Complex> y,
                                   double noise_var);

/// Quadrant decision per stream, returning unit-energy QPSK symbols.
SymbolBlock slice_qpsk(std::span<const Complex> estimate);

SymbolBlock zf_detect(const ComplexMatrix& h, std::span<const Complex> y);
SymbolBlock mmse_detect(const ComplexMatrix& h, std::span<const Complex> y, double noise_var);

/// Largest hypothesis count ml_detect will enumerate.
inline constexpr std::size_t kMaxMlHypotheses = 1'000'000;

/// Index of the hypothesis minimizing ||y - H x||^2 over x in
/// constellation^{N_t}. Hypothesis index = sum_n c_n |C|^(N_t - 1 - n), where
/// c_n indexes the symbol on antenna n; ties keep the smallest index.
/// Throws ConfigError when |C|^N_t exceeds kMaxMlHypotheses.
std::size_t ml_detect_index(const ComplexMatrix& h, std::span<const Complex> y,
                            std::span<const Complex> constellation);

/// ml_detect_index expanded into the per-antenna constellation points.
SymbolBlock ml_detect(const ComplexMatrix& h, std::span<const Complex> y,
                      std::span<const Complex> constellation);

}  // namespace mimosim
