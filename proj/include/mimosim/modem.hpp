#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mimosim/numerics.hpp"
#include "mimosim/rng.hpp"

namespace mimosim {

using Bit = std::uint8_t;
using BitBlock = std::vector<Bit>;
using SymbolBlock = std::vector<Complex>;

/// n i.i.d. bits with P(1) = p_one. Consumes one uniform per bit.
BitBlock bernoulli_bits(std::size_t n, double p_one, RngStream& rng);

/// Gray-mapped unit-energy QPSK. The label of a symbol is the bit pair
/// (b0 b1) read as a 2-bit number:
///
///   00 -> (+1 + j)/sqrt2    01 -> (-1 + j)/sqrt2
///   11 -> (-1 - j)/sqrt2    10 -> (+1 - j)/sqrt2
///
/// b0 selects the sign of the imaginary part, b1 the sign of the real part.
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline const std::array<Complex, 4> kQpskConstellation = {
    Complex{kInvSqrt2, kInvSqrt2}, Complex{-kInvSqrt2, kInvSqrt2},
    Complex{kInvSqrt2, -kInvSqrt2}, Complex{-kInvSqrt2, -kInvSqrt2}};

/// Nearest QPSK label. Each bit is 1 only when its component is strictly
/// negative, so ties on an axis resolve to the smaller label.
inline unsigned qpsk_decide(Complex s) noexcept {
  return (s.imag() < 0.0 ? 2u : 0u) | (s.real() < 0.0 ? 1u : 0u);
}

/// Even-length bits to bits.size()/2 symbols. Throws ConfigError on odd length.
SymbolBlock qpsk_modulate(std::span<const Bit> bits);

/// Hard-decision inverse of qpsk_modulate (quadrant decision).
BitBlock qpsk_demodulate(std::span<const Complex> symbols);

/// Number of positions where a and b differ; sizes must match.
std::size_t count_bit_errors(std::span<const Bit> a, std::span<const Bit> b);

}  // namespace mimosim
