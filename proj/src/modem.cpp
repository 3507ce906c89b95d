#include "mimosim/modem.hpp"

#include <string>

#include "mimosim/error.hpp"

namespace mimosim {

BitBlock bernoulli_bits(std::size_t n, double p_one, RngStream& rng) {
  if (!(p_one >= 0.0 && p_one <= 1.0)) {
    throw DomainError("bernoulli_bits: p_one must lie in [0, 1]");
  }
  BitBlock bits(n);
  for (auto& b : bits) b = rng.uniform() < p_one ? 1 : 0;
  return bits;
}

SymbolBlock qpsk_modulate(std::span<const Bit> bits) {
  if (bits.size() % 2 != 0) {
    throw ConfigError("qpsk_modulate: odd bit count " + std::to_string(bits.size()));
  }
  SymbolBlock symbols(bits.size() / 2);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const unsigned label = (bits[2 * i] ? 2u : 0u) | (bits[2 * i + 1] ? 1u : 0u);
    symbols[i] = kQpskConstellation[label];
  }
  return symbols;
}

BitBlock qpsk_demodulate(std::span<const Complex> symbols) {
  BitBlock bits(2 * symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const unsigned label = qpsk_decide(symbols[i]);
    bits[2 * i] = (label >> 1) & 1u;
    bits[2 * i + 1] = label & 1u;
  }
  return bits;
}

std::size_t count_bit_errors(std::span<const Bit> a, std::span<const Bit> b) {
  if (a.size() != b.size()) throw DimensionError("count_bit_errors: length mismatch");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < a.size(); ++i) errors += (a[i] != b[i]) ? 1 : 0;
  return errors;
}

}  // namespace mimosim
