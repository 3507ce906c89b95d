#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mimosim/modem.hpp"
#include "mimosim/numerics.hpp"

namespace mimosim {

struct CodeRate {
  int num = 1;
  int den = 1;
  double value() const noexcept { return static_cast<double>(num) / den; }
  bool operator==(const CodeRate&) const = default;
};

/// "1", "1/2" or "3/4".
CodeRate parse_rate(std::string_view text);
std::string to_string(CodeRate rate);

/// Transmit-antenna count and rate, written "<n_tx>x<rate>", e.g. "4x3/4".
struct CodeChoice {
  std::size_t n_tx = 4;
  CodeRate rate{3, 4};
  bool operator==(const CodeChoice&) const = default;
};
CodeChoice parse_code_choice(std::string_view text);
std::string to_string(const CodeChoice& choice);

/// Orthogonal space-time block code in dispersion form. A block of k symbols
/// s_i = a_i + j b_i maps to the T x N_t matrix
///
///   X(s) = sum_i (A_i a_i + j B_i b_i),
///
/// with the A_i, B_i scaled so that X(s)^H X(s) = (sum |s_i|^2) I.
class OstbcCode {
 public:
  std::size_t n_tx() const noexcept { return n_tx_; }
  CodeRate rate() const noexcept { return rate_; }
  std::size_t symbols_per_block() const noexcept { return dispersion_a_.size(); }
  std::size_t rows_per_block() const noexcept { return rows_; }
  std::span<const ComplexMatrix> dispersion_a() const noexcept { return dispersion_a_; }
  std::span<const ComplexMatrix> dispersion_b() const noexcept { return dispersion_b_; }
  const std::string& name() const noexcept { return name_; }

  /// X(s) for one block, without the 1/sqrt(N_t) transmit scaling.
  ComplexMatrix codeword(std::span<const Complex> symbols) const;

 private:
  friend OstbcCode ostbc_code(std::size_t n_tx, CodeRate rate);
  OstbcCode() = default;

  std::size_t n_tx_ = 0;
  std::size_t rows_ = 0;
  CodeRate rate_{};
  std::string name_;
  std::vector<ComplexMatrix> dispersion_a_;
  std::vector<ComplexMatrix> dispersion_b_;
};

/// One of the five supported designs:
///   (2, 1)   Alamouti            k=2 T=2
///   (3, 1/2) G3                  k=4 T=8
///   (3, 3/4) H3                  k=3 T=4
///   (4, 1/2) G4                  k=4 T=8
///   (4, 3/4) H4                  k=3 T=4
/// Throws ConfigError for any other pair.
OstbcCode ostbc_code(std::size_t n_tx, CodeRate rate);
inline OstbcCode ostbc_code(const CodeChoice& choice) { return ostbc_code(choice.n_tx, choice.rate); }

struct CodewordBlock {
  /// T x N_t, including the 1/sqrt(N_t) per-antenna scaling.
  ComplexMatrix matrix;
  SymbolBlock source_symbols;
};

/// Encodes consecutive groups of k symbols. Throws ConfigError when the
/// length is not a multiple of k.
std::vector<CodewordBlock> ostbc_encode(const OstbcCode& code, std::span<const Complex> symbols);

/// Concatenates codeword blocks in time: (blocks * T) x N_t.
ComplexMatrix stack_blocks(std::span<const CodewordBlock> blocks);

/// Linear combiner for one block. `y` is T x N_r (rows are channel uses),
/// `h` the N_r x N_t channel assumed constant over the block. Returns k
/// estimates scaled so a noiseless block-constant channel returns the
/// transmitted symbols. Zero channel gives zero estimates.
SymbolBlock ostbc_combine(const OstbcCode& code, const ComplexMatrix& y, const ComplexMatrix& h);

}  // namespace mimosim
