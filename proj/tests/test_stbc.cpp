#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "mimosim/error.hpp"
#include "mimosim/sim.hpp"
#include "mimosim/stbc.hpp"

using namespace mimosim;

namespace {

const std::vector<CodeChoice> kAllCodes = {
    {2, {1, 1}}, {3, {1, 2}}, {3, {3, 4}}, {4, {1, 2}}, {4, {3, 4}}};

// The 4-antenna rate-3/4 design written out entry by entry.
ComplexMatrix h4_literal(const std::vector<Complex>& s) {
  const Complex s1 = s[0], s2 = s[1], s3 = s[2];
  return ComplexMatrix{{s1, s2, s3, 0.0},
                       {-std::conj(s2), std::conj(s1), 0.0, s3},
                       {std::conj(s3), 0.0, -std::conj(s1), s2},
                       {0.0, std::conj(s3), -std::conj(s2), -s1}};
}

}  // namespace

TEST_CASE("ostbc_code table") {
  const OstbcCode alamouti = ostbc_code(2, {1, 1});
  CHECK(alamouti.symbols_per_block() == 2);
  CHECK(alamouti.rows_per_block() == 2);
  const OstbcCode g4 = ostbc_code(4, {1, 2});
  CHECK(g4.symbols_per_block() == 4);
  CHECK(g4.rows_per_block() == 8);
  const OstbcCode h4 = ostbc_code(4, {3, 4});
  CHECK(h4.symbols_per_block() == 3);
  CHECK(h4.rows_per_block() == 4);
  CHECK(ostbc_code(3, {1, 2}).rows_per_block() == 8);
  CHECK(ostbc_code(3, {3, 4}).rows_per_block() == 4);
  for (const CodeChoice& c : kAllCodes) {
    const OstbcCode code = ostbc_code(c);
    CHECK(static_cast<double>(code.symbols_per_block()) / code.rows_per_block() ==
          doctest::Approx(c.rate.value()));
  }
  CHECK_THROWS_AS(ostbc_code(2, {1, 2}), ConfigError);
  CHECK_THROWS_AS(ostbc_code(5, {1, 2}), ConfigError);
}

TEST_CASE("code choice parsing") {
  CHECK(parse_code_choice("4x3/4") == CodeChoice{4, {3, 4}});
  CHECK(parse_code_choice("2x1") == CodeChoice{2, {1, 1}});
  CHECK(to_string(CodeChoice{3, {1, 2}}) == "3x1/2");
  CHECK_THROWS_AS(parse_code_choice("4"), ConfigError);
  CHECK_THROWS_AS(parse_code_choice("2x3/4"), ConfigError);
  CHECK_THROWS_AS(parse_code_choice("ax1"), ConfigError);
}

TEST_CASE("dispersion matrices are orthonormal") {
  for (const CodeChoice& c : kAllCodes) {
    const OstbcCode code = ostbc_code(c);
    const auto a = code.dispersion_a();
    const auto b = code.dispersion_b();
    const ComplexMatrix eye = ComplexMatrix::identity(code.n_tx());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(max_abs_diff(hermitian(a[i]) * a[i], eye) < 1e-12);
      CHECK(max_abs_diff(hermitian(b[i]) * b[i], eye) < 1e-12);
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (i == j) continue;
        CHECK(max_abs_diff(hermitian(a[i]) * a[j] + hermitian(a[j]) * a[i], ComplexMatrix(c.n_tx, c.n_tx)) < 1e-12);
        CHECK(max_abs_diff(hermitian(b[i]) * b[j] + hermitian(b[j]) * b[i], ComplexMatrix(c.n_tx, c.n_tx)) < 1e-12);
      }
      for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(max_abs_diff(hermitian(a[i]) * b[j] - hermitian(b[j]) * a[i], ComplexMatrix(c.n_tx, c.n_tx)) < 1e-12);
      }
    }
  }
}

TEST_CASE("Alamouti encoding") {
  const std::vector<Complex> s{{0.3, -1.2}, {2.0, 0.5}};
  const auto blocks = ostbc_encode(ostbc_code(2, {1, 1}), s);
  REQUIRE(blocks.size() == 1);
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix expected =
      ComplexMatrix{{s[0], s[1]}, {-std::conj(s[1]), std::conj(s[0])}} * Complex(r);
  CHECK(max_abs_diff(blocks[0].matrix, expected) < 1e-15);
  CHECK(blocks[0].source_symbols == s);
}

TEST_CASE("written-out designs") {
  RngStream rng(31, 1);
  const auto s = testutil::random_qpsk(3, rng);
  CHECK(max_abs_diff(ostbc_code(4, {3, 4}).codeword(s), h4_literal(s)) < 1e-15);

  // G4 rows 1 and 5 are (s1 s2 s3 s4) and its conjugate, scaled by 1/sqrt(2).
  const auto s4 = testutil::random_qpsk(4, rng);
  const ComplexMatrix g4 = ostbc_code(4, {1, 2}).codeword(s4);
  for (std::size_t n = 0; n < 4; ++n) {
    CHECK(std::abs(g4(0, n) - s4[n] / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(g4(4, n) - std::conj(s4[n]) / std::sqrt(2.0)) < 1e-15);
  }
}

TEST_CASE("zero symbols encode to zero and zero input combines to zero") {
  for (const CodeChoice& c : kAllCodes) {
    const OstbcCode code = ostbc_code(c);
    const std::vector<Complex> zeros(code.symbols_per_block());
    const auto blocks = ostbc_encode(code, zeros);
    CHECK(frobenius_norm_sq(blocks[0].matrix) == 0.0);
    RngStream rng(32, c.n_tx);
    const ComplexMatrix h = testutil::random_matrix(2, c.n_tx, rng);
    for (const Complex& v : ostbc_combine(code, ComplexMatrix(code.rows_per_block(), 2), h)) CHECK(v == Complex{});
  }
}

TEST_CASE("orthogonality: X^H X is a scaled identity") {
  for (const CodeChoice& c : kAllCodes) {
    const OstbcCode code = ostbc_code(c);
    RngStream rng(33, c.n_tx * 10 + c.rate.den);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<Complex> s(code.symbols_per_block());
      double energy = 0.0;
      for (auto& v : s) {
        v = rng.complex_gaussian(1.0);
        energy += std::norm(v);
      }
      const ComplexMatrix x = ostbc_encode(code, s)[0].matrix;
      const ComplexMatrix expected = ComplexMatrix::identity(code.n_tx()) * Complex(energy / code.n_tx());
      worst = std::max(worst, max_abs_diff(hermitian(x) * x, expected));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("noiseless block-constant channel gives perfect recovery") {
  for (const CodeChoice& c : kAllCodes) {
    const OstbcCode code = ostbc_code(c);
    RngStream rng(34, c.n_tx * 10 + c.rate.den);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n_rx = 1 + rng.next_u64() % 4;
      std::vector<Complex> s(code.symbols_per_block());
      for (auto& v : s) v = rng.complex_gaussian(1.0);
      const ComplexMatrix h = testutil::random_matrix(n_rx, c.n_tx, rng);
      const ComplexMatrix x = ostbc_encode(code, s)[0].matrix;
      const ComplexMatrix y = x * transpose(h);
      const auto est = ostbc_combine(code, y, h);
      for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(est[i] - s[i]));
    }
    CHECK(worst < 1e-9);
  }
  // Orthonormal channel.
  const OstbcCode alamouti = ostbc_code(2, {1, 1});
  const std::vector<Complex> s{{1, 2}, {-0.5, 0.25}};
  const ComplexMatrix x = ostbc_encode(alamouti, s)[0].matrix;
  const auto est = ostbc_combine(alamouti, x, ComplexMatrix::identity(2));
  CHECK(std::abs(est[0] - s[0]) < 1e-12);
  CHECK(std::abs(est[1] - s[1]) < 1e-12);
}

TEST_CASE("rate bookkeeping and block stacking") {
  for (const CodeChoice& c : kAllCodes) {
    const OstbcCode code = ostbc_code(c);
    RngStream rng(35, c.n_tx);
    const auto s = testutil::random_qpsk(code.symbols_per_block() * 5, rng);
    const auto blocks = ostbc_encode(code, s);
    CHECK(blocks.size() == 5);
    const ComplexMatrix stacked = stack_blocks(blocks);
    CHECK(stacked.rows() == 5 * code.rows_per_block());
    CHECK(stacked.cols() == c.n_tx);
    CHECK(stacked(code.rows_per_block(), 0) == blocks[1].matrix(0, 0));
  }
  const std::vector<Complex> two(2);
  CHECK_THROWS_AS(ostbc_encode(ostbc_code(4, {3, 4}), two), ConfigError);
  CHECK_THROWS_AS(ostbc_combine(ostbc_code(2, {1, 1}), ComplexMatrix(3, 1), ComplexMatrix(1, 2)), DimensionError);
}

TEST_CASE("Alamouti 2x1 beats uncoded 1x1 at 10 dB") {
  const OstbcCode code = ostbc_code(2, {1, 1});
  RngStream rng(36, 1);
  const double noise_var = 0.1;
  const std::size_t bits_target = 1000000;
  std::uint64_t err_stbc = 0;
  std::uint64_t err_siso = 0;
  std::uint64_t bits = 0;
  while (bits < bits_target) {
    const BitBlock b = bernoulli_bits(4, 0.5, rng);
    const SymbolBlock s = qpsk_modulate(b);
    // Alamouti over a block-constant 1x2 channel.
    const ComplexMatrix h = testutil::random_matrix(1, 2, rng);
    ComplexMatrix y = ostbc_encode(code, s)[0].matrix * transpose(h);
    for (auto& e : y.data()) e += rng.complex_gaussian(noise_var);
    err_stbc += count_bit_errors(b, qpsk_demodulate(ostbc_combine(code, y, h)));
    // Uncoded single antenna, one fade per symbol.
    SymbolBlock siso(2);
    for (std::size_t i = 0; i < 2; ++i) {
      const Complex g = rng.complex_gaussian(1.0);
      const Complex r = g * s[i] + rng.complex_gaussian(noise_var);
      siso[i] = r / g;
    }
    err_siso += count_bit_errors(b, qpsk_demodulate(siso));
    bits += 4;
  }
  const Interval a = wilson_interval(err_stbc, bits);
  const Interval u = wilson_interval(err_siso, bits);
  CHECK(a.hi < u.lo);
}
