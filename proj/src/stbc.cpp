#include "mimosim/stbc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "mimosim/error.hpp"

namespace mimosim {

CodeRate parse_rate(std::string_view text) {
  if (text == "1") return {1, 1};
  if (text == "1/2") return {1, 2};
  if (text == "3/4") return {3, 4};
  throw ConfigError("unsupported code rate '" + std::string(text) + "' (expected 1, 1/2 or 3/4)");
}

std::string to_string(CodeRate rate) {
  if (rate.den == 1) return std::to_string(rate.num);
  return std::to_string(rate.num) + "/" + std::to_string(rate.den);
}

CodeChoice parse_code_choice(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos || x == 0) {
    throw ConfigError("code must look like <n_tx>x<rate>, e.g. 4x3/4; got '" + std::string(text) +
                      "'");
  }
  std::size_t n_tx = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + x, n_tx);
  if (ec != std::errc{} || ptr != text.data() + x) {
    throw ConfigError("bad antenna count in code '" + std::string(text) + "'");
  }
  CodeChoice choice{n_tx, parse_rate(text.substr(x + 1))};
  (void)ostbc_code(choice);  // rejects pairs outside the supported table
  return choice;
}

std::string to_string(const CodeChoice& choice) {
  return std::to_string(choice.n_tx) + "x" + to_string(choice.rate);
}

namespace {

// One codeword entry: sign * s_sym or sign * conj(s_sym); sym < 0 is zero.
struct Entry {
  int sym;
  int sign;
  bool conj;
};

constexpr Entry O{-1, 0, false};
constexpr Entry p(int s) { return {s - 1, +1, false}; }
constexpr Entry m(int s) { return {s - 1, -1, false}; }
constexpr Entry pc(int s) { return {s - 1, +1, true}; }
constexpr Entry mc(int s) { return {s - 1, -1, true}; }

struct Design {
  const char* name;
  std::size_t n_tx;
  CodeRate rate;
  std::size_t k;
  std::vector<std::vector<Entry>> rows;
};

const std::vector<Design>& designs() {
  static const std::vector<Design> table = {
      {"alamouti", 2, {1, 1}, 2, {{p(1), p(2)}, {mc(2), pc(1)}}},
      {"g3",
       3,
       {1, 2},
       4,
       {{p(1), p(2), p(3)},
        {m(2), p(1), m(4)},
        {m(3), p(4), p(1)},
        {m(4), m(3), p(2)},
        {pc(1), pc(2), pc(3)},
        {mc(2), pc(1), mc(4)},
        {mc(3), pc(4), pc(1)},
        {mc(4), mc(3), pc(2)}}},
      {"h3",
       3,
       {3, 4},
       3,
       {{p(1), p(2), p(3)}, {mc(2), pc(1), O}, {pc(3), O, mc(1)}, {O, pc(3), mc(2)}}},
      {"g4",
       4,
       {1, 2},
       4,
       {{p(1), p(2), p(3), p(4)},
        {m(2), p(1), m(4), p(3)},
        {m(3), p(4), p(1), m(2)},
        {m(4), m(3), p(2), p(1)},
        {pc(1), pc(2), pc(3), pc(4)},
        {mc(2), pc(1), mc(4), pc(3)},
        {mc(3), pc(4), pc(1), mc(2)},
        {mc(4), mc(3), pc(2), pc(1)}}},
      {"h4",
       4,
       {3, 4},
       3,
       {{p(1), p(2), p(3), O},
        {mc(2), pc(1), O, p(3)},
        {pc(3), O, mc(1), p(2)},
        {O, pc(3), mc(2), m(1)}}},
  };
  return table;
}

}  // namespace

OstbcCode ostbc_code(std::size_t n_tx, CodeRate rate) {
  for (const Design& d : designs()) {
    if (d.n_tx != n_tx || !(d.rate == rate)) continue;
    OstbcCode code;
    code.n_tx_ = n_tx;
    code.rows_ = d.rows.size();
    code.rate_ = rate;
    code.name_ = d.name;
    code.dispersion_a_.assign(d.k, ComplexMatrix(code.rows_, n_tx));
    code.dispersion_b_.assign(d.k, ComplexMatrix(code.rows_, n_tx));
    for (std::size_t t = 0; t < d.rows.size(); ++t) {
      for (std::size_t n = 0; n < n_tx; ++n) {
        const Entry e = d.rows[t][n];
        if (e.sym < 0) continue;
        const auto i = static_cast<std::size_t>(e.sym);
        code.dispersion_a_[i](t, n) += static_cast<double>(e.sign);
        code.dispersion_b_[i](t, n) += static_cast<double>(e.conj ? -e.sign : e.sign);
      }
    }
    // Each symbol occupies every column the same number of times; normalize
    // so that A_i^H A_i = I.
    const double column_energy = frobenius_norm_sq(code.dispersion_a_[0]) / static_cast<double>(n_tx);
    const double scale = 1.0 / std::sqrt(column_energy);
    for (auto& a : code.dispersion_a_) a *= scale;
    for (auto& b : code.dispersion_b_) b *= scale;
    return code;
  }
  throw ConfigError("unsupported OSTBC (n_tx=" + std::to_string(n_tx) +
                    ", rate=" + to_string(rate) + ")");
}

ComplexMatrix OstbcCode::codeword(std::span<const Complex> symbols) const {
  if (symbols.size() != symbols_per_block()) {
    throw DimensionError("codeword: expected " + std::to_string(symbols_per_block()) +
                         " symbols, got " + std::to_string(symbols.size()));
  }
  ComplexMatrix x(rows_, n_tx_);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const double a = symbols[i].real();
    const double b = symbols[i].imag();
    const auto da = dispersion_a_[i].data();
    const auto db = dispersion_b_[i].data();
    auto out = x.data();
    for (std::size_t e = 0; e < out.size(); ++e) out[e] += da[e] * a + kJ * db[e] * b;
  }
  return x;
}

std::vector<CodewordBlock> ostbc_encode(const OstbcCode& code, std::span<const Complex> symbols) {
  const std::size_t k = code.symbols_per_block();
  if (symbols.size() % k != 0) {
    throw ConfigError("ostbc_encode: " + std::to_string(symbols.size()) +
                      " symbols is not a multiple of k=" + std::to_string(k));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(code.n_tx()));
  std::vector<CodewordBlock> blocks;
  blocks.reserve(symbols.size() / k);
  for (std::size_t start = 0; start < symbols.size(); start += k) {
    const auto group = symbols.subspan(start, k);
    blocks.push_back({code.codeword(group) * scale, SymbolBlock(group.begin(), group.end())});
  }
  return blocks;
}

ComplexMatrix stack_blocks(std::span<const CodewordBlock> blocks) {
  if (blocks.empty()) throw ConfigError("stack_blocks: no blocks");
  const std::size_t t = blocks.front().matrix.rows();
  const std::size_t n_tx = blocks.front().matrix.cols();
  ComplexMatrix out(t * blocks.size(), n_tx);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t r = 0; r < t; ++r) {
      const auto src = blocks[b].matrix.row(r);
      std::copy(src.begin(), src.end(), out.row(b * t + r).begin());
    }
  }
  return out;
}

SymbolBlock ostbc_combine(const OstbcCode& code, const ComplexMatrix& y, const ComplexMatrix& h) {
  const std::size_t t = code.rows_per_block();
  const std::size_t n_tx = code.n_tx();
  if (h.cols() != n_tx || y.rows() != t || y.cols() != h.rows()) {
    throw DimensionError("ostbc_combine: y is " + std::to_string(y.rows()) + "x" +
                         std::to_string(y.cols()) + ", h is " + std::to_string(h.rows()) + "x" +
                         std::to_string(h.cols()) + ", code needs T=" + std::to_string(t) +
                         " and N_t=" + std::to_string(n_tx));
  }
  SymbolBlock out(code.symbols_per_block());
  const double gain = frobenius_norm_sq(h);
  if (gain == 0.0) return out;

  // G = Y conj(H): matched filter per (time, transmit antenna).
  ComplexMatrix g(t, n_tx);
  for (std::size_t row = 0; row < t; ++row)
    for (std::size_t n = 0; n < n_tx; ++n) {
      Complex acc{};
      for (std::size_t r = 0; r < h.rows(); ++r) acc += y(row, r) * std::conj(h(r, n));
      g(row, n) = acc;
    }

  const double scale = std::sqrt(static_cast<double>(n_tx)) / gain;
  for (std::size_t i = 0; i < out.size(); ++i) {
    Complex pa{};
    Complex pb{};
    const auto da = code.dispersion_a()[i].data();
    const auto db = code.dispersion_b()[i].data();
    const auto gd = g.data();
    for (std::size_t e = 0; e < gd.size(); ++e) {
      pa += std::conj(da[e]) * gd[e];
      pb += std::conj(db[e]) * gd[e];
    }
    out[i] = {scale * pa.real(), scale * pb.imag()};
  }
  return out;
}

}  // namespace mimosim
