#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mimosim/modem.hpp"
#include "mimosim/numerics.hpp"
#include "mimosim/rng.hpp"

namespace testutil {

using mimosim::Complex;
using mimosim::ComplexMatrix;
using mimosim::RngStream;

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  ComplexMatrix m(rows, cols);
  for (auto& e : m.data()) e = rng.complex_gaussian(1.0);
  return m;
}

// Gaussian matrix plus a diagonal shift; condition number stays modest.
inline ComplexMatrix well_conditioned(std::size_t n, RngStream& rng) {
  ComplexMatrix m = random_matrix(n, n, rng);
  for (std::size_t i = 0; i < n; ++i) m(i, i) += 3.0;
  return m;
}

inline std::vector<Complex> random_qpsk(std::size_t n, RngStream& rng) {
  std::vector<Complex> s(n);
  for (auto& v : s) v = mimosim::kQpskConstellation[rng.next_u64() % 4];
  return s;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Composite Simpson rule on [a, b] with n (even) intervals.
template <typename F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace testutil
