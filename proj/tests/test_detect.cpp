#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "mimosim/detect.hpp"
#include "mimosim/error.hpp"
#include "mimosim/sim.hpp"

using namespace mimosim;
using testutil::random_matrix;

namespace {

std::vector<Complex> scaled_qpsk(std::size_t n_tx) {
  std::vector<Complex> c(kQpskConstellation.begin(), kQpskConstellation.end());
  for (auto& v : c) v /= std::sqrt(static_cast<double>(n_tx));
  return c;
}

// Exhaustive search with the first antenna varying fastest and a residual
// computed from scratch per hypothesis.
std::vector<Complex> ml_oracle(const ComplexMatrix& h, const std::vector<Complex>& y,
                               const std::vector<Complex>& constellation) {
  const std::size_t n_tx = h.cols();
  const std::size_t q = constellation.size();
  std::size_t total = 1;
  for (std::size_t n = 0; n < n_tx; ++n) total *= q;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Complex> best_x;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<Complex> x(n_tx);
    std::size_t rest = code;
    for (std::size_t n = 0; n < n_tx; ++n) {
      x[n] = constellation[rest % q];
      rest /= q;
    }
    const auto hx = mat_vec(h, x);
    double metric = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r) metric += std::norm(y[r] - hx[r]);
    if (metric < best) {
      best = metric;
      best_x = x;
    }
  }
  return best_x;
}

std::vector<Complex> unscale(const SymbolBlock& s, std::size_t n_tx) {
  std::vector<Complex> out(s);
  for (auto& v : out) v *= std::sqrt(static_cast<double>(n_tx));
  return out;
}

struct Instance {
  ComplexMatrix h;
  std::vector<Complex> x;  // transmitted, 1/sqrt(N_t) scaled
  std::vector<Complex> s;  // unit-energy symbols
  std::vector<Complex> y;
};

Instance make_instance(std::size_t n_rx, std::size_t n_tx, double noise_var, RngStream& rng) {
  Instance in{random_matrix(n_rx, n_tx, rng), {}, testutil::random_qpsk(n_tx, rng), {}};
  in.x = in.s;
  for (auto& v : in.x) v /= std::sqrt(static_cast<double>(n_tx));
  in.y = mat_vec(in.h, in.x);
  if (noise_var > 0.0)
    for (auto& v : in.y) v += rng.complex_gaussian(noise_var);
  return in;
}

double sq_dist(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::norm(a[i] - b[i]);
  return d;
}

}  // namespace

TEST_CASE("parse_detector") {
  CHECK(parse_detector("zf") == DetectorKind::ZF);
  CHECK(parse_detector("mmse") == DetectorKind::MMSE);
  CHECK(parse_detector("ml") == DetectorKind::ML);
  CHECK(to_string(DetectorKind::MMSE) == "mmse");
  CHECK_THROWS_AS(parse_detector("sphere"), ConfigError);
}

TEST_CASE("noiseless ZF and ML recover the transmitted vector") {
  RngStream rng(41, 1);
  const auto c = scaled_qpsk(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance in = make_instance(4, 4, 0.0, rng);
    CHECK(zf_detect(in.h, in.y) == in.s);
    CHECK(ml_detect(in.h, in.y, c) == in.x);
  }
}

TEST_CASE("ZF on the identity channel is per-stream slicing") {
  RngStream rng(42, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Complex> y(4);
    for (auto& v : y) v = rng.complex_gaussian(1.0);
    CHECK(qpsk_demodulate(zf_detect(ComplexMatrix::identity(4), y)) == qpsk_demodulate(y));
  }
}

TEST_CASE("ZF estimate matches a least-squares oracle") {
  RngStream rng(43, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix h = testutil::well_conditioned(4, rng);
    std::vector<Complex> x(4);
    for (auto& v : x) v = rng.complex_gaussian(1.0);
    const auto y = mat_vec(h, x);
    // Normal equations solved through the explicit inverse.
    const ComplexMatrix hh = hermitian(h);
    const auto oracle = mat_vec(mat_inverse(hh * h), mat_vec(hh, y));
    const auto est = zf_estimate(h, y);
    CHECK(sq_dist(est, oracle) < 1e-18);
    CHECK(sq_dist(est, x) < 1e-18);
  }
}

TEST_CASE("MMSE limits") {
  RngStream rng(44, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix h = testutil::well_conditioned(4, rng);
    std::vector<Complex> y(4);
    for (auto& v : y) v = rng.complex_gaussian(1.0);
    CHECK(mmse_detect(h, y, 0.0) == zf_detect(h, y));
    CHECK(std::sqrt(sq_dist(mmse_estimate(h, y, 1e-12), zf_estimate(h, y))) < 1e-8);
    for (const Complex& v : mmse_estimate(h, y, 1e12)) CHECK(std::abs(v) < 1e-9);
  }
  CHECK_THROWS_AS(mmse_estimate(ComplexMatrix::identity(2), std::vector<Complex>(2), -1.0), DomainError);
}

TEST_CASE("MMSE has lower estimation error than ZF at 10 dB") {
  RngStream rng(45, 1);
  double mse_zf = 0.0;
  double mse_mmse = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Instance in = make_instance(4, 4, 0.1, rng);
    mse_zf += sq_dist(zf_estimate(in.h, in.y), in.x);
    mse_mmse += sq_dist(mmse_estimate(in.h, in.y, 0.1), in.x);
  }
  CHECK(mse_mmse <= mse_zf);
}

TEST_CASE("ML matches an independent enumerator on noisy instances") {
  RngStream rng(46, 1);
  const auto c = scaled_qpsk(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const Instance in = make_instance(4, 4, 0.3, rng);
    REQUIRE(ml_detect(in.h, in.y, c) == ml_oracle(in.h, in.y, c));
  }
  // Non-square and smaller arrays.
  const auto c2 = scaled_qpsk(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance in = make_instance(3, 2, 0.5, rng);
    REQUIRE(ml_detect(in.h, in.y, c2) == ml_oracle(in.h, in.y, c2));
  }
}

TEST_CASE("ML with orthogonal columns decouples into per-stream slicing") {
  RngStream rng(47, 1);
  const auto c = scaled_qpsk(4);
  for (int trial = 0; trial < 1000; ++trial) {
    // Gram-Schmidt on a random matrix gives unitary columns.
    ComplexMatrix q = random_matrix(4, 4, rng);
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot{};
        for (std::size_t r = 0; r < 4; ++r) dot += std::conj(q(r, k)) * q(r, j);
        for (std::size_t r = 0; r < 4; ++r) q(r, j) -= dot * q(r, k);
      }
      double norm = 0.0;
      for (std::size_t r = 0; r < 4; ++r) norm += std::norm(q(r, j));
      for (std::size_t r = 0; r < 4; ++r) q(r, j) /= std::sqrt(norm);
    }
    std::vector<Complex> y(4);
    for (auto& v : y) v = rng.complex_gaussian(1.0);
    const auto per_stream = slice_qpsk(mat_vec(hermitian(q), y));
    CHECK(unscale(ml_detect(q, y, c), 4) == per_stream);
  }
}

TEST_CASE("ML decisions are invariant to a common complex scaling") {
  RngStream rng(48, 1);
  const auto c = scaled_qpsk(4);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance in = make_instance(4, 4, 0.2, rng);
    const Complex a = rng.complex_gaussian(4.0) + Complex(0.1, 0.0);
    ComplexMatrix h = in.h * a;
    std::vector<Complex> y = in.y;
    for (auto& v : y) v *= a;
    // Scaling H and y together keeps every metric proportional.
    CHECK(ml_detect_index(h, y, c) == ml_detect_index(in.h, in.y, c));
  }
}

TEST_CASE("ML hypothesis index convention and tie breaking") {
  const std::vector<Complex> c{1.0, -1.0};
  ComplexMatrix h{{1.0, 0.0}, {0.0, 1.0}};
  // Antenna 0 is the most significant digit.
  CHECK(ml_detect_index(h, std::vector<Complex>{-1.0, 1.0}, c) == 2);
  CHECK(ml_detect_index(h, std::vector<Complex>{1.0, -1.0}, c) == 1);
  // y = 0 ties every hypothesis; the smallest index wins.
  CHECK(ml_detect_index(h, std::vector<Complex>{0.0, 0.0}, c) == 0);
  const std::vector<Complex> big(1000, 1.0);
  CHECK_THROWS_AS(ml_detect_index(ComplexMatrix(4, 4), std::vector<Complex>(4), big), ConfigError);
}

TEST_CASE("ML never loses to the linear detectors") {
  RngStream rng(49, 1);
  const auto c = scaled_qpsk(4);
  const double noise_var = 0.1;
  const std::uint64_t trials = 100000;
  std::uint64_t err_ml = 0;
  std::uint64_t err_zf = 0;
  std::uint64_t err_mmse = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Instance in = make_instance(4, 4, noise_var, rng);
    err_ml += unscale(ml_detect(in.h, in.y, c), 4) != in.s;
    err_zf += zf_detect(in.h, in.y) != in.s;
    err_mmse += mmse_detect(in.h, in.y, noise_var) != in.s;
  }
  const Interval ml = wilson_interval(err_ml, trials);
  CHECK(ml.lo <= wilson_interval(err_zf, trials).hi);
  CHECK(ml.lo <= wilson_interval(err_mmse, trials).hi);
  CHECK(err_ml <= err_mmse);
  CHECK(err_mmse <= err_zf);
}

TEST_CASE("detectors are deterministic and validate shapes") {
  RngStream rng(50, 1);
  const Instance in = make_instance(4, 4, 0.1, rng);
  CHECK(mmse_estimate(in.h, in.y, 0.1) == mmse_estimate(in.h, in.y, 0.1));
  CHECK(zf_estimate(in.h, in.y) == zf_estimate(in.h, in.y));
  CHECK_THROWS_AS(zf_detect(in.h, std::vector<Complex>(3)), DimensionError);
  CHECK_THROWS_AS(zf_detect(ComplexMatrix(2, 3), std::vector<Complex>(2)), DimensionError);
  const ComplexMatrix singular{{1.0, 2.0}, {2.0, 4.0}};
  CHECK_THROWS_AS(zf_detect(singular, std::vector<Complex>{1.0, 1.0}), DetectionFailure);
}
