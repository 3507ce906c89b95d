#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "mimosim/error.hpp"
#include "mimosim/numerics.hpp"
#include "mimosim/rng.hpp"

using namespace mimosim;
using testutil::random_matrix;
using testutil::well_conditioned;

namespace {

ComplexMatrix triple_loop(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Complex s{};
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

double i0_series(double x) {
  long double sum = 0.0L;
  long double term = 1.0L;
  const long double q = static_cast<long double>(x) * x / 4.0L;
  for (int k = 0; k < 30; ++k) {
    if (k > 0) term *= q / (static_cast<long double>(k) * k);
    sum += term;
  }
  return static_cast<double>(sum);
}

double j0_series(double x) {
  long double sum = 0.0L;
  long double term = 1.0L;
  const long double q = static_cast<long double>(x) * x / 4.0L;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) term *= -q / (static_cast<long double>(k) * k);
    sum += term;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("mat_mul small cases") {
  const ComplexMatrix m{{{1, 2}, {3, -1}}, {{0, 1}, {-2, 0.5}}};
  CHECK(mat_mul(ComplexMatrix::identity(2), m) == m);
  const ComplexMatrix j{{kJ}};
  CHECK(mat_mul(j, j)(0, 0) == Complex(-1, 0));
}

TEST_CASE("mat_mul matches triple loop and is associative") {
  RngStream rng(7, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix a = random_matrix(3, 3, rng);
    const ComplexMatrix b = random_matrix(3, 3, rng);
    CHECK(max_abs_diff(mat_mul(a, b), triple_loop(a, b)) < 1e-12);
  }
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 4;
    const std::size_t k = 1 + rng.next_u64() % 4;
    const std::size_t p = 1 + rng.next_u64() % 4;
    const std::size_t q = 1 + rng.next_u64() % 4;
    const ComplexMatrix a = random_matrix(n, k, rng);
    const ComplexMatrix b = random_matrix(k, p, rng);
    const ComplexMatrix c = random_matrix(p, q, rng);
    CHECK(max_abs_diff((a * b) * c, a * (b * c)) < 1e-10);
  }
}

TEST_CASE("mat_mul rejects mismatched shapes") {
  CHECK_THROWS_AS(mat_mul(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(ComplexMatrix(2, 2) + ComplexMatrix(2, 3), DimensionError);
}

TEST_CASE("mat_inverse") {
  CHECK(max_abs_diff(mat_inverse(ComplexMatrix::identity(4)), ComplexMatrix::identity(4)) == 0.0);
  const std::vector<Complex> d{2.0, kJ};
  const std::vector<Complex> d_inv{0.5, -kJ};
  CHECK(max_abs_diff(mat_inverse(ComplexMatrix::diagonal(d)), ComplexMatrix::diagonal(d_inv)) < 1e-15);

  RngStream rng(11, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ComplexMatrix a = well_conditioned(4, rng);
    worst = std::max(worst, max_abs_diff(a * mat_inverse(a), ComplexMatrix::identity(4)));
  }
  CHECK(worst < 1e-10);

  const ComplexMatrix singular{{1, 2}, {2, 4}};
  CHECK_THROWS_AS(mat_inverse(singular), SingularMatrixError);
  CHECK_THROWS_AS(mat_inverse(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("hermitian, transpose, conjugate") {
  CHECK(hermitian(ComplexMatrix{{kJ}})(0, 0) == -kJ);
  const ComplexMatrix sym{{1, 2, 3}, {2, 5, 6}, {3, 6, 9}};
  CHECK(hermitian(sym) == sym);
  RngStream rng(3, 3);
  const ComplexMatrix a = random_matrix(4, 2, rng);
  CHECK(hermitian(hermitian(a)) == a);
  CHECK(hermitian(a).rows() == 2);
  CHECK(hermitian(a) == conjugate(transpose(a)));
}

TEST_CASE("trace, norm and kron") {
  const ComplexMatrix a{{1, 2}, {3, 4}};
  CHECK(trace_real(a) == doctest::Approx(5.0));
  CHECK(frobenius_norm_sq(a) == doctest::Approx(30.0));
  const ComplexMatrix k = kron(a, ComplexMatrix::identity(2));
  CHECK(k.rows() == 4);
  CHECK(k(0, 0) == Complex(1));
  CHECK(k(1, 1) == Complex(1));
  CHECK(k(0, 2) == Complex(2));
  CHECK(k(3, 1) == Complex(3));
  CHECK(k(0, 1) == Complex(0));
}

TEST_CASE("hermitian_eigen and psd_sqrt reconstruct the input") {
  RngStream rng(5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix g = random_matrix(4, 4, rng);
    const ComplexMatrix a = g * hermitian(g);  // Hermitian PSD
    const HermitianEigen eig = hermitian_eigen(a);
    REQUIRE(eig.values.size() == 4);
    ComplexMatrix lambda(4, 4);
    for (std::size_t i = 0; i < 4; ++i) lambda(i, i) = eig.values[i];
    CHECK(max_abs_diff(eig.vectors * lambda * hermitian(eig.vectors), a) < 1e-9);
    CHECK(max_abs_diff(hermitian(eig.vectors) * eig.vectors, ComplexMatrix::identity(4)) < 1e-9);
    const ComplexMatrix r = psd_sqrt(a);
    CHECK(max_abs_diff(r * r, a) < 1e-9);
    CHECK(max_abs_diff(hermitian(r), r) < 1e-12);
  }
  // Repeated eigenvalues.
  const ComplexMatrix id = ComplexMatrix::identity(3) * Complex(2.0);
  CHECK(max_abs_diff(psd_sqrt(id), ComplexMatrix::identity(3) * Complex(std::sqrt(2.0))) < 1e-12);
  const ComplexMatrix indefinite{{1, 0}, {0, -1}};
  CHECK_THROWS_AS(psd_sqrt(indefinite), DomainError);
}

TEST_CASE("gaussian_pair moments and distribution") {
  RngStream rng(2024, 9);
  const int n = 1'000'000;
  std::vector<double> xs;
  xs.reserve(n);
  double sum = 0.0;
  double sum2 = 0.0;
  while (static_cast<int>(xs.size()) < n) {
    const auto [a, b] = gaussian_pair(rng);
    xs.push_back(a);
    xs.push_back(b);
  }
  for (double x : xs) {
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.005);
  CHECK(std::abs(sum2 / n - mean * mean - 1.0) < 0.01);
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = testutil::normal_cdf(xs[i]);
    ks = std::max({ks, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  CHECK(ks < 0.002);
}

TEST_CASE("rng determinism and stream separation") {
  RngStream a(1, 42);
  RngStream b(1, 42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
  RngStream c(1, 43);
  RngStream d(2, 42);
  RngStream e(1, 42);
  CHECK(c.next_u64() != e.next_u64());
  CHECK(d.next_u64() != RngStream(1, 42).next_u64());
  const RngStream root(9, 9);
  CHECK(root.derive(1).next_u64() == root.derive(1).next_u64());
  CHECK(root.derive(1).stream_id() != root.derive(2).stream_id());
  std::set<std::uint64_t> ids;
  for (std::uint64_t t = 0; t < 1000; ++t) ids.insert(make_stream_id(0, t));
  for (std::uint64_t t = 0; t < 1000; ++t) ids.insert(make_stream_id(1, t));
  CHECK(ids.size() == 2000);
}

TEST_CASE("uniform stays in range") {
  RngStream rng(4, 4);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("bessel_i0") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK(bessel_i0(1.0) == doctest::Approx(1.2660658778).epsilon(1e-10));
  CHECK(bessel_i0(1.0) == doctest::Approx(i0_series(1.0)).epsilon(1e-14));
  double prev = bessel_i0(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double x = 0.1 * i;
    const double v = bessel_i0(x);
    REQUIRE(v >= 1.0);
    REQUIRE(v > prev);
    prev = v;
    REQUIRE(v == doctest::Approx(std::cyl_bessel_i(0.0, x)).epsilon(1e-10));
    if (x < 15.0) REQUIRE(v == doctest::Approx(i0_series(x)).epsilon(1e-12));
    REQUIRE(bessel_i0_scaled(x) == doctest::Approx(std::exp(-x) * std::cyl_bessel_i(0.0, x)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(bessel_i0(-1.0), DomainError);
}

TEST_CASE("bessel_j0") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976866).epsilon(1e-10));

  // First root by bisection on the series oracle.
  double lo = 2.0;
  double hi = 3.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (j0_series(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(2.4048255577).epsilon(1e-10));
  CHECK(std::abs(bessel_j0(2.4048255577)) < 1e-8);
  CHECK(std::abs(bessel_j0(lo)) < 1e-12);

  for (int i = 0; i <= 1000; ++i) {
    const double x = 0.1 * i;
    const double v = bessel_j0(x);
    REQUIRE(std::abs(v - std::cyl_bessel_j(0.0, x)) < 1e-10);
    if (x < 12.0) REQUIRE(std::abs(v - j0_series(x)) < 1e-12);
  }
  // Integral representation: J0(x) = (1/pi) int_0^pi cos(x sin t) dt.
  for (double x : {0.5, 3.7, 14.9, 15.1, 40.0, 99.0}) {
    const double quad =
        testutil::simpson([x](double t) { return std::cos(x * std::sin(t)); }, 0.0, std::numbers::pi, 4000) /
        std::numbers::pi;
    CHECK(std::abs(bessel_j0(x) - quad) < 1e-10);
  }
  CHECK_THROWS_AS(bessel_j0(-0.5), DomainError);
}
