#include "mimosim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "mimosim/error.hpp"

namespace mimosim {

namespace {

void require_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix dimensions must be at least 1x1");
  }
}

std::string shape(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  require_shape(rows, cols);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_shape(rows, cols);
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix data length does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  require_shape(rows_, cols_);
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> values) {
  return ComplexMatrix(values.size(), 1, std::vector<Complex>(values.begin(), values.end()));
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
  for (auto& v : data_) v *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, Complex scale) { return a *= scale; }
ComplexMatrix operator*(Complex scale, ComplexMatrix a) { return a *= scale; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return mat_mul(a, b); }

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: inner dimensions differ " + shape(a) + " * " + shape(b));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix mat_inverse(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("mat_inverse: matrix is " + shape(a));
  const std::size_t n = a.rows();
  ComplexMatrix work = a;
  ComplexMatrix inv = ComplexMatrix::identity(n);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(work(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double mag = std::abs(work(r, col));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (!(best >= kSingularPivot)) {
      throw SingularMatrixError("mat_inverse: pivot magnitude " + std::to_string(best) +
                                " below tolerance in column " + std::to_string(col));
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(work(col, c), work(pivot, c));
        std::swap(inv(col, c), inv(pivot, c));
      }
    }
    const Complex scale = 1.0 / work(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      work(col, c) *= scale;
      inv(col, c) *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex factor = work(r, col);
      if (factor == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) {
        work(r, c) -= factor * work(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  return inv;
}

ComplexMatrix hermitian(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (auto& v : out.data()) v = std::conj(v);
  return out;
}

std::vector<Complex> mat_vec(const ComplexMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) {
    throw DimensionError("mat_vec: matrix " + shape(a) + " times vector of length " +
                         std::to_string(x.size()));
  }
  std::vector<Complex> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

double frobenius_norm_sq(const ComplexMatrix& a) noexcept {
  double acc = 0.0;
  for (const auto& v : a.data()) acc += std::norm(v);
  return acc;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

double trace_real(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("trace of non-square matrix " + shape(a));
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, i).real();
  return acc;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

namespace {

// Dense real symmetric matrix, row-major.
struct RealSym {
  std::size_t n;
  std::vector<double> a;
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
};

// Cyclic Jacobi. On return `m` is (numerically) diagonal and `v` holds the
// eigenvectors as columns.
void jacobi(RealSym& m, RealSym& v) {
  const std::size_t n = m.n;
  v.n = n;
  v.a.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += m(i, i) * m(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    }
    if (off <= 1e-32 * std::max(diag, 1e-300)) return;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
}

// [[Re, -Im], [Im, Re]]: real symmetric whenever `a` is Hermitian.
RealSym real_embedding(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  RealSym m{2 * n, std::vector<double>(4 * n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex z = a(i, j);
      m(i, j) = z.real();
      m(i + n, j + n) = z.real();
      m(i + n, j) = z.imag();
      m(i, j + n) = -z.imag();
    }
  }
  return m;
}

void require_hermitian(const ComplexMatrix& a, const char* op) {
  if (!a.is_square()) throw DimensionError(std::string(op) + ": matrix is " + shape(a));
  double scale = 0.0;
  for (const auto& z : a.data()) scale = std::max(scale, std::abs(z));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > 1e-12 * std::max(scale, 1.0))
        throw DomainError(std::string(op) + ": matrix is not Hermitian");
}

}  // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eigen");
  const std::size_t n = a.rows();
  RealSym m = real_embedding(a);
  RealSym v{};
  jacobi(m, v);

  std::vector<std::size_t> order(2 * n);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return m(x, x) < m(y, y); });

  // Each eigenvalue of `a` appears twice in the embedding, with real vectors
  // [u; w] and [-w; u] that map to z and j*z. Keep one complex vector per pair.
  std::vector<std::vector<Complex>> accepted;
  std::vector<double> values;
  for (std::size_t idx : order) {
    if (accepted.size() == n) break;
    std::vector<Complex> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = {v(i, idx), v(i + n, idx)};
    for (const auto& q : accepted) {
      Complex proj{};
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(q[i]) * z[i];
      for (std::size_t i = 0; i < n; ++i) z[i] -= proj * q[i];
    }
    double norm = 0.0;
    for (const auto& c : z) norm += std::norm(c);
    norm = std::sqrt(norm);
    if (norm < 0.5) continue;
    for (auto& c : z) c /= norm;
    accepted.push_back(std::move(z));
    values.push_back(m(idx, idx));
  }

  HermitianEigen out{std::move(values), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = accepted[k][i];
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  require_hermitian(a, "psd_sqrt");
  const std::size_t n = a.rows();
  RealSym m = real_embedding(a);
  RealSym v{};
  jacobi(m, v);

  double scale = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) scale = std::max(scale, std::abs(m(i, i)));
  std::vector<double> root(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const double lambda = m(i, i);
    if (lambda < -1e-10 * std::max(scale, 1.0)) {
      throw DomainError("psd_sqrt: matrix has negative eigenvalue " + std::to_string(lambda));
    }
    root[i] = std::sqrt(std::max(lambda, 0.0));
  }

  // V diag(root) V^T is the embedding of the complex square root.
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t k = 0; k < 2 * n; ++k) {
        re += v(i, k) * root[k] * v(j, k);
        im += v(i + n, k) * root[k] * v(j, k);
      }
      out(i, j) = {re, im};
    }
  }
  return out;
}

namespace {

constexpr double kBesselMaxArg = 100.0;
constexpr double kSeriesCutover = 15.0;

void check_bessel_domain(double x, const char* name) {
  if (!(x >= 0.0 && x <= kBesselMaxArg)) {
    throw DomainError(std::string(name) + ": argument " + std::to_string(x) +
                      " outside [0, 100]");
  }
}

// sum (x/2)^{2k} / (k!)^2
double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// Asymptotic factor sum_k ((2k-1)!!)^2 / (k! (8x)^k), so that
// I0(x) ~ e^x / sqrt(2 pi x) * factor.
double i0_asymptotic_factor(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace

double bessel_i0(double x) {
  check_bessel_domain(x, "bessel_i0");
  if (x < kSeriesCutover) return i0_series(x);
  return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * i0_asymptotic_factor(x);
}

double bessel_i0_scaled(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("bessel_i0_scaled: argument must be finite and >= 0");
  }
  if (x < kSeriesCutover) return std::exp(-x) * i0_series(x);
  return i0_asymptotic_factor(x) / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_j0(double x) {
  check_bessel_domain(x, "bessel_j0");
  if (x < kSeriesCutover) {
    // Alternating series; the extended format absorbs the cancellation near 15.
    const long double q = 0.25L * x * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
      term *= -q / (static_cast<long double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-21L) break;
    }
    return static_cast<double>(sum);
  }
  // Hankel expansion: J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi).
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next > term) break;
    term = next;
    // Odd k feed Q with signs -,+,-..., even k feed P with signs -,+,...
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 1) {
      q -= sign * term;
    } else {
      p += sign * term;
    }
    if (term < 1e-17) break;
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace mimosim
