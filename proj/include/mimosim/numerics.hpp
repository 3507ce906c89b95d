#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mimosim {

using Complex = std::complex<double>;

inline constexpr Complex kJ{0.0, 1.0};

/// Dense row-major complex matrix for the small (<= 8x8) operands used by the
/// channel, coder and detectors. Shapes are always at least 1x1.
class ComplexMatrix {
 public:
  /// Zero-filled rows x cols matrix.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  /// Column vector (n x 1).
  static ComplexMatrix column(std::span<const Complex> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale) noexcept;

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, Complex scale);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Standard matrix product. Throws DimensionError if a.cols() != b.rows().
ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Pivot magnitude below which mat_inverse reports the matrix as singular.
inline constexpr double kSingularPivot = 1e-12;

/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws DimensionError for non-square input and SingularMatrixError when a
/// pivot falls below kSingularPivot.
ComplexMatrix mat_inverse(const ComplexMatrix& a);

/// Conjugate transpose.
ComplexMatrix hermitian(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);

/// Matrix-vector product a * x.
std::vector<Complex> mat_vec(const ComplexMatrix& a, std::span<const Complex> x);

double frobenius_norm_sq(const ComplexMatrix& a) noexcept;
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double trace_real(const ComplexMatrix& a);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns of `vectors`)
/// of a Hermitian matrix, via cyclic Jacobi on the real 2n x 2n embedding.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};
HermitianEigen hermitian_eigen(const ComplexMatrix& a);

/// Principal square root S of a Hermitian positive semidefinite matrix,
/// S = S^H and S * S^H == a. Negative eigenvalues beyond round-off throw
/// DomainError.
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

/// Modified Bessel function of the first kind, order 0, for 0 <= x <= 100.
/// Power series below 15, asymptotic expansion above.
double bessel_i0(double x);

/// exp(-x) * I0(x) for any x >= 0. Stays finite where bessel_i0 would
/// overflow; used by the Rician envelope density.
double bessel_i0_scaled(double x);

/// Bessel function of the first kind, order 0, for 0 <= x <= 100.
double bessel_j0(double x);

}  // namespace mimosim
