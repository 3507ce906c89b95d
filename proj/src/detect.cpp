#include "mimosim/detect.hpp"

#include <limits>
#include <string>

#include "mimosim/error.hpp"

namespace mimosim {

std::string_view to_string(DetectorKind kind) noexcept {
  switch (kind) {
    case DetectorKind::ZF:
      return "zf";
    case DetectorKind::MMSE:
      return "mmse";
    case DetectorKind::ML:
      return "ml";
  }
  return "?";
}

DetectorKind parse_detector(std::string_view text) {
  if (text == "zf") return DetectorKind::ZF;
  if (text == "mmse") return DetectorKind::MMSE;
  if (text == "ml") return DetectorKind::ML;
  throw ConfigError("unknown detector '" + std::string(text) + "' (expected zf, mmse or ml)");
}

namespace {

void check_shapes(const ComplexMatrix& h, std::span<const Complex> y) {
  if (y.size() != h.rows()) {
    throw DimensionError("detector: y has " + std::to_string(y.size()) + " entries, H has " +
                         std::to_string(h.rows()) + " rows");
  }
  if (h.rows() < h.cols()) throw DimensionError("detector: needs N_r >= N_t");
}

// (H^H H + diag_load I)^{-1} H^H y
std::vector<Complex> regularized_solve(const ComplexMatrix& h, std::span<const Complex> y,
                                       double diag_load) {
  const ComplexMatrix hh = hermitian(h);
  ComplexMatrix gram = hh * h;
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) += diag_load;
  const std::vector<Complex> matched = mat_vec(hh, y);
  return mat_vec(mat_inverse(gram), matched);
}

}  // namespace

std::vector<Complex> zf_estimate(const ComplexMatrix& h, std::span<const Complex> y) {
  check_shapes(h, y);
  try {
    return regularized_solve(h, y, 0.0);
  } catch (const SingularMatrixError& e) {
    throw DetectionFailure(std::string("zero-forcing: ") + e.what());
  }
}

std::vector<Complex> mmse_estimate(const ComplexMatrix& h, std::span<const Complex> y,
                                   double noise_var) {
  check_shapes(h, y);
  if (!(noise_var >= 0.0)) throw DomainError("mmse: noise_var must be >= 0");
  try {
    return regularized_solve(h, y, noise_var * static_cast<double>(h.cols()));
  } catch (const SingularMatrixError& e) {
    throw DetectionFailure(std::string("mmse: ") + e.what());
  }
}

SymbolBlock slice_qpsk(std::span<const Complex> estimate) {
  SymbolBlock out(estimate.size());
  for (std::size_t i = 0; i < estimate.size(); ++i) out[i] = kQpskConstellation[qpsk_decide(estimate[i])];
  return out;
}

SymbolBlock zf_detect(const ComplexMatrix& h, std::span<const Complex> y) {
  return slice_qpsk(zf_estimate(h, y));
}

SymbolBlock mmse_detect(const ComplexMatrix& h, std::span<const Complex> y, double noise_var) {
  return slice_qpsk(mmse_estimate(h, y, noise_var));
}

std::size_t ml_detect_index(const ComplexMatrix& h, std::span<const Complex> y,
                            std::span<const Complex> constellation) {
  if (y.size() != h.rows()) throw DimensionError("ml_detect: y length does not match H rows");
  const std::size_t n_tx = h.cols();
  const std::size_t n_rx = h.rows();
  const std::size_t q = constellation.size();
  if (q == 0) throw ConfigError("ml_detect: empty constellation");
  std::size_t hypotheses = 1;
  for (std::size_t n = 0; n < n_tx; ++n) {
    if (hypotheses > kMaxMlHypotheses / q) {
      throw ConfigError("ml_detect: hypothesis space exceeds " + std::to_string(kMaxMlHypotheses));
    }
    hypotheses *= q;
  }

  // images[n][c] = column n of H times constellation point c.
  std::vector<Complex> images(n_tx * q * n_rx);
  for (std::size_t n = 0; n < n_tx; ++n)
    for (std::size_t c = 0; c < q; ++c)
      for (std::size_t r = 0; r < n_rx; ++r) images[(n * q + c) * n_rx + r] = h(r, n) * constellation[c];

  std::vector<std::size_t> digits(n_tx, 0);
  std::vector<Complex> residual(n_rx);
  std::size_t best = 0;
  double best_metric = std::numeric_limits<double>::infinity();
  for (std::size_t index = 0; index < hypotheses; ++index) {
    for (std::size_t r = 0; r < n_rx; ++r) residual[r] = y[r];
    for (std::size_t n = 0; n < n_tx; ++n) {
      const Complex* img = &images[(n * q + digits[n]) * n_rx];
      for (std::size_t r = 0; r < n_rx; ++r) residual[r] -= img[r];
    }
    double metric = 0.0;
    for (const auto& v : residual) metric += std::norm(v);
    if (metric < best_metric) {
      best_metric = metric;
      best = index;
    }
    // Odometer increment, last antenna fastest.
    for (std::size_t n = n_tx; n-- > 0;) {
      if (++digits[n] < q) break;
      digits[n] = 0;
    }
  }
  return best;
}

SymbolBlock ml_detect(const ComplexMatrix& h, std::span<const Complex> y,
                      std::span<const Complex> constellation) {
  std::size_t index = ml_detect_index(h, y, constellation);
  SymbolBlock out(h.cols());
  for (std::size_t n = out.size(); n-- > 0;) {
    out[n] = constellation[index % constellation.size()];
    index /= constellation.size();
  }
  return out;
}

}  // namespace mimosim
