#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace relaydmt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Finalizer of the splitmix64 generator; a bijection on 64-bit words.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seedable stream of uniform and standard-normal variates.
///
/// Backed by splitmix64 so the variate sequence depends only on the seed,
/// not on the platform's random library. Normals come from Box-Muller,
/// so two runs with the same seed and the same libm produce identical
/// sequences. Each instance must stay confined to one thread.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal, mean 0 variance 1.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double rad = std::sqrt(-2.0 * std::log1p(-u1));
    double ang = 6.283185307179586 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  /// Circularly symmetric complex normal with unit total variance.
  Complex complex_normal() {
    constexpr double kInvSqrt2 = 0.7071067811865476;
    double re = normal();
    double im = normal();
    return Complex(kInvSqrt2 * re, kInvSqrt2 * im);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// i.i.d. CN(0,1) entries: Rayleigh-fading channel draw.
inline ComplexMatrix sample_gaussian_channel(int rows, int cols, Rng& rng) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("sample_gaussian_channel: dimensions must be >= 1");
  }
  ComplexMatrix h(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      h(i, j) = rng.complex_normal();
    }
  }
  return h;
}

/// Haar-distributed p x p unitary.
///
/// QR of a complex Gaussian matrix with the Q columns rescaled by the
/// phases of the R diagonal. The phase correction makes the factorization
/// unique and the resulting distribution exactly Haar; plain QR is not.
inline ComplexMatrix sample_haar_unitary(int p, Rng& rng) {
  if (p < 1) {
    throw std::invalid_argument("sample_haar_unitary: p must be >= 1");
  }
  if (p == 1) {
    // scalar case: the phase of one Gaussian draw is already Haar on U(1)
    Complex z = rng.complex_normal();
    double mag = std::abs(z);
    ComplexMatrix q(1, 1);
    q(0, 0) = mag > 0.0 ? z / mag : Complex(1.0, 0.0);
    return q;
  }
  ComplexMatrix a = sample_gaussian_channel(p, p, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  Eigen::VectorXcd rdiag = qr.matrixQR().diagonal();
  for (int j = 0; j < p; ++j) {
    double mag = std::abs(rdiag(j));
    Complex phase = mag > 0.0 ? rdiag(j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

/// First `cols` columns of a Haar p x p unitary (an isotropic orthonormal
/// frame), sampled directly from a p x cols Gaussian matrix.
inline ComplexMatrix sample_haar_frame(int p, int cols, Rng& rng) {
  if (cols < 1 || cols > p) {
    throw std::invalid_argument("sample_haar_frame: need 1 <= cols <= p");
  }
  ComplexMatrix a = sample_gaussian_channel(p, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = ComplexMatrix(qr.householderQ()).leftCols(cols);
  Eigen::VectorXcd rdiag = qr.matrixQR().diagonal().head(cols);
  for (int j = 0; j < cols; ++j) {
    double mag = std::abs(rdiag(j));
    Complex phase = mag > 0.0 ? rdiag(j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

/// Eigenvalues of A^H A in non-increasing order (squared singular values).
/// Returns min(rows, cols) values; indices beyond rank read as zero.
inline std::vector<double> ordered_eigenvalues(const ComplexMatrix& a) {
  if (!a.allFinite()) {
    throw std::runtime_error("ordered_eigenvalues: non-finite entries");
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& sv = svd.singularValues();
  std::vector<double> out(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    out[static_cast<std::size_t>(i)] = sv(i) * sv(i);
  }
  return out;
}

struct SvdResult {
  ComplexMatrix u;
  Eigen::VectorXd sigma;  // non-increasing
  ComplexMatrix v;
};

/// Full SVD, A = U diag(sigma) V^H.
inline SvdResult svd(const ComplexMatrix& a) {
  if (!a.allFinite()) {
    throw std::runtime_error("svd: non-finite entries");
  }
  Eigen::JacobiSVD<ComplexMatrix> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

/// log2 |I + scale * A A^H N^{-1}| with N = noise_cov or identity.
///
/// Evaluated through Cholesky factorizations; the noise covariance is
/// whitened first, so the determinant argument stays Hermitian positive
/// definite. noise_cov must be Hermitian positive definite with side
/// equal to rows(a).
inline double log_det_i_plus(double scale, const ComplexMatrix& a,
                             const ComplexMatrix* noise_cov = nullptr) {
  if (!a.allFinite() || !std::isfinite(scale) || scale < 0.0) {
    throw std::runtime_error("log_det_i_plus: non-finite input");
  }
  const Eigen::Index n = a.rows();
  ComplexMatrix b;
  if (noise_cov != nullptr) {
    if (noise_cov->rows() != n || noise_cov->cols() != n) {
      throw std::invalid_argument("log_det_i_plus: noise_cov side mismatch");
    }
    Eigen::LLT<ComplexMatrix> llt(*noise_cov);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("log_det_i_plus: noise_cov not positive definite");
    }
    b = llt.matrixL().solve(a);
  } else {
    b = a;
  }
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  m.noalias() += scale * b * b.adjoint();
  Eigen::LLT<ComplexMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("log_det_i_plus: factorization failed");
  }
  double log2det = 0.0;
  ComplexMatrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < n; ++i) {
    log2det += 2.0 * std::log2(l(i, i).real());
  }
  return log2det;
}

}  // namespace relaydmt
