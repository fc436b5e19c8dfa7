#pragma once

// Discrete Zak transform (DZT), its inverse, the vectorized (matrix) form
// F_K (x) I_L, and quasi-periodic indexing of delay-Doppler grids.
//
// Every transform here is unitary. Grids are stored column-major so that
// vec(V) places element (l, k) at linear index l + k*L.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/KroneckerProduct>

namespace scdde {

using Index = Eigen::Index;
using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

namespace detail {

template <typename T>
struct real_of {
  using type = T;
};
template <typename T>
struct real_of<std::complex<T>> {
  using type = T;
};

template <typename Real>
Eigen::FFT<Real>& thread_fft() {
  // Eigen::FFT caches plans internally and is not safe to share across threads.
  thread_local Eigen::FFT<Real> fft;
  return fft;
}

inline Index floor_div(Index a, Index b) {
  Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Index wrap(Index a, Index n) { return a - floor_div(a, n) * n; }

}  // namespace detail

/// L x K delay-Doppler grid. Row = delay bin l, column = Doppler bin k.
template <typename Scalar = cplx>
class BasicDDGrid {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicDDGrid() = default;
  BasicDDGrid(Index delay_bins, Index doppler_bins)
      : values_(Matrix::Zero(delay_bins, doppler_bins)) {
    if (delay_bins < 1 || doppler_bins < 1)
      throw std::invalid_argument("DDGrid: L and K must be positive");
  }
  explicit BasicDDGrid(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1)
      throw std::invalid_argument("DDGrid: L and K must be positive");
  }

  /// Reshapes a vectorized grid (index l + k*L) back into L x K.
  static BasicDDGrid from_vec(const Vector& v, Index delay_bins, Index doppler_bins) {
    if (v.size() != delay_bins * doppler_bins)
      throw std::invalid_argument("DDGrid::from_vec: size != L*K");
    return BasicDDGrid(Matrix(Eigen::Map<const Matrix>(v.data(), delay_bins, doppler_bins)));
  }

  Index L() const { return values_.rows(); }
  Index K() const { return values_.cols(); }
  Index size() const { return values_.size(); }

  Scalar& operator()(Index l, Index k) { return values_(l, k); }
  const Scalar& operator()(Index l, Index k) const { return values_(l, k); }

  const Matrix& matrix() const { return values_; }
  Matrix& matrix() { return values_; }

  Eigen::Map<const Vector> vec() const { return {values_.data(), values_.size()}; }
  Eigen::Map<Vector> vec() { return {values_.data(), values_.size()}; }

 private:
  Matrix values_;
};

using DDGrid = BasicDDGrid<>;

/// Unitary DFT matrix, entry (m, n) = exp(-j 2 pi m n / N) / sqrt(N).
template <typename Real = double>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> dft_matrix(Index n) {
  if (n < 1) throw std::invalid_argument("dft_matrix: N must be positive");
  using C = std::complex<Real>;
  Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> f(n, n);
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(n));
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) {
      // reduce the exponent modulo n before forming the angle
      const Index e = (r * c) % n;
      const Real angle = -Real(2) * std::numbers::pi_v<Real> * static_cast<Real>(e) / static_cast<Real>(n);
      f(r, c) = std::polar(scale, angle);
    }
  return f;
}

/// Vectorized DZT matrix Z = F_K (x) I_L together with its geometry.
template <typename Real = double>
struct BasicVdztMatrix {
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> matrix;
  Index L = 0;
  Index K = 0;
};

using VdztMatrix = BasicVdztMatrix<>;

template <typename Real = double>
BasicVdztMatrix<Real> vdzt_matrix(Index delay_bins, Index doppler_bins) {
  if (delay_bins < 1 || doppler_bins < 1)
    throw std::invalid_argument("vdzt_matrix: L and K must be positive");
  using M = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  const M identity = M::Identity(delay_bins, delay_bins);
  M z = Eigen::kroneckerProduct(dft_matrix<Real>(doppler_bins), identity);
  return {std::move(z), delay_bins, doppler_bins};
}

namespace detail {

// Applies the unitary K-point (I)DFT to every stride-L subsequence of a
// length-LK column, in place. This is the FFT path of the DZT.
template <typename Real, typename Derived>
void stride_dft_inplace(Eigen::MatrixBase<Derived>& column, Index delay_bins, Index doppler_bins,
                        bool inverse) {
  using C = std::complex<Real>;
  auto& fft = thread_fft<Real>();
  std::vector<C> in(static_cast<std::size_t>(doppler_bins));
  std::vector<C> out;
  const Real scale = inverse ? std::sqrt(static_cast<Real>(doppler_bins))
                             : Real(1) / std::sqrt(static_cast<Real>(doppler_bins));
  for (Index l = 0; l < delay_bins; ++l) {
    for (Index m = 0; m < doppler_bins; ++m) in[static_cast<std::size_t>(m)] = column(l + m * delay_bins);
    if (inverse)
      fft.inv(out, in);  // Eigen::FFT::inv divides by K
    else
      fft.fwd(out, in);
    for (Index m = 0; m < doppler_bins; ++m) column(l + m * delay_bins) = out[static_cast<std::size_t>(m)] * scale;
  }
}

}  // namespace detail

/// (L, K)-point DZT of a length-LK sequence:
/// V(l, k) = K^{-1/2} sum_m u[l + mL] exp(-j 2 pi k m / K).
template <typename Derived>
BasicDDGrid<typename Derived::Scalar> dzt(const Eigen::MatrixBase<Derived>& u, Index delay_bins,
                                          Index doppler_bins) {
  using Scalar = typename Derived::Scalar;
  using Real = typename detail::real_of<Scalar>::type;
  static_assert(!std::is_same_v<Scalar, Real>, "dzt expects complex samples");
  if (delay_bins < 1 || doppler_bins < 1) throw std::invalid_argument("dzt: L and K must be positive");
  if (u.size() != delay_bins * doppler_bins) throw std::invalid_argument("dzt: length(u) != L*K");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = u;
  detail::stride_dft_inplace<Real>(v, delay_bins, doppler_bins, false);
  return BasicDDGrid<Scalar>::from_vec(v, delay_bins, doppler_bins);
}

/// Inverse DZT: u[l + kL] = K^{-1/2} sum_m V(l, m) exp(j 2 pi m k / K).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> idzt(const BasicDDGrid<Scalar>& grid) {
  using Real = typename detail::real_of<Scalar>::type;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> u = grid.vec();
  detail::stride_dft_inplace<Real>(u, grid.L(), grid.K(), true);
  return u;
}

/// Z * M for every column of M (rows = LK).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> vdzt_apply(
    const Eigen::MatrixBase<Derived>& m, Index delay_bins, Index doppler_bins) {
  using Scalar = typename Derived::Scalar;
  using Real = typename detail::real_of<Scalar>::type;
  if (m.rows() != delay_bins * doppler_bins) throw std::invalid_argument("vdzt_apply: rows != L*K");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = m;
  for (Index c = 0; c < out.cols(); ++c) {
    auto col = out.col(c);
    detail::stride_dft_inplace<Real>(col, delay_bins, doppler_bins, false);
  }
  return out;
}

/// Z^H * M for every column of M.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> vdzt_adjoint_apply(
    const Eigen::MatrixBase<Derived>& m, Index delay_bins, Index doppler_bins) {
  using Scalar = typename Derived::Scalar;
  using Real = typename detail::real_of<Scalar>::type;
  if (m.rows() != delay_bins * doppler_bins) throw std::invalid_argument("vdzt_adjoint_apply: rows != L*K");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = m;
  for (Index c = 0; c < out.cols(); ++c) {
    auto col = out.col(c);
    detail::stride_dft_inplace<Real>(col, delay_bins, doppler_bins, true);
  }
  return out;
}

/// Quasi-periodic lookup: periodic in Doppler, and
/// V(l + mL, k) = V(l, k) exp(j 2 pi k m / K) in delay.
template <typename Scalar>
Scalar dd_lookup(const BasicDDGrid<Scalar>& grid, Index l, Index k) {
  using Real = typename detail::real_of<Scalar>::type;
  const Index delay_bins = grid.L();
  const Index doppler_bins = grid.K();
  const Index m = detail::floor_div(l, delay_bins);
  const Index l0 = l - m * delay_bins;
  const Index k0 = detail::wrap(k, doppler_bins);
  const Scalar stored = grid(l0, k0);
  if (m == 0) return stored;
  const Index turns = detail::wrap(k0 * m, doppler_bins);
  const Real angle = Real(2) * std::numbers::pi_v<Real> * static_cast<Real>(turns) / static_cast<Real>(doppler_bins);
  return stored * std::polar(Real(1), angle);
}

}  // namespace scdde
