#include "scdde/oracles.hpp"

#include <cmath>
#include <numbers>

namespace scdde::oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx expj(double phase) { return std::polar(1.0, phase); }

Index mod(Index a, Index n) { return ((a % n) + n) % n; }

}  // namespace

CMatrix dzt_direct(const CVector& u, Index L, Index K) {
  CMatrix V(L, K);
  for (Index l = 0; l < L; ++l)
    for (Index k = 0; k < K; ++k) {
      cplx acc = 0.0;
      for (Index m = 0; m < K; ++m)
        acc += u(l + m * L) * expj(-kTwoPi * static_cast<double>(k * m) / static_cast<double>(K));
      V(l, k) = acc / std::sqrt(static_cast<double>(K));
    }
  return V;
}

CVector idzt_direct(const CMatrix& V) {
  const Index L = V.rows(), K = V.cols();
  CVector u(L * K);
  for (Index l = 0; l < L; ++l)
    for (Index m = 0; m < K; ++m) {
      cplx acc = 0.0;
      for (Index k = 0; k < K; ++k)
        acc += V(l, k) * expj(kTwoPi * static_cast<double>(k * m) / static_cast<double>(K));
      u(l + m * L) = acc / std::sqrt(static_cast<double>(K));
    }
  return u;
}

CMatrix dd_relation_direct(const CMatrix& X, const std::vector<PathTap>& taps, Index N) {
  const Index L = X.rows(), K = X.cols();
  CMatrix Y = CMatrix::Zero(L, K);
  for (const auto& t : taps)
    for (Index l = 0; l < L; ++l)
      for (Index k = 0; k < K; ++k) {
        const Index ls = mod(l - t.delay, L);
        const Index ks = mod(k - t.doppler, K);
        cplx phase = expj(kTwoPi * static_cast<double>(t.doppler) * static_cast<double>(ls) / static_cast<double>(N));
        // Wrapping the delay back by L costs one Doppler-bin rotation.
        if (l < t.delay) phase *= expj(-kTwoPi * static_cast<double>(k) / static_cast<double>(K));
        Y(l, k) += t.gain * phase * X(ls, ks);
      }
  return Y;
}

CVector psinc_samples(const CVector& x, int J) {
  const Index N = x.size();
  const auto n_f = static_cast<double>(N);
  CVector s = CVector::Zero(J * N);
  for (Index m = 0; m < J * N; ++m)
    for (Index n = 0; n < N; ++n) {
      const double t = static_cast<double>(m) / J - static_cast<double>(n);
      const double den = n_f * std::sin(std::numbers::pi * t / n_f);
      const double ratio = std::abs(den) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * t) / den;
      s(m) += x(n) * expj(std::numbers::pi * (1.0 - 1.0 / n_f) * t) * ratio;
    }
  return s;
}

CVector channel_direct(const CVector& x, const std::vector<PathTap>& taps) {
  const Index N = x.size();
  CVector r = CVector::Zero(N);
  for (Index n = 0; n < N; ++n)
    for (const auto& t : taps)
      r(n) += t.gain * expj(kTwoPi * static_cast<double>(t.doppler * (n - t.delay)) / static_cast<double>(N)) *
              x(mod(n - t.delay, N));
  return r;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double bpsk_awgn_ber(double es_n0_db) { return q_function(std::sqrt(2.0 * std::pow(10.0, es_n0_db / 10.0))); }

}  // namespace scdde::oracle
