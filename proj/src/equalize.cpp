#include "scdde/equalize.hpp"

#include <cmath>
#include <stdexcept>

namespace scdde {

namespace {

void require_geometry(const CVector& r, const DdeWeights& w) {
  if (w.L * w.K != w.W.rows() || r.size() != w.W.rows())
    throw std::invalid_argument("equalizer: block length does not match the weight geometry");
}

CVector delay_response(const ChannelRealization& ch) {
  const Index n = ch.N();
  CVector impulse = CVector::Zero(n);
  for (const auto& tap : ch.taps()) impulse(detail::wrap(tap.delay, n)) += tap.gain;
  std::vector<cplx> in(impulse.data(), impulse.data() + n), out;
  detail::thread_fft<double>().fwd(out, in);
  return Eigen::Map<CVector>(out.data(), n);
}

CVector fde_coefficients(const CVector& response, double gamma) {
  return response.conjugate().array() / (response.array().abs2() + 1.0 / gamma);
}

}  // namespace

SparseCMatrix sparse_view(const CMatrix& m, double relative_tol) {
  const double cutoff = relative_tol * (m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  return m.sparseView(1.0, cutoff);
}

DdeWeights dde_weights(const CMatrix& Hdd, double gamma, Index L, Index K) {
  if (!(gamma > 0.0)) throw std::invalid_argument("dde_weights: gamma must be positive");
  if (Hdd.rows() != Hdd.cols()) throw std::invalid_argument("dde_weights: H^D must be square");
  if (L < 1 || K < 1 || L * K != Hdd.rows()) throw std::invalid_argument("dde_weights: L*K != N");
  // H^D is P-sparse per column for integer taps, so the Gram matrix is cheap.
  const SparseCMatrix hs = sparse_view(Hdd);
  const SparseCMatrix hs_adj = hs.adjoint();
  CMatrix gram = CMatrix(hs_adj * hs);
  gram.diagonal().array() += 1.0 / gamma;
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw std::runtime_error("dde_weights: Cholesky factorization failed");
  DdeWeights out;
  out.W = llt.solve(CMatrix(hs_adj));
  if (!out.W.allFinite()) throw std::runtime_error("dde_weights: non-finite weights");
  out.gamma = gamma;
  out.L = L;
  out.K = K;
  return out;
}

EqualizedBlock sc_dde_equalize(const CVector& r, const DdeWeights& weights) {
  require_geometry(r, weights);
  const DDGrid rdd = dzt(r, weights.L, weights.K);
  const CVector equalized = weights.W * rdd.vec();
  return {idzt(DDGrid::from_vec(equalized, weights.L, weights.K)), EqualizedDomain::time};
}

EqualizedBlock otfs_equalize(const CVector& r, const DdeWeights& weights) {
  require_geometry(r, weights);
  const DDGrid rdd = dzt(r, weights.L, weights.K);
  return {weights.W * rdd.vec(), EqualizedDomain::delay_doppler};
}

EqualizedBlock sc_fde_equalize(const CVector& r, const ChannelRealization& taps, double gamma) {
  if (r.size() != taps.N()) throw std::invalid_argument("sc_fde_equalize: length(r) != N");
  if (!(gamma > 0.0)) throw std::invalid_argument("sc_fde_equalize: gamma must be positive");
  const CVector coeff = fde_coefficients(delay_response(taps), gamma);
  auto& fft = detail::thread_fft<double>();
  std::vector<cplx> in(r.data(), r.data() + r.size()), spectrum, out;
  fft.fwd(spectrum, in);
  for (std::size_t f = 0; f < spectrum.size(); ++f) spectrum[f] *= coeff(static_cast<Index>(f));
  fft.inv(out, spectrum);
  return {Eigen::Map<CVector>(out.data(), r.size()), EqualizedDomain::time};
}

EqualizerStats dde_stats(const DdeWeights& weights, const CMatrix& Hdd, double Es, double N0) {
  const Index n = weights.W.rows();
  if (Hdd.rows() != n || Hdd.cols() != n) throw std::invalid_argument("dde_stats: dimension mismatch");
  const CMatrix composite = weights.W * sparse_view(Hdd);
  EqualizerStats s;
  s.bias = composite.diagonal();
  const Eigen::VectorXd row_energy = composite.rowwise().squaredNorm();
  const Eigen::VectorXd noise_gain = weights.W.rowwise().squaredNorm();
  s.variance = Es * (row_energy - s.bias.cwiseAbs2()) + N0 * noise_gain;
  s.mean_bias = s.bias.mean();
  const double dn = static_cast<double>(n);
  s.mean_variance = (Es * (row_energy.sum() - dn * std::norm(s.mean_bias)) + N0 * noise_gain.sum()) / dn;
  return s;
}

EqualizerStats fde_stats(const ChannelRealization& taps, double gamma, double Es, double N0) {
  const CVector response = delay_response(taps);
  const CVector coeff = fde_coefficients(response, gamma);
  const CVector per_bin = coeff.cwiseProduct(response);
  EqualizerStats s;
  s.mean_bias = per_bin.mean();
  s.mean_variance = Es * (per_bin.cwiseAbs2().mean() - std::norm(s.mean_bias)) + N0 * coeff.cwiseAbs2().mean();
  s.bias = CVector::Constant(taps.N(), s.mean_bias);
  s.variance = Eigen::VectorXd::Constant(taps.N(), s.mean_variance);
  return s;
}

}  // namespace scdde
