#pragma once

// Linear MMSE equalization in the delay-Doppler domain (SC-DDE and OTFS
// receive paths) and the one-tap SC-FDE baseline.

#include <vector>

#include "scdde/channel.hpp"
#include "scdde/zak.hpp"

namespace scdde {

/// W = (H^H H + I / gamma)^{-1} H^H for a DD-domain channel H on an L x K grid.
struct DdeWeights {
  CMatrix W;
  double gamma = 0.0;
  Index L = 0;
  Index K = 0;
};

enum class EqualizedDomain { time, delay_doppler };

struct EqualizedBlock {
  CVector y;
  EqualizedDomain domain = EqualizedDomain::time;
};

/// Solves the regularized normal equations through a Cholesky factorization
/// of the Hermitian positive-definite Gram matrix. Throws std::runtime_error
/// when the factorization fails or produces non-finite weights.
DdeWeights dde_weights(const CMatrix& Hdd, double gamma, Index L, Index K);

/// y = Z^H W Z r, computed as DZT -> W -> IDZT.
EqualizedBlock sc_dde_equalize(const CVector& r, const DdeWeights& weights);

/// y = W Z r (DD-domain estimates, no postcoding).
EqualizedBlock otfs_equalize(const CVector& r, const DdeWeights& weights);

/// One-tap frequency-domain MMSE using only the delay profile of the taps
/// (Doppler is ignored), followed by an IDFT.
EqualizedBlock sc_fde_equalize(const CVector& r, const ChannelRealization& taps, double gamma);

/// Post-equalization signal model y_n = mu_n x_n + e_n, with var(e_n) given
/// the transmitted symbol energy Es and noise N0.
struct EqualizerStats {
  CVector bias;             // mu_n
  Eigen::VectorXd variance; // E|e_n|^2
  cplx mean_bias{0.0, 0.0};
  double mean_variance = 0.0;
};

/// Per-DD-symbol statistics of the DDE output. The block means also hold
/// for the postcoded SC output, since the unitary IDZT spreads the residual
/// of every DD symbol over the whole time block.
EqualizerStats dde_stats(const DdeWeights& weights, const CMatrix& Hdd, double Es, double N0);

/// Statistics of the SC-FDE output under its own (delay-only) channel model.
EqualizerStats fde_stats(const ChannelRealization& taps, double gamma, double Es, double N0);

/// Drops entries below `relative_tol` times the largest magnitude.
SparseCMatrix sparse_view(const CMatrix& m, double relative_tol = 1e-13);

}  // namespace scdde
