#pragma once

// Slow reference implementations written straight from the defining sums.
// They share no code with the fast paths and exist for tests and selftest.

#include <vector>

#include "scdde/channel.hpp"
#include "scdde/zak.hpp"

namespace scdde::oracle {

/// V(l,k) = K^{-1/2} sum_m u[l + mL] e^{-j 2 pi k m / K}, evaluated term by term.
CMatrix dzt_direct(const CVector& u, Index L, Index K);

/// Inverse of dzt_direct by the defining sum over k.
CVector idzt_direct(const CMatrix& V);

/// Received DD grid for input grid X under integer taps, from the per-tap
/// shift and phase rule (no matrices involved).
CMatrix dd_relation_direct(const CMatrix& X, const std::vector<PathTap>& taps, Index N);

/// Sampled periodic-sinc synthesis s(m T0 / J) for m in [0, JN).
CVector psinc_samples(const CVector& x, int J);

/// Time-domain channel output by the defining sum.
CVector channel_direct(const CVector& x, const std::vector<PathTap>& taps);

double q_function(double x);

/// Uncoded BPSK error probability on AWGN at Es/N0 given in dB.
double bpsk_awgn_ber(double es_n0_db);

}  // namespace scdde::oracle
