#pragma once

// Embedded-pilot frames for SC-DDE (and the matching DD-domain layout for
// OTFS), plus DD-domain estimation of the path gains.
//
// One DD pilot psi sits at (l_pilot, k_pilot). The L_guard delay rows on
// either side of the pilot row carry nothing, and data fills the remaining
// delay rows. Since DD row l depends only on the stride-L time subsequence
// l, the SC data can be placed directly in the time domain.

#include <vector>

#include "scdde/channel.hpp"
#include "scdde/zak.hpp"

namespace scdde {

struct PilotLayout {
  Index l_pilot = 0;
  Index k_pilot = 0;
  Index guard = 0;         // L_guard, null delay rows on each side of the pilot
  double energy = 1.0;     // E_pilot = |psi|^2

  cplx psi() const { return {std::sqrt(energy), 0.0}; }
  void validate(Index L, Index K) const;
};

struct DataCapacity {
  Index n_data = 0;
  double data_fraction = 0.0;  // N_data / N = 1 - (2 L_guard + 1) / L
};

DataCapacity data_capacity(Index L, Index K, Index guard);

/// Linear indices (time positions for SC, vec positions l + kL for a DD
/// grid) that carry data, in transmission order: Doppler chunk k outer,
/// delay row inner.
std::vector<Index> data_positions(const PilotLayout& layout, Index L, Index K);

/// IDZT of the single-entry pilot grid:
/// x[l_pilot + kL] = psi exp(j 2 pi k_pilot k / K) / sqrt(K).
CVector pilot_time_vector(const PilotLayout& layout, Index L, Index K);

struct FrameAssembly {
  CVector x;
  std::vector<Index> positions;
  Index n_data = 0;
};

/// Time-domain SC frame x_data + x_pilot.
FrameAssembly assemble_frame(const CVector& data, const PilotLayout& layout, Index L, Index K);

/// OTFS counterpart: pilot and data placed on the same DD resources.
DDGrid assemble_dd_frame(const CVector& data, const PilotLayout& layout, Index L, Index K);

/// h_p = R(l_pilot + l_p, k_pilot + k_p) / psi with quasi-periodic lookup.
/// For l_pilot != 0 the delayed pilot also carries exp(j 2 pi k_p l_pilot / N),
/// which is removed. Throws if the guard does not cover the delay spread.
std::vector<cplx> estimate_taps(const DDGrid& rdd, const PilotLayout& layout,
                                const std::vector<TapPosition>& known_taps);

ChannelRealization channel_from_estimates(const std::vector<TapPosition>& known_taps,
                                          const std::vector<cplx>& gains, Index N);

CVector extract_data(const CVector& y, const std::vector<Index>& positions);

}  // namespace scdde
