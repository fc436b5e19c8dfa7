#pragma once

// Bit mapping, SC / OTFS / OFDM block modulators with oversampled synthesis,
// cyclic prefix handling and the per-block PAPR meter.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scdde/zak.hpp"

namespace scdde {

using Bits = std::vector<std::uint8_t>;

enum class Modulation { bpsk, ps_bpsk, qpsk, ps_qpsk };

std::string_view to_string(Modulation m);
Modulation parse_modulation(std::string_view name);

/// Constellation and phase-ramp convention. PS-BPSK rotates symbol n by
/// exp(j pi n / 2), PS-QPSK by exp(j pi n / 4).
struct ModulationScheme {
  Modulation kind = Modulation::bpsk;
  double Es = 1.0;

  int bits_per_symbol() const;
  bool phase_shifted() const { return kind == Modulation::ps_bpsk || kind == Modulation::ps_qpsk; }
  /// Unrotated constellation, indexed by the Gray label of the bits.
  std::vector<cplx> points() const;
  /// Deterministic rotation applied to symbol index n (unit modulus).
  cplx phase_ramp(Index n) const;
};

/// Block geometry. L*K must equal N.
struct FrameConfig {
  Index N = 1024;
  Index L = 32;
  Index K = 32;
  int J = 1;
  Index n_cp = 0;
  double T0 = 1.0;
  double Es = 1.0;

  void validate() const;
  double block_duration() const { return static_cast<double>(N) * T0; }
  double mainlobe_bandwidth() const { return 1.0 / T0; }
};

/// J-times oversampled block, optionally carrying a J*n_cp sample prefix.
struct OversampledSignal {
  CVector samples;
  int J = 1;
  Index cp_samples = 0;

  double sample_spacing(double T0) const { return T0 / J; }
  Eigen::Map<const CVector> body() const {
    return {samples.data() + cp_samples, samples.size() - cp_samples};
  }
};

CVector modulate_bits(std::span<const std::uint8_t> bits, const ModulationScheme& scheme);

/// Zero-padded IDFT synthesis of a Nyquist-rate time block. Amplitudes are
/// scaled so samples at stride J reproduce the input block exactly.
OversampledSignal oversample(const CVector& time_block, int J, Index n_cp = 0);

/// DFT-precoded single-carrier block F_{N,J}^H F_N x (with CP if configured).
OversampledSignal sc_transmit(const CVector& x, const FrameConfig& cfg);

/// OTFS symbol vector: the IDZT of the DD grid.
CVector otfs_transmit(const DDGrid& grid);
OversampledSignal otfs_waveform(const DDGrid& grid, const FrameConfig& cfg);

/// OFDM is OTFS on a 1 x N grid: a plain unitary IDFT of x.
OversampledSignal ofdm_transmit(const CVector& x, const FrameConfig& cfg);

struct Papr {
  double linear = 0.0;
  double db = 0.0;
};

/// Peak over mean power of the CP-free part of the block.
Papr papr_of_block(const OversampledSignal& sig);

CVector add_cp(const CVector& samples, Index cp_len);
CVector remove_cp(const CVector& samples, Index cp_len);

}  // namespace scdde
