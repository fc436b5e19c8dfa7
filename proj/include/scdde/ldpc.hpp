#pragma once

// Regular (3,6) rate-1/2 LDPC code: randomized construction without
// 4-cycles, systematic GF(2) encoder, soft demapper and sum-product decoder.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "scdde/waveform.hpp"

namespace scdde {

inline constexpr double kLlrClamp = 40.0;

class ParityCheckMatrix {
 public:
  static constexpr int kColumnWeight = 3;
  static constexpr int kRowWeight = 6;

  Index n() const { return n_; }
  Index m() const { return m_; }
  Index k() const { return n_ - m_; }
  /// Seed that produced this matrix (the requested seed, or a later one if
  /// earlier attempts were rejected).
  std::uint64_t seed() const { return seed_; }

  const std::vector<std::vector<Index>>& checks() const { return check_vars_; }
  const std::vector<std::vector<Index>>& variables() const { return var_checks_; }
  /// Codeword positions carrying the information bits verbatim.
  const std::vector<Index>& info_positions() const { return info_positions_; }
  const std::vector<Index>& parity_positions() const { return parity_positions_; }

  Bits syndrome(std::span<const std::uint8_t> word) const;
  bool is_codeword(std::span<const std::uint8_t> word) const;
  /// Length of the shortest cycle through the Tanner graph, or 0 if acyclic.
  int girth() const;

 private:
  friend ParityCheckMatrix build_ldpc(Index n, std::uint64_t seed);
  friend Bits encode(std::span<const std::uint8_t> info, const ParityCheckMatrix& code);

  Index n_ = 0;
  Index m_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::vector<Index>> check_vars_;
  std::vector<std::vector<Index>> var_checks_;
  std::vector<Index> info_positions_;
  std::vector<Index> parity_positions_;
  // parity bit r = <parity_masks_[r], packed info bits> over GF(2)
  std::vector<std::vector<std::uint64_t>> parity_masks_;
};

/// Deterministic in (n, seed). Throws std::invalid_argument for bad n and
/// std::runtime_error when no 4-cycle-free full-rank matrix is found.
ParityCheckMatrix build_ldpc(Index n, std::uint64_t seed);

Bits encode(std::span<const std::uint8_t> info, const ParityCheckMatrix& code);

/// Bit LLRs (positive favours 0) for bias-normalized equalizer outputs.
/// `sigma2` holds the per-symbol effective noise variance; the phase ramp
/// of PS schemes is removed using the symbol index.
Eigen::VectorXd demap_llr(const CVector& y, const ModulationScheme& scheme, const Eigen::VectorXd& sigma2);

/// Hard decisions from LLRs (ties decide 0).
Bits hard_decisions(const Eigen::VectorXd& llr);

struct DecodeResult {
  Bits info;
  Bits codeword;
  bool converged = false;
  int iterations = 0;
};

/// Flooding sum-product (tanh rule) with syndrome-based early stopping.
DecodeResult decode_bp(const Eigen::VectorXd& llr, const ParityCheckMatrix& code, int max_iters = 50);

void write_alist(std::ostream& out, const ParityCheckMatrix& code);

}  // namespace scdde
