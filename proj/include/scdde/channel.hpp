#pragma once

// Doubly-selective channel with integer delay/Doppler taps on a circular
// (CP-sufficient) block model, plus its time-domain and DD-domain matrices.

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "scdde/random.hpp"
#include "scdde/zak.hpp"

namespace scdde {

using SparseCMatrix = Eigen::SparseMatrix<cplx>;

/// Delay tap l (multiples of T0) and Doppler tap k (multiples of 1/(N T0)).
struct TapPosition {
  int delay = 0;
  int doppler = 0;
  friend bool operator==(const TapPosition&, const TapPosition&) = default;
};

struct PathTap {
  cplx gain{1.0, 0.0};
  int delay = 0;
  int doppler = 0;
  TapPosition position() const { return {delay, doppler}; }
};

enum class Fading { rayleigh, fixed };

/// Tap positions with an equal power profile. With `normalized`, each path
/// carries power 1/P so the total is one; otherwise each path has power one.
struct ChannelProfile {
  std::vector<TapPosition> taps;
  bool normalized = true;
  Fading fading = Fading::rayleigh;

  ChannelProfile() = default;
  ChannelProfile(std::vector<TapPosition> taps, bool normalized = true, Fading fading = Fading::rayleigh);

  Index paths() const { return static_cast<Index>(taps.size()); }
  double path_power() const { return normalized ? 1.0 / static_cast<double>(taps.size()) : 1.0; }
  double total_power() const { return path_power() * static_cast<double>(taps.size()); }
  int max_delay() const;
  int max_doppler() const;
};

class ChannelRealization {
 public:
  ChannelRealization(std::vector<PathTap> taps, Index block_length);

  const std::vector<PathTap>& taps() const { return taps_; }
  Index N() const { return n_; }
  int max_delay() const;
  int max_doppler() const;
  double max_delay_time(double T0) const { return max_delay() * T0; }
  double max_doppler_frequency(double T0) const { return max_doppler() / (static_cast<double>(n_) * T0); }

 private:
  std::vector<PathTap> taps_;
  Index n_;
};

struct NoiseModel {
  double N0 = 0.0;  // zero only in noiseless test runs
};

/// The eight (l, k) pairs of the reference doubly-selective profile.
std::vector<TapPosition> profile_table2();

/// Reads a profile file: `P = <int>`, `normalize = true|false`,
/// `fading = rayleigh|fixed`, and one `path = <l>, <k>` line per tap.
ChannelProfile load_profile(const std::filesystem::path& file);
ChannelProfile parse_profile(const std::string& text);

/// h_p ~ CN(0, path_power) independently per path (or fixed sqrt(path_power)
/// when the profile is not fading).
ChannelRealization sample_rayleigh(const ChannelProfile& profile, Index block_length, RandomStream& rng);

/// r_n = sum_p h_p exp(j 2 pi k_p (n - l_p) / N) x[(n - l_p) mod N] + eta_n.
CVector apply_channel(const CVector& x, const ChannelRealization& ch, const NoiseModel& noise, RandomStream& rng);
CVector apply_channel(const CVector& x, const ChannelRealization& ch);

/// H = sum_p h_p Pi^{l_p} Delta^{k_p}.
CMatrix build_time_matrix(const ChannelRealization& ch);
SparseCMatrix build_time_matrix_sparse(const ChannelRealization& ch);

/// H^D = Z H Z^H, evaluated with the FFT-based DZT on rows and columns.
CMatrix dd_channel_matrix(const CMatrix& H, Index L, Index K);

/// gamma_s = (sum_p E|h_p|^2) Es / N0.
double received_snr(const ChannelProfile& profile, double Es, double N0);
double received_snr(double total_path_power, double Es, double N0);

/// Rejects grids that cannot resolve the profile: needs L > l_max and K > 2 k_max.
void check_dd_feasibility(int max_delay, int max_doppler, Index L, Index K);

}  // namespace scdde
