#pragma once

// Simulation configuration files.
//
// INI-style text: `key = value` lines, `#` comments. Keys before the first
// section (or inside `[defaults]`) apply to every run; each `[run <label>]`
// section describes one curve and overrides the defaults. A file without run
// sections describes a single run.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scdde/chanest.hpp"
#include "scdde/channel.hpp"
#include "scdde/waveform.hpp"

namespace scdde {

enum class Scheme { sc_dde, otfs, sc_fde, ofdm };
enum class Csi { ideal, estimated };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

struct SimConfig {
  std::string label;
  Scheme scheme = Scheme::sc_dde;
  FrameConfig frame;
  ModulationScheme modulation;
  std::string profile_ref = "table2";
  ChannelProfile profile{profile_table2()};
  std::optional<Index> guard;       // embedded pilot when set
  Index pilot_l = 0;
  Index pilot_k = 0;
  double pilot_energy_ratio = 1.0;  // E_pilot / (K Es)
  Csi csi = Csi::ideal;
  bool coded = false;
  std::uint64_t code_seed = 1;
  int decoder_iterations = 50;
  std::vector<double> snr_db;
  std::uint64_t blocks = 10000;          // PAPR runs
  std::uint64_t max_blocks = 20000;      // BER runs
  std::uint64_t target_bit_errors = 100;
  std::uint64_t target_block_errors = 50;
  std::uint64_t seed = 1;
  int workers = 1;

  /// Grid used by the DD receiver / modulator (1 x N for OFDM).
  Index grid_L() const { return scheme == Scheme::ofdm ? 1 : frame.L; }
  Index grid_K() const { return scheme == Scheme::ofdm ? frame.N : frame.K; }
  std::optional<PilotLayout> pilot_layout() const;
  /// Modulated data symbols per block.
  Index data_symbols() const;
  /// Average energy of the transmitted block samples (data plus pilot).
  double transmit_energy() const;
  std::string display_label() const;

  /// Throws std::invalid_argument on infeasible combinations.
  void validate() const;
};

std::vector<SimConfig> parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
std::vector<SimConfig> load_config(const std::filesystem::path& file);

/// Builtin `table2` and `awgn`, otherwise a profile file path.
ChannelProfile resolve_profile(const std::string& ref, const std::filesystem::path& base_dir);

/// Parses `a:step:b` ranges or comma-separated lists.
std::vector<double> parse_snr_list(const std::string& text);

/// Worker count from SCDDE_WORKERS when set, else `fallback`.
int worker_override(int fallback);

}  // namespace scdde
