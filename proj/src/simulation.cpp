#include "scdde/simulation.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "scdde/equalize.hpp"

namespace scdde {

struct LinkSimulator::Receiver {
  std::optional<DdeWeights> weights;        // SC-DDE, OTFS, OFDM
  std::optional<ChannelRealization> taps;   // SC-FDE
  double gamma = 0.0;
  CVector bias;                             // per output symbol
  Eigen::VectorXd variance;
  CVector pilot_echo;                       // equalizer output for the pilot alone
};

namespace {

bool dd_scheme(Scheme s) { return s != Scheme::sc_fde; }

bool per_symbol_stats(Scheme s) { return s == Scheme::otfs || s == Scheme::ofdm; }

std::uint64_t count_errors(const Bits& a, const Bits& b) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

Bits random_bits(RandomStream& rng, Index n) {
  Bits out(static_cast<std::size_t>(n));
  for (auto& b : out) b = rng.bit();
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

LinkSimulator::LinkSimulator(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const Index n_sym = cfg_.data_symbols();
  if (cfg_.coded)
    code_ = std::make_shared<const ParityCheckMatrix>(build_ldpc(n_sym * cfg_.modulation.bits_per_symbol(), cfg_.code_seed));
  if (const auto pilot = cfg_.pilot_layout()) {
    positions_ = data_positions(*pilot, cfg_.grid_L(), cfg_.grid_K());
  } else {
    positions_.resize(static_cast<std::size_t>(cfg_.frame.N));
    for (Index i = 0; i < cfg_.frame.N; ++i) positions_[static_cast<std::size_t>(i)] = i;
  }

  // With deterministic gains and perfect CSI the receiver only depends on the SNR.
  if (cfg_.profile.fading == Fading::fixed && cfg_.csi == Csi::ideal) {
    RandomStream unused(cfg_.seed);
    const ChannelRealization ch = sample_rayleigh(cfg_.profile, cfg_.frame.N, unused);
    for (double snr : cfg_.snr_db) {
      const double N0 = cfg_.frame.Es / std::pow(10.0, snr / 10.0);
      fixed_receivers_.push_back(std::make_shared<const Receiver>(build_receiver(ch, N0)));
    }
  }
}

TxBlock LinkSimulator::make_block(RandomStream& payload) const {
  TxBlock tx;
  const Index n_bits = cfg_.data_symbols() * cfg_.modulation.bits_per_symbol();
  if (code_) {
    tx.info = random_bits(payload, code_->k());
    tx.bits = encode(tx.info, *code_);
  } else {
    tx.bits = random_bits(payload, n_bits);
    tx.info = tx.bits;
  }
  tx.symbols = modulate_bits(tx.bits, cfg_.modulation);

  const Index L = cfg_.grid_L(), K = cfg_.grid_K();
  const auto pilot = cfg_.pilot_layout();
  if (dd_scheme(cfg_.scheme) && cfg_.scheme != Scheme::sc_dde) {
    tx.grid = pilot ? assemble_dd_frame(tx.symbols, *pilot, L, K) : DDGrid::from_vec(tx.symbols, L, K);
    tx.x = idzt(tx.grid);
  } else {
    tx.x = pilot ? assemble_frame(tx.symbols, *pilot, L, K).x : tx.symbols;
  }
  return tx;
}

double LinkSimulator::papr_db(const TxBlock& block) const {
  switch (cfg_.scheme) {
    case Scheme::otfs: return papr_of_block(otfs_waveform(block.grid, cfg_.frame)).db;
    case Scheme::ofdm: return papr_of_block(ofdm_transmit(block.grid.vec(), cfg_.frame)).db;
    default: return papr_of_block(sc_transmit(block.x, cfg_.frame)).db;
  }
}

LinkSimulator::Receiver LinkSimulator::build_receiver(const ChannelRealization& csi, double N0) const {
  Receiver rx;
  const double Es = cfg_.frame.Es;
  rx.gamma = received_snr(cfg_.profile, Es, N0);
  EqualizerStats stats;
  if (cfg_.scheme == Scheme::sc_fde) {
    rx.taps = csi;
    stats = fde_stats(csi, rx.gamma, Es, N0);
  } else {
    const Index L = cfg_.grid_L(), K = cfg_.grid_K();
    const CMatrix Hdd = dd_channel_matrix(build_time_matrix(csi), L, K);
    rx.weights = dde_weights(Hdd, rx.gamma, L, K);
    stats = dde_stats(*rx.weights, Hdd, Es, N0);
  }
  if (per_symbol_stats(cfg_.scheme)) {
    rx.bias = stats.bias;
    rx.variance = stats.variance;
  } else {
    rx.bias = CVector::Constant(cfg_.frame.N, stats.mean_bias);
    rx.variance = Eigen::VectorXd::Constant(cfg_.frame.N, stats.mean_variance);
  }

  // The pilot is known, so its (estimated) echo is removed before detection.
  if (const auto pilot = cfg_.pilot_layout()) {
    const Index L = cfg_.grid_L(), K = cfg_.grid_K();
    const CVector p = cfg_.scheme == Scheme::sc_dde
                          ? pilot_time_vector(*pilot, L, K)
                          : idzt(assemble_dd_frame(CVector::Zero(cfg_.data_symbols()), *pilot, L, K));
    const CVector rp = apply_channel(p, csi);
    rx.pilot_echo = cfg_.scheme == Scheme::sc_dde ? sc_dde_equalize(rp, *rx.weights).y : otfs_equalize(rp, *rx.weights).y;
  }
  return rx;
}

BlockOutcome LinkSimulator::detect(const TxBlock& tx, const CVector& r, const Receiver& rx) const {
  CVector y;
  switch (cfg_.scheme) {
    case Scheme::sc_dde: y = sc_dde_equalize(r, *rx.weights).y; break;
    case Scheme::sc_fde: y = sc_fde_equalize(r, *rx.taps, rx.gamma).y; break;
    default: y = otfs_equalize(r, *rx.weights).y; break;
  }
  if (rx.pilot_echo.size()) y -= rx.pilot_echo;

  const auto n = static_cast<Index>(positions_.size());
  CVector data(n);
  Eigen::VectorXd sigma2(n);
  for (Index i = 0; i < n; ++i) {
    const Index p = positions_[static_cast<std::size_t>(i)];
    const cplx mu = rx.bias(p);
    data(i) = y(p) / mu;
    sigma2(i) = std::max(rx.variance(p) / std::norm(mu), 1e-12);
  }
  const Eigen::VectorXd llr = demap_llr(data, cfg_.modulation, sigma2);

  BlockOutcome out;
  out.raw_bits = tx.bits.size();
  out.raw_errors = count_errors(hard_decisions(llr), tx.bits);
  if (code_) {
    const DecodeResult dec = decode_bp(llr, *code_, cfg_.decoder_iterations);
    out.info_bits = tx.info.size();
    out.info_errors = count_errors(dec.info, tx.info);
  } else {
    out.info_bits = out.raw_bits;
    out.info_errors = out.raw_errors;
  }
  out.block_error = out.info_errors > 0;
  return out;
}

BlockOutcome LinkSimulator::run_block(std::size_t snr_index, std::uint64_t block) const {
  if (snr_index >= cfg_.snr_db.size()) throw std::out_of_range("run_block: SNR index");
  const std::uint64_t s = snr_index;
  RandomStream payload(cfg_.seed, {s, block, static_cast<std::uint64_t>(StreamTag::payload)});
  RandomStream fading(cfg_.seed, {s, block, static_cast<std::uint64_t>(StreamTag::channel)});
  RandomStream noise(cfg_.seed, {s, block, static_cast<std::uint64_t>(StreamTag::noise)});

  const TxBlock tx = make_block(payload);
  const ChannelRealization ch = sample_rayleigh(cfg_.profile, cfg_.frame.N, fading);
  const double N0 = cfg_.frame.Es / std::pow(10.0, cfg_.snr_db[snr_index] / 10.0);
  const CVector r = apply_channel(tx.x, ch, NoiseModel{N0}, noise);

  if (!fixed_receivers_.empty()) return detect(tx, r, *fixed_receivers_[snr_index]);
  if (cfg_.csi == Csi::ideal) return detect(tx, r, build_receiver(ch, N0));

  const PilotLayout pilot = *cfg_.pilot_layout();
  std::vector<TapPosition> known;
  for (const auto& t : ch.taps()) known.push_back(t.position());
  const auto gains = estimate_taps(dzt(r, cfg_.grid_L(), cfg_.grid_K()), pilot, known);
  return detect(tx, r, build_receiver(channel_from_estimates(known, gains, cfg_.frame.N), N0));
}

std::vector<SimRecord> run_papr(const SimConfig& cfg, const RecordSink& sink) {
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig local = cfg;
  local.coded = false;
  const LinkSimulator sim(local);
  const auto papr = parallel_map<double>(cfg.blocks, cfg.workers, [&](std::size_t b) {
    RandomStream payload(cfg.seed, {0, b, static_cast<std::uint64_t>(StreamTag::payload)});
    return sim.papr_db(sim.make_block(payload));
  });
  const double elapsed = seconds_since(t0);
  std::vector<SimRecord> out;
  out.reserve(papr.size());
  for (std::size_t b = 0; b < papr.size(); ++b) {
    SimRecord rec{cfg.display_label(), Metric::papr_sample, std::numeric_limits<double>::quiet_NaN(), papr[b], b, 1,
                  cfg.seed, elapsed};
    if (sink) sink(rec);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SimRecord> run_ber(const SimConfig& cfg, const RecordSink& sink) {
  if (cfg.snr_db.empty()) throw std::invalid_argument("run_ber: no SNR points");
  const LinkSimulator sim(cfg);
  const std::size_t batch = cfg.workers <= 1 ? 1 : 2 * static_cast<std::size_t>(cfg.workers);
  std::vector<SimRecord> out;
  for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
    const auto t0 = std::chrono::steady_clock::now();
    BlockOutcome total;
    std::uint64_t block_errors = 0;
    std::uint64_t done = 0;
    auto finished = [&] {
      if (done >= cfg.max_blocks) return true;
      return cfg.coded ? block_errors >= cfg.target_block_errors : total.raw_errors >= cfg.target_bit_errors;
    };
    while (!finished()) {
      const std::size_t count = std::min<std::uint64_t>(batch, cfg.max_blocks - done);
      const auto results =
          parallel_map<BlockOutcome>(count, cfg.workers, [&](std::size_t i) { return sim.run_block(s, done + i); });
      // Accumulate in block order and stop at the exact block that meets the target.
      for (const auto& r : results) {
        total.raw_errors += r.raw_errors;
        total.raw_bits += r.raw_bits;
        total.info_errors += r.info_errors;
        total.info_bits += r.info_bits;
        block_errors += r.block_error;
        ++done;
        if (finished()) break;
      }
    }
    const double elapsed = seconds_since(t0);
    auto emit = [&](Metric m, std::uint64_t num, std::uint64_t den) {
      SimRecord rec{cfg.display_label(), m, cfg.snr_db[s], den ? static_cast<double>(num) / static_cast<double>(den) : 0.0,
                    num, den, cfg.seed, elapsed};
      if (sink) sink(rec);
      out.push_back(std::move(rec));
    };
    emit(Metric::ber_uncoded, total.raw_errors, total.raw_bits);
    if (cfg.coded) emit(Metric::ber_coded, total.info_errors, total.info_bits);
  }
  return out;
}

}  // namespace scdde
