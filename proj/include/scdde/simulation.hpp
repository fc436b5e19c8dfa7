#pragma once

// Monte-Carlo engine for PAPR and BER experiments.
//
// Random draws for block b at SNR index s come from independent streams
// RandomStream(seed, {s, b, tag}) with tag 1 = payload bits, 2 = channel
// gains, 3 = noise. Streams do not depend on the scheme, so runs with the
// same seed see identical channels and noise. Blocks are evaluated in
// batches and accumulated in block order, which makes every result
// independent of the worker count.

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <memory>
#include <vector>

#include "scdde/config.hpp"
#include "scdde/ldpc.hpp"
#include "scdde/records.hpp"

namespace scdde {

enum class StreamTag : std::uint64_t { payload = 1, channel = 2, noise = 3 };

/// Time-domain transmit block and its payload for one Monte-Carlo block.
struct TxBlock {
  Bits info;        // information bits (equal to `bits` when uncoded)
  Bits bits;        // bits mapped onto the data symbols
  CVector symbols;  // modulated data symbols
  CVector x;        // Nyquist-rate time block sent over the channel
  DDGrid grid;      // DD grid for OTFS / OFDM
};

struct BlockOutcome {
  std::uint64_t raw_errors = 0;
  std::uint64_t raw_bits = 0;
  std::uint64_t info_errors = 0;
  std::uint64_t info_bits = 0;
  bool block_error = false;
};

/// Shared per-run state: code, data layout, and the per-block kernels.
class LinkSimulator {
 public:
  explicit LinkSimulator(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  const ParityCheckMatrix* code() const { return code_.get(); }
  const std::vector<Index>& positions() const { return positions_; }

  TxBlock make_block(RandomStream& payload) const;
  double papr_db(const TxBlock& block) const;
  BlockOutcome run_block(std::size_t snr_index, std::uint64_t block) const;

 private:
  struct Receiver;
  Receiver build_receiver(const ChannelRealization& csi, double N0) const;
  BlockOutcome detect(const TxBlock& tx, const CVector& r, const Receiver& rx) const;

  SimConfig cfg_;
  std::shared_ptr<const ParityCheckMatrix> code_;
  std::vector<Index> positions_;  // data positions; all N when no pilot
  std::vector<std::shared_ptr<const Receiver>> fixed_receivers_;  // per SNR when the channel is deterministic
};

using RecordSink = std::function<void(const SimRecord&)>;

/// One PAPR-sample record per block at the configured oversampling.
std::vector<SimRecord> run_papr(const SimConfig& cfg, const RecordSink& sink = {});

/// BER-uncoded (and BER-coded when coding is on) per SNR point. Each point
/// stops at max_blocks, or once target_bit_errors raw bit errors (uncoded)
/// or target_block_errors block errors (coded) have been counted.
std::vector<SimRecord> run_ber(const SimConfig& cfg, const RecordSink& sink = {});

/// Evaluates fn(i) for i in [0, count) on `workers` threads; results are
/// returned in index order.
template <typename T>
std::vector<T> parallel_map(std::size_t count, int workers, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace scdde
