#include "scdde/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scdde {

namespace {

constexpr double kHalfSqrt2 = 0.70710678118654752440;

// exp(j pi q / 4) for q in 0..7, exact on the axes.
cplx eighth_turn(Index q) {
  static const cplx table[8] = {{1.0, 0.0},         {kHalfSqrt2, kHalfSqrt2},   {0.0, 1.0},
                                {-kHalfSqrt2, kHalfSqrt2}, {-1.0, 0.0}, {-kHalfSqrt2, -kHalfSqrt2},
                                {0.0, -1.0},        {kHalfSqrt2, -kHalfSqrt2}};
  return table[detail::wrap(q, 8)];
}

}  // namespace

std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::bpsk: return "BPSK";
    case Modulation::ps_bpsk: return "PS-BPSK";
    case Modulation::qpsk: return "QPSK";
    case Modulation::ps_qpsk: return "PS-QPSK";
  }
  return "?";
}

Modulation parse_modulation(std::string_view name) {
  for (auto m : {Modulation::bpsk, Modulation::ps_bpsk, Modulation::qpsk, Modulation::ps_qpsk})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown modulation: " + std::string(name));
}

int ModulationScheme::bits_per_symbol() const {
  return (kind == Modulation::bpsk || kind == Modulation::ps_bpsk) ? 1 : 2;
}

std::vector<cplx> ModulationScheme::points() const {
  const double a = std::sqrt(Es);
  if (bits_per_symbol() == 1) return {cplx(a, 0.0), cplx(-a, 0.0)};
  // Gray: bit 0 drives the in-phase sign, bit 1 the quadrature sign.
  const double b = std::sqrt(Es / 2.0);
  return {cplx(b, b), cplx(b, -b), cplx(-b, b), cplx(-b, -b)};
}

cplx ModulationScheme::phase_ramp(Index n) const {
  switch (kind) {
    case Modulation::ps_bpsk: return eighth_turn(2 * detail::wrap(n, 4));
    case Modulation::ps_qpsk: return eighth_turn(detail::wrap(n, 8));
    default: return {1.0, 0.0};
  }
}

void FrameConfig::validate() const {
  if (N < 1 || L < 1 || K < 1) throw std::invalid_argument("FrameConfig: N, L, K must be positive");
  if (L * K != N) throw std::invalid_argument("FrameConfig: L*K must equal N");
  if (J < 1) throw std::invalid_argument("FrameConfig: oversampling J must be >= 1");
  if (n_cp < 0 || n_cp > N) throw std::invalid_argument("FrameConfig: CP length out of range");
  if (!(Es > 0.0)) throw std::invalid_argument("FrameConfig: Es must be positive");
}

CVector modulate_bits(std::span<const std::uint8_t> bits, const ModulationScheme& scheme) {
  const int bps = scheme.bits_per_symbol();
  if (bits.size() % static_cast<std::size_t>(bps) != 0)
    throw std::invalid_argument("modulate_bits: bit count not divisible by bits per symbol");
  const auto pts = scheme.points();
  const Index count = static_cast<Index>(bits.size()) / bps;
  CVector symbols(count);
  for (Index n = 0; n < count; ++n) {
    std::size_t label = 0;
    for (int b = 0; b < bps; ++b) label = (label << 1) | (bits[static_cast<std::size_t>(n * bps + b)] & 1u);
    symbols(n) = pts[label] * scheme.phase_ramp(n);
  }
  return symbols;
}

OversampledSignal oversample(const CVector& time_block, int J, Index n_cp) {
  if (J < 1) throw std::invalid_argument("oversample: J must be >= 1");
  const Index n = time_block.size();
  if (n < 1) throw std::invalid_argument("oversample: empty block");
  CVector body;
  if (J == 1) {
    body = time_block;
  } else {
    auto& fft = detail::thread_fft<double>();
    std::vector<cplx> in(time_block.data(), time_block.data() + n);
    std::vector<cplx> spectrum;
    fft.fwd(spectrum, in);
    // F_{N,J} keeps bins 0..N-1 of the JN-point grid.
    spectrum.resize(static_cast<std::size_t>(J * n), cplx(0.0, 0.0));
    std::vector<cplx> out;
    fft.inv(out, spectrum);
    body = Eigen::Map<CVector>(out.data(), J * n) * static_cast<double>(J);
  }
  OversampledSignal sig;
  sig.J = J;
  sig.cp_samples = J * n_cp;
  sig.samples = add_cp(body, J * n_cp);
  return sig;
}

OversampledSignal sc_transmit(const CVector& x, const FrameConfig& cfg) {
  cfg.validate();
  if (x.size() != cfg.N) throw std::invalid_argument("sc_transmit: length(x) != N");
  return oversample(x, cfg.J, cfg.n_cp);
}

CVector otfs_transmit(const DDGrid& grid) { return idzt(grid); }

OversampledSignal otfs_waveform(const DDGrid& grid, const FrameConfig& cfg) {
  cfg.validate();
  if (grid.size() != cfg.N) throw std::invalid_argument("otfs_waveform: grid size != N");
  return oversample(otfs_transmit(grid), cfg.J, cfg.n_cp);
}

OversampledSignal ofdm_transmit(const CVector& x, const FrameConfig& cfg) {
  if (x.size() != cfg.N) throw std::invalid_argument("ofdm_transmit: length(x) != N");
  if (cfg.N < 1 || cfg.J < 1 || cfg.n_cp < 0) throw std::invalid_argument("ofdm_transmit: bad frame");
  const auto row = DDGrid::from_vec(x, 1, cfg.N);
  return oversample(otfs_transmit(row), cfg.J, cfg.n_cp);
}

Papr papr_of_block(const OversampledSignal& sig) {
  const auto body = sig.body();
  if (body.size() == 0) throw std::domain_error("papr_of_block: empty block");
  const Eigen::ArrayXd power = body.array().abs2();
  const double mean = power.mean();
  if (!(mean > 0.0)) throw std::domain_error("papr_of_block: zero-power block");
  Papr p;
  p.linear = power.maxCoeff() / mean;
  p.db = 10.0 * std::log10(p.linear);
  return p;
}

CVector add_cp(const CVector& samples, Index cp_len) {
  if (cp_len < 0 || cp_len > samples.size()) throw std::invalid_argument("add_cp: CP longer than block");
  CVector out(samples.size() + cp_len);
  out.head(cp_len) = samples.tail(cp_len);
  out.tail(samples.size()) = samples;
  return out;
}

CVector remove_cp(const CVector& samples, Index cp_len) {
  if (cp_len < 0 || cp_len > samples.size()) throw std::invalid_argument("remove_cp: CP longer than block");
  return samples.tail(samples.size() - cp_len);
}

}  // namespace scdde
