#include "scdde/chanest.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scdde {

void PilotLayout::validate(Index L, Index K) const {
  if (L < 1 || K < 1) throw std::invalid_argument("PilotLayout: L and K must be positive");
  if (l_pilot < 0 || l_pilot >= L || k_pilot < 0 || k_pilot >= K)
    throw std::invalid_argument("PilotLayout: pilot position outside the grid");
  if (guard < 0 || 2 * guard + 1 > L) throw std::invalid_argument("PilotLayout: requires 2*L_guard + 1 <= L");
  if (!(energy > 0.0)) throw std::invalid_argument("PilotLayout: pilot energy must be positive");
}

DataCapacity data_capacity(Index L, Index K, Index guard) {
  if (L < 1 || K < 1 || guard < 0 || 2 * guard + 1 > L)
    throw std::invalid_argument("data_capacity: infeasible guard width");
  const Index rows = L - 2 * guard - 1;
  return {rows * K, 1.0 - static_cast<double>(2 * guard + 1) / static_cast<double>(L)};
}

std::vector<Index> data_positions(const PilotLayout& layout, Index L, Index K) {
  layout.validate(L, K);
  const Index rows = L - 2 * layout.guard - 1;
  std::vector<Index> pos;
  pos.reserve(static_cast<std::size_t>(rows * K));
  for (Index k = 0; k < K; ++k)
    for (Index i = 0; i < rows; ++i) {
      const Index l = detail::wrap(layout.l_pilot + layout.guard + 1 + i, L);
      pos.push_back(l + k * L);
    }
  return pos;
}

CVector pilot_time_vector(const PilotLayout& layout, Index L, Index K) {
  layout.validate(L, K);
  CVector x = CVector::Zero(L * K);
  const cplx scaled = layout.psi() / std::sqrt(static_cast<double>(K));
  for (Index k = 0; k < K; ++k) {
    const Index turns = detail::wrap(layout.k_pilot * k, K);
    x(layout.l_pilot + k * L) =
        scaled * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(turns) / static_cast<double>(K));
  }
  return x;
}

FrameAssembly assemble_frame(const CVector& data, const PilotLayout& layout, Index L, Index K) {
  FrameAssembly frame;
  frame.positions = data_positions(layout, L, K);
  frame.n_data = static_cast<Index>(frame.positions.size());
  if (data.size() != frame.n_data)
    throw std::invalid_argument("assemble_frame: expected " + std::to_string(frame.n_data) + " data symbols");
  frame.x = pilot_time_vector(layout, L, K);
  for (Index i = 0; i < frame.n_data; ++i) frame.x(frame.positions[static_cast<std::size_t>(i)]) += data(i);
  return frame;
}

DDGrid assemble_dd_frame(const CVector& data, const PilotLayout& layout, Index L, Index K) {
  const auto positions = data_positions(layout, L, K);
  if (data.size() != static_cast<Index>(positions.size()))
    throw std::invalid_argument("assemble_dd_frame: expected " + std::to_string(positions.size()) +
                                " data symbols");
  DDGrid grid(L, K);
  grid(layout.l_pilot, layout.k_pilot) = layout.psi();
  auto v = grid.vec();
  for (std::size_t i = 0; i < positions.size(); ++i) v(positions[i]) = data(static_cast<Index>(i));
  return grid;
}

std::vector<cplx> estimate_taps(const DDGrid& rdd, const PilotLayout& layout,
                                const std::vector<TapPosition>& known_taps) {
  const Index L = rdd.L();
  const Index K = rdd.K();
  layout.validate(L, K);
  int max_delay = 0;
  int max_doppler = 0;
  for (const auto& t : known_taps) {
    max_delay = std::max(max_delay, t.delay);
    max_doppler = std::max(max_doppler, std::abs(t.doppler));
  }
  check_dd_feasibility(max_delay, max_doppler, L, K);
  if (max_delay > layout.guard)
    throw std::invalid_argument("estimate_taps: L_guard = " + std::to_string(layout.guard) +
                                " is below l_max = " + std::to_string(max_delay));
  const Index n = L * K;
  const cplx psi = layout.psi();
  std::vector<cplx> gains;
  gains.reserve(known_taps.size());
  for (const auto& t : known_taps) {
    const cplx observed = dd_lookup(rdd, layout.l_pilot + t.delay, layout.k_pilot + t.doppler);
    const Index turns = detail::wrap(static_cast<Index>(t.doppler) * layout.l_pilot, n);
    const cplx derotate =
        std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(turns) / static_cast<double>(n));
    gains.push_back(observed * derotate / psi);
  }
  return gains;
}

ChannelRealization channel_from_estimates(const std::vector<TapPosition>& known_taps,
                                          const std::vector<cplx>& gains, Index N) {
  if (known_taps.size() != gains.size())
    throw std::invalid_argument("channel_from_estimates: tap/gain count mismatch");
  std::vector<PathTap> taps;
  taps.reserve(gains.size());
  for (std::size_t p = 0; p < gains.size(); ++p) taps.push_back({gains[p], known_taps[p].delay, known_taps[p].doppler});
  return ChannelRealization(std::move(taps), N);
}

CVector extract_data(const CVector& y, const std::vector<Index>& positions) {
  CVector out(static_cast<Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 0 || positions[i] >= y.size())
      throw std::invalid_argument("extract_data: layout does not match the block length");
    out(static_cast<Index>(i)) = y(positions[i]);
  }
  return out;
}

}  // namespace scdde
