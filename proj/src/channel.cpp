#include "scdde/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scdde {

namespace {

cplx unit_phase(Index turns, Index period) {
  const Index t = detail::wrap(turns, period);
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(period));
}

void require_distinct(const std::vector<TapPosition>& taps) {
  if (taps.empty()) throw std::invalid_argument("channel: at least one path is required");
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (taps[i].delay < 0) throw std::invalid_argument("channel: delay taps must be non-negative");
    for (std::size_t j = i + 1; j < taps.size(); ++j)
      if (taps[i] == taps[j]) throw std::invalid_argument("channel: duplicate (l, k) tap");
  }
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ChannelProfile::ChannelProfile(std::vector<TapPosition> t, bool norm, Fading f)
    : taps(std::move(t)), normalized(norm), fading(f) {
  require_distinct(taps);
}

int ChannelProfile::max_delay() const {
  int m = 0;
  for (const auto& t : taps) m = std::max(m, t.delay);
  return m;
}

int ChannelProfile::max_doppler() const {
  int m = 0;
  for (const auto& t : taps) m = std::max(m, std::abs(t.doppler));
  return m;
}

ChannelRealization::ChannelRealization(std::vector<PathTap> taps, Index block_length)
    : taps_(std::move(taps)), n_(block_length) {
  if (n_ < 1) throw std::invalid_argument("ChannelRealization: N must be positive");
  std::vector<TapPosition> pos;
  pos.reserve(taps_.size());
  for (const auto& t : taps_) pos.push_back(t.position());
  require_distinct(pos);
}

int ChannelRealization::max_delay() const {
  int m = 0;
  for (const auto& t : taps_) m = std::max(m, t.delay);
  return m;
}

int ChannelRealization::max_doppler() const {
  int m = 0;
  for (const auto& t : taps_) m = std::max(m, std::abs(t.doppler));
  return m;
}

std::vector<TapPosition> profile_table2() {
  return {{0, 0}, {1, 1}, {2, 1}, {3, 2}, {4, 3}, {5, 3}, {6, 4}, {7, 4}};
}

ChannelProfile parse_profile(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<TapPosition> taps;
  long declared_paths = -1;
  bool normalized = true;
  Fading fading = Fading::rayleigh;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("profile line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "P") {
      declared_paths = std::stol(value);
    } else if (key == "normalize") {
      if (value != "true" && value != "false")
        throw std::invalid_argument("profile: normalize must be true or false");
      normalized = value == "true";
    } else if (key == "fading") {
      if (value == "rayleigh")
        fading = Fading::rayleigh;
      else if (value == "fixed")
        fading = Fading::fixed;
      else
        throw std::invalid_argument("profile: fading must be rayleigh or fixed");
    } else if (key == "path") {
      const auto comma = value.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("profile: path expects <l>, <k>");
      taps.push_back({std::stoi(trim(value.substr(0, comma))), std::stoi(trim(value.substr(comma + 1)))});
    } else {
      throw std::invalid_argument("profile: unknown key '" + key + "'");
    }
  }
  if (declared_paths >= 0 && declared_paths != static_cast<long>(taps.size()))
    throw std::invalid_argument("profile: P does not match the number of path lines");
  return ChannelProfile(std::move(taps), normalized, fading);
}

ChannelProfile load_profile(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open profile " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_profile(buf.str());
}

ChannelRealization sample_rayleigh(const ChannelProfile& profile, Index block_length, RandomStream& rng) {
  std::vector<PathTap> taps;
  taps.reserve(profile.taps.size());
  const double power = profile.path_power();
  for (const auto& pos : profile.taps) {
    const cplx gain = profile.fading == Fading::fixed ? cplx(std::sqrt(power), 0.0) : rng.complex_normal(power);
    taps.push_back({gain, pos.delay, pos.doppler});
  }
  return ChannelRealization(std::move(taps), block_length);
}

CVector apply_channel(const CVector& x, const ChannelRealization& ch) {
  const Index n = ch.N();
  if (x.size() != n) throw std::invalid_argument("apply_channel: length(x) != N");
  CVector r = CVector::Zero(n);
  for (const auto& tap : ch.taps())
    for (Index i = 0; i < n; ++i) {
      const Index shifted = i - tap.delay;
      r(i) += tap.gain * unit_phase(tap.doppler * shifted, n) * x(detail::wrap(shifted, n));
    }
  return r;
}

CVector apply_channel(const CVector& x, const ChannelRealization& ch, const NoiseModel& noise, RandomStream& rng) {
  if (noise.N0 < 0.0) throw std::invalid_argument("apply_channel: negative noise variance");
  CVector r = apply_channel(x, ch);
  if (noise.N0 > 0.0)
    for (Index i = 0; i < r.size(); ++i) r(i) += rng.complex_normal(noise.N0);
  return r;
}

SparseCMatrix build_time_matrix_sparse(const ChannelRealization& ch) {
  const Index n = ch.N();
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(ch.taps().size() * static_cast<std::size_t>(n));
  // (Pi^l Delta^k)[i, (i - l) mod N] = exp(j 2 pi k ((i - l) mod N) / N)
  for (const auto& tap : ch.taps())
    for (Index i = 0; i < n; ++i) {
      const Index col = detail::wrap(i - tap.delay, n);
      entries.emplace_back(i, col, tap.gain * unit_phase(tap.doppler * col, n));
    }
  SparseCMatrix h(n, n);
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

CMatrix build_time_matrix(const ChannelRealization& ch) { return CMatrix(build_time_matrix_sparse(ch)); }

CMatrix dd_channel_matrix(const CMatrix& H, Index L, Index K) {
  if (H.rows() != H.cols()) throw std::invalid_argument("dd_channel_matrix: H must be square");
  if (L < 1 || K < 1 || H.rows() != L * K) throw std::invalid_argument("dd_channel_matrix: L*K != N");
  const CMatrix zh = vdzt_apply(H, L, K);
  return vdzt_apply(zh.adjoint(), L, K).adjoint();
}

double received_snr(double total_path_power, double Es, double N0) {
  if (!(N0 > 0.0)) throw std::invalid_argument("received_snr: N0 must be positive");
  return total_path_power * Es / N0;
}

double received_snr(const ChannelProfile& profile, double Es, double N0) {
  return received_snr(profile.total_power(), Es, N0);
}

void check_dd_feasibility(int max_delay, int max_doppler, Index L, Index K) {
  if (L <= max_delay)
    throw std::invalid_argument("DD grid infeasible: L = " + std::to_string(L) + " must exceed l_max = " +
                                std::to_string(max_delay));
  if (K <= 2 * static_cast<Index>(max_doppler))
    throw std::invalid_argument("DD grid infeasible: K = " + std::to_string(K) + " must exceed 2 k_max = " +
                                std::to_string(2 * max_doppler));
}

}  // namespace scdde
