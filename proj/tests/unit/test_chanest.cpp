#include <cmath>
#include <set>

#include "doctest.h"
#include "scdde/chanest.hpp"
#include "scdde/equalize.hpp"
#include "scdde/random.hpp"
#include "scdde/waveform.hpp"

using namespace scdde;

namespace {

CVector random_vector(RandomStream& rng, Index n) {
  CVector v(n);
  for (auto& x : v) x = rng.complex_normal(1.0);
  return v;
}

std::vector<TapPosition> positions_of(const ChannelRealization& ch) {
  std::vector<TapPosition> out;
  for (const auto& t : ch.taps()) out.push_back(t.position());
  return out;
}

}  // namespace

TEST_CASE("data capacity identities") {
  CHECK(data_capacity(32, 32, 7).n_data == 544);
  CHECK(data_capacity(16, 16, 2).n_data == 176);
  CHECK(data_capacity(16, 16, 0).n_data == 15 * 16);
  CHECK(data_capacity(32, 32, 7).data_fraction == doctest::Approx(1.0 - 15.0 / 32));
  CHECK_THROWS_AS(data_capacity(8, 8, 4), std::invalid_argument);
}

TEST_CASE("pilot time vector has a constant envelope at stride L") {
  const PilotLayout p{0, 0, 2, 16.0};
  const CVector x = pilot_time_vector(p, 8, 16);
  for (Index n = 0; n < 128; ++n) {
    if (n % 8 == 0) CHECK(std::abs(x(n) - cplx(1.0)) < 1e-15);
    else CHECK(x(n) == cplx(0.0));
  }
  const PilotLayout q{3, 5, 1, 9.0};
  const CVector y = pilot_time_vector(q, 8, 16);
  const DDGrid Y = dzt(y, 8, 16);
  for (Index l = 0; l < 8; ++l)
    for (Index k = 0; k < 16; ++k) {
      const cplx expected = (l == 3 && k == 5) ? q.psi() : cplx(0.0);
      CHECK(std::abs(Y(l, k) - expected) < 1e-14);
    }
  for (Index k = 0; k < 16; ++k) CHECK(std::abs(y(3 + 8 * k)) == doctest::Approx(std::sqrt(9.0 / 16)));
}

TEST_CASE("frame layout follows the time-order pattern") {
  const PilotLayout p{0, 0, 2, 4.0};  // psi = 2, samples psi / sqrt(K) = 1 for K = 4
  CVector data(12);
  for (Index i = 0; i < 12; ++i) data(i) = cplx(static_cast<double>(10 + i), 0.0);
  const auto f = assemble_frame(data, p, 8, 4);
  CHECK(f.n_data == 12);
  const double expected[] = {1, 0, 0, 10, 11, 12, 0, 0, 1, 0, 0, 13, 14, 15, 0, 0,
                             1, 0, 0, 16, 17, 18, 0, 0, 1, 0, 0, 19, 20, 21, 0, 0};
  for (Index n = 0; n < 32; ++n) CHECK(std::abs(f.x(n) - expected[n]) < 1e-15);
  CHECK_THROWS_AS(assemble_frame(CVector::Zero(11), p, 8, 4), std::invalid_argument);
}

TEST_CASE("assembled frame satisfies the DD-domain pilot and guard constraints") {
  RandomStream rng(1);
  const Index L = 16, K = 16, g = 3;
  for (Index lp : {0, 5, 14}) {
    const PilotLayout p{lp, 2, g, 16.0};
    const auto f = assemble_frame(random_vector(rng, data_capacity(L, K, g).n_data), p, L, K);
    const DDGrid X = dzt(f.x, L, K);
    for (Index d = -g; d <= g; ++d) {
      const Index l = (lp + d + L) % L;
      for (Index k = 0; k < K; ++k) {
        const cplx expected = (d == 0 && k == 2) ? p.psi() : cplx(0.0);
        CHECK(std::abs(X(l, k) - expected) < 1e-13);
      }
    }
  }
}

TEST_CASE("E_pilot = K Es gives pilot samples on the PSK envelope") {
  const Index L = 32, K = 32;
  const PilotLayout p{0, 0, 7, static_cast<double>(K)};
  RandomStream rng(2);
  Bits bits(static_cast<std::size_t>(data_capacity(L, K, 7).n_data));
  for (auto& b : bits) b = rng.bit();
  const auto f = assemble_frame(modulate_bits(bits, {Modulation::bpsk, 1.0}), p, L, K);
  for (Index n = 0; n < L * K; ++n)
    if (f.x(n) != cplx(0.0)) CHECK(std::abs(f.x(n)) == doctest::Approx(1.0));
}

TEST_CASE("data positions are disjoint from pilot and guard slots") {
  const PilotLayout p{4, 1, 2, 1.0};
  const auto pos = data_positions(p, 16, 8);
  CHECK(static_cast<Index>(pos.size()) == data_capacity(16, 8, 2).n_data);
  std::set<Index> unique(pos.begin(), pos.end());
  CHECK(unique.size() == pos.size());
  for (Index n : pos) {
    const Index l = n % 16;
    CHECK(std::abs(l - 4) > 2);
  }
}

TEST_CASE("extract_data inverts assembly") {
  RandomStream rng(3);
  const PilotLayout p{0, 0, 3, 8.0};
  const CVector d = random_vector(rng, data_capacity(16, 8, 3).n_data);
  const auto f = assemble_frame(d, p, 16, 8);
  CHECK((extract_data(f.x, f.positions) - d).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noiseless single-path estimate is exact") {
  const cplx h(0.4, -1.1);
  const ChannelRealization ch({{h, 1, 1}}, 64);
  const PilotLayout p{0, 0, 1, 8.0};
  RandomStream rng(4);
  const auto f = assemble_frame(random_vector(rng, data_capacity(8, 8, 1).n_data), p, 8, 8);
  const auto est = estimate_taps(dzt(apply_channel(f.x, ch), 8, 8), p, {{1, 1}});
  CHECK(std::abs(est[0] - h) < 1e-14);
}

TEST_CASE("noiseless Table II estimate is exact for canonical and shifted pilots") {
  RandomStream rng(5);
  const Index L = 32, K = 32;
  for (auto [lp, kp] : {std::pair<Index, Index>{0, 0}, {28, 3}, {10, 30}}) {
    const PilotLayout p{lp, kp, 7, 32.0};
    for (int trial = 0; trial < 10; ++trial) {
      const auto ch = sample_rayleigh(ChannelProfile(profile_table2()), L * K, rng);
      const auto f = assemble_frame(random_vector(rng, data_capacity(L, K, 7).n_data), p, L, K);
      const auto est = estimate_taps(dzt(apply_channel(f.x, ch), L, K), p, positions_of(ch));
      for (std::size_t i = 0; i < est.size(); ++i) CHECK(std::abs(est[i] - ch.taps()[i].gain) <= 1e-10);
    }
  }
}

TEST_CASE("negative Doppler taps are looked up modulo K") {
  RandomStream rng(6);
  const ChannelRealization ch({{0.8, 0, 0}, {0.5, 2, -3}, {cplx(0.1, 0.2), 4, 2}}, 256);
  const PilotLayout p{0, 0, 4, 16.0};
  const auto f = assemble_frame(random_vector(rng, data_capacity(16, 16, 4).n_data), p, 16, 16);
  const auto est = estimate_taps(dzt(apply_channel(f.x, ch), 16, 16), p, positions_of(ch));
  for (std::size_t i = 0; i < est.size(); ++i) CHECK(std::abs(est[i] - ch.taps()[i].gain) < 1e-12);
}

TEST_CASE("pilot region does not depend on the data payload") {
  RandomStream rng(7);
  const Index L = 16, K = 16;
  const PilotLayout p{0, 0, 7, 16.0};
  const auto ch = sample_rayleigh(ChannelProfile(profile_table2()), L * K, rng);
  const Index n_data = data_capacity(L, K, 7).n_data;
  const DDGrid a = dzt(apply_channel(assemble_frame(random_vector(rng, n_data), p, L, K).x, ch), L, K);
  const DDGrid b = dzt(apply_channel(assemble_frame(random_vector(rng, n_data), p, L, K).x, ch), L, K);
  for (const auto& t : ch.taps())
    CHECK(std::abs(dd_lookup(a, t.delay, t.doppler) - dd_lookup(b, t.delay, t.doppler)) < 1e-10);
}

TEST_CASE("estimator rejects a guard shorter than the delay spread") {
  const PilotLayout p{0, 0, 3, 16.0};
  CHECK_THROWS_AS(estimate_taps(DDGrid(16, 16), p, {{0, 0}, {5, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PilotLayout({0, 0, 8, 1.0}).validate(16, 16), std::invalid_argument);
  CHECK_THROWS_AS(PilotLayout({16, 0, 2, 1.0}).validate(16, 16), std::invalid_argument);
}

TEST_CASE("estimated CSI approaches ideal CSI as the pilot energy grows") {
  RandomStream rng(8);
  const Index L = 16, K = 16, N = L * K;
  const auto ch = sample_rayleigh(ChannelProfile(profile_table2()), N, rng);
  const PilotLayout p{0, 0, 7, 1e8};
  const auto f = assemble_frame(random_vector(rng, data_capacity(L, K, 7).n_data), p, L, K);
  const CVector r = apply_channel(f.x, ch, NoiseModel{0.01}, rng);
  const auto est = estimate_taps(dzt(r, L, K), p, positions_of(ch));
  const auto rebuilt = channel_from_estimates(positions_of(ch), est, N);
  const double gamma = 100.0;
  // Compare on the data part alone; the pilot echo scales with E_pilot.
  const CVector rd = apply_channel(f.x - pilot_time_vector(p, L, K), ch);
  const CVector ideal = sc_dde_equalize(rd, dde_weights(dd_channel_matrix(build_time_matrix(ch), L, K), gamma, L, K)).y;
  const CVector estimated =
      sc_dde_equalize(rd, dde_weights(dd_channel_matrix(build_time_matrix(rebuilt), L, K), gamma, L, K)).y;
  CHECK((ideal - estimated).cwiseAbs().maxCoeff() < 1e-3);
}
