#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "scdde/channel.hpp"
#include "scdde/oracles.hpp"
#include "scdde/random.hpp"

using namespace scdde;

namespace {

CVector random_vector(RandomStream& rng, Index n) {
  CVector v(n);
  for (auto& x : v) x = rng.complex_normal(1.0);
  return v;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Table II taps") {
  const auto t = profile_table2();
  REQUIRE(t.size() == 8);
  CHECK(t.front() == TapPosition{0, 0});
  CHECK(t.back() == TapPosition{7, 4});
  const int dop[] = {0, 1, 1, 2, 3, 3, 4, 4};
  for (int p = 0; p < 8; ++p) CHECK(t[static_cast<std::size_t>(p)] == TapPosition{p, dop[p]});
  const ChannelProfile prof(t);
  CHECK(prof.max_delay() == 7);
  CHECK(prof.max_doppler() == 4);
  CHECK(prof.path_power() == doctest::Approx(1.0 / 8));
}

TEST_CASE("profiles reject repeated or negative taps") {
  CHECK_THROWS_AS(ChannelProfile({{0, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(ChannelProfile({{-1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(ChannelProfile(std::vector<TapPosition>{}), std::invalid_argument);
}

TEST_CASE("profile text format") {
  const auto p = parse_profile("# two paths\nP = 2\nnormalize = false\nfading = fixed\npath = 0, 0\npath = 3, -2\n");
  CHECK(p.paths() == 2);
  CHECK_FALSE(p.normalized);
  CHECK(p.fading == Fading::fixed);
  CHECK(p.taps[1] == TapPosition{3, -2});
  CHECK(p.max_doppler() == 2);
  CHECK_THROWS(parse_profile("P = 3\npath = 0, 0\n"));
  CHECK_THROWS(parse_profile("colour = red\n"));
}

TEST_CASE("Rayleigh gains: unit total power and Rayleigh magnitudes") {
  const ChannelProfile prof(profile_table2());
  RandomStream rng(1);
  const int draws = 100000;
  double total = 0.0;
  std::vector<double> mags;
  double path0 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto ch = sample_rayleigh(prof, 64, rng);
    for (const auto& t : ch.taps()) total += std::norm(t.gain);
    path0 += std::norm(ch.taps()[0].gain);
    mags.push_back(std::abs(ch.taps()[3].gain));
  }
  CHECK(total / draws == doctest::Approx(1.0).epsilon(0.01));
  CHECK(path0 / draws == doctest::Approx(1.0 / 8).epsilon(0.02));
  // Kolmogorov-Smirnov against F(r) = 1 - exp(-r^2 / (1/8)).
  std::sort(mags.begin(), mags.end());
  double d = 0.0;
  const double n = static_cast<double>(mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const double F = 1.0 - std::exp(-mags[i] * mags[i] * 8.0);
    d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
  }
  CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("fixed fading uses the deterministic amplitude") {
  const ChannelProfile awgn({{0, 0}}, true, Fading::fixed);
  RandomStream rng(2);
  const auto ch = sample_rayleigh(awgn, 16, rng);
  CHECK(ch.taps()[0].gain == cplx(1.0));
}

TEST_CASE("single shifted path with Doppler") {
  const ChannelRealization ch({{1.0, 1, 1}}, 4);
  CVector x(4);
  x << 1, 0, 0, 0;
  CVector expected(4);
  expected << 0, 1, 0, 0;
  CHECK(max_abs(apply_channel(x, ch) - expected) < 1e-15);
}

TEST_CASE("identity path leaves the block untouched") {
  RandomStream rng(3);
  const CVector x = random_vector(rng, 32);
  CHECK(max_abs(apply_channel(x, ChannelRealization({{1.0, 0, 0}}, 32)) - x) == 0.0);
  CHECK(max_abs(build_time_matrix(ChannelRealization({{1.0, 0, 0}}, 8)) - CMatrix::Identity(8, 8)) == 0.0);
}

TEST_CASE("pure delay is the cyclic down-shift") {
  const CMatrix H = build_time_matrix(ChannelRealization({{1.0, 1, 0}}, 3));
  CMatrix expected = CMatrix::Zero(3, 3);
  expected(1, 0) = expected(2, 1) = expected(0, 2) = 1.0;
  CHECK(max_abs(H - expected) < 1e-15);
}

TEST_CASE("each delay-Doppler term is unitary") {
  for (int l : {0, 3, 7})
    for (int k : {-2, 0, 4}) {
      const CMatrix T = build_time_matrix(ChannelRealization({{1.0, l, k}}, 16));
      CHECK(max_abs(T.adjoint() * T - CMatrix::Identity(16, 16)) <= 1e-12);
    }
}

TEST_CASE("fast channel, matrix form and direct sum agree") {
  RandomStream rng(4);
  const ChannelProfile prof(profile_table2());
  for (int trial = 0; trial < 100; ++trial) {
    const Index N = trial % 2 ? 256 : 64;
    const auto ch = sample_rayleigh(prof, N, rng);
    const CVector x = random_vector(rng, N);
    const CVector r = apply_channel(x, ch);
    CHECK(max_abs(r - build_time_matrix(ch) * x) <= 1e-10);
    CHECK(max_abs(r - oracle::channel_direct(x, ch.taps())) <= 1e-10);
    CHECK(max_abs(CMatrix(build_time_matrix_sparse(ch)) - build_time_matrix(ch)) == 0.0);
  }
}

TEST_CASE("apply_channel rejects a wrong block length") {
  CHECK_THROWS_AS(apply_channel(CVector::Zero(5), ChannelRealization({{1.0, 0, 0}}, 4)), std::invalid_argument);
}

TEST_CASE("DD channel matrix: identity, flat gain, per-tap relation") {
  CHECK(max_abs(dd_channel_matrix(CMatrix::Identity(32, 32), 4, 8) - CMatrix::Identity(32, 32)) < 1e-14);
  const cplx h(0.3, -0.7);
  const CMatrix flat = dd_channel_matrix(build_time_matrix(ChannelRealization({{h, 0, 0}}, 32)), 4, 8);
  CHECK(max_abs(flat - h * CMatrix::Identity(32, 32)) < 1e-14);

  RandomStream rng(5);
  const Index L = 8, K = 16, N = L * K;
  for (int trial = 0; trial < 20; ++trial) {
    const auto ch = sample_rayleigh(ChannelProfile(profile_table2()), N, rng);
    const CVector xv = random_vector(rng, N);
    const CMatrix X = Eigen::Map<const CMatrix>(xv.data(), L, K);
    const CVector direct = oracle::dd_relation_direct(X, ch.taps(), N).reshaped();
    CHECK(max_abs(dd_channel_matrix(build_time_matrix(ch), L, K) * xv - direct) <= 1e-9);
  }
  CHECK_THROWS_AS(dd_channel_matrix(CMatrix::Identity(12, 12), 4, 4), std::invalid_argument);
}

TEST_CASE("noise is white with variance N0 in the DD domain") {
  RandomStream rng(6);
  const ChannelRealization none({{1.0, 0, 0}}, 64);
  double acc = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const CVector eta = apply_channel(CVector::Zero(64), none, NoiseModel{0.25}, rng);
    acc += dzt(eta, 8, 8).matrix().squaredNorm();
  }
  CHECK(acc / (draws * 64.0) == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("received SNR bookkeeping") {
  const ChannelProfile unit(profile_table2());
  CHECK(received_snr(unit, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(received_snr(unit, 1.0, 0.1) == doctest::Approx(10.0));
  CHECK(received_snr(2.0 * unit.total_power(), 1.0, 0.1) == doctest::Approx(20.0));
  CHECK_THROWS_AS(received_snr(unit, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("DD feasibility guard") {
  CHECK_NOTHROW(check_dd_feasibility(7, 4, 8, 9));
  CHECK_THROWS_AS(check_dd_feasibility(7, 4, 7, 16), std::invalid_argument);
  CHECK_THROWS_AS(check_dd_feasibility(7, 4, 16, 8), std::invalid_argument);
}

TEST_CASE("physical tap accessors") {
  const ChannelRealization ch({{1.0, 3, 2}, {0.5, 1, -4}}, 128);
  CHECK(ch.max_delay() == 3);
  CHECK(ch.max_doppler() == 4);
  CHECK(ch.max_delay_time(0.5) == doctest::Approx(1.5));
  CHECK(ch.max_doppler_frequency(1.0) == doctest::Approx(4.0 / 128));
}
