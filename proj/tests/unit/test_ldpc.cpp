#include <cmath>
#include <sstream>

#include "doctest.h"
#include "scdde/ldpc.hpp"
#include "scdde/random.hpp"

using namespace scdde;

namespace {

Bits random_bits(RandomStream& rng, Index n) {
  Bits b(static_cast<std::size_t>(n));
  for (auto& x : b) x = rng.bit();
  return b;
}

Bits xor_bits(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

// Plain sum-product on a dense message array, written independently of the
// library decoder: full tanh products per check, flooding schedule.
Bits reference_decode(const Eigen::VectorXd& llr, const ParityCheckMatrix& code, int iters) {
  const Index n = code.n(), m = code.m();
  Eigen::MatrixXd v2c = Eigen::MatrixXd::Zero(m, n), c2v = Eigen::MatrixXd::Zero(m, n);
  Eigen::MatrixXi H = Eigen::MatrixXi::Zero(m, n);
  for (Index c = 0; c < m; ++c)
    for (Index v : code.checks()[static_cast<std::size_t>(c)]) H(c, v) = 1;
  Bits hard(static_cast<std::size_t>(n));
  for (int it = 0; it < iters; ++it) {
    for (Index v = 0; v < n; ++v)
      for (Index c = 0; c < m; ++c)
        if (H(c, v)) v2c(c, v) = llr(v) + (H.col(v).cast<double>().cwiseProduct(c2v.col(v))).sum() - c2v(c, v);
    for (Index c = 0; c < m; ++c)
      for (Index v = 0; v < n; ++v) {
        if (!H(c, v)) continue;
        double prod = 1.0;
        for (Index u = 0; u < n; ++u)
          if (H(c, u) && u != v) prod *= std::tanh(0.5 * v2c(c, u));
        prod = std::clamp(prod, -1.0 + 1e-15, 1.0 - 1e-15);
        c2v(c, v) = 2.0 * std::atanh(prod);
      }
    for (Index v = 0; v < n; ++v) {
      double total = llr(v);
      for (Index c = 0; c < m; ++c)
        if (H(c, v)) total += c2v(c, v);
      hard[static_cast<std::size_t>(v)] = total < 0.0;
    }
    if (code.is_codeword(hard)) break;
  }
  Bits info;
  for (Index p : code.info_positions()) info.push_back(hard[static_cast<std::size_t>(p)]);
  return info;
}

}  // namespace

TEST_CASE("regular (3,6) structure for the frame sizes in use") {
  for (Index n : {1024, 544, 272}) {
    const auto code = build_ldpc(n, 1);
    CHECK(code.n() == n);
    CHECK(code.m() == n / 2);
    CHECK(code.k() == n / 2);
    std::size_t ones = 0;
    for (const auto& col : code.variables()) {
      CHECK(col.size() == 3);
      ones += col.size();
    }
    for (const auto& row : code.checks()) CHECK(row.size() == 6);
    CHECK(ones == static_cast<std::size_t>(3 * n));
    CHECK(code.girth() >= 6);
    CHECK(code.info_positions().size() + code.parity_positions().size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("construction is deterministic and seed dependent") {
  const auto a = build_ldpc(96, 7), b = build_ldpc(96, 7), c = build_ldpc(96, 8);
  CHECK(a.checks() == b.checks());
  CHECK(a.checks() != c.checks());
}

TEST_CASE("invalid code lengths") {
  CHECK_THROWS_AS(build_ldpc(22, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_ldpc(101, 1), std::invalid_argument);
  // 24 nodes cannot host a 4-cycle-free (3,6) graph.
  CHECK_THROWS_AS(build_ldpc(24, 1), std::runtime_error);
}

TEST_CASE("encoder: zero word, syndrome, systematic, linear") {
  const auto code = build_ldpc(544, 1);
  const Bits zero(272, 0);
  CHECK(encode(zero, code) == Bits(544, 0));
  RandomStream rng(1);
  for (int t = 0; t < 20; ++t) {
    const Bits a = random_bits(rng, 272), b = random_bits(rng, 272);
    const Bits ca = encode(a, code);
    CHECK(code.is_codeword(ca));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(ca[static_cast<std::size_t>(code.info_positions()[i])] == a[i]);
    CHECK(encode(xor_bits(a, b), code) == xor_bits(ca, encode(b, code)));
  }
  CHECK_THROWS_AS(encode(Bits(10, 0), code), std::invalid_argument);
}

TEST_CASE("BPSK and QPSK demapping") {
  const ModulationScheme bpsk{Modulation::bpsk, 1.0};
  CVector y(2);
  y << 1.0, 0.0;
  const auto llr = demap_llr(y, bpsk, Eigen::VectorXd::Ones(2));
  CHECK(llr(0) == doctest::Approx(4.0));
  CHECK(llr(1) == 0.0);
  CHECK(demap_llr(CVector::Constant(1, 100.0), bpsk, Eigen::VectorXd::Ones(1))(0) == kLlrClamp);
  CHECK_THROWS_AS(demap_llr(y, bpsk, Eigen::VectorXd::Zero(2)), std::invalid_argument);

  // Noiseless constellation points decode to their own labels.
  RandomStream rng(2);
  for (auto kind : {Modulation::bpsk, Modulation::ps_bpsk, Modulation::qpsk, Modulation::ps_qpsk}) {
    const ModulationScheme m{kind, 2.0};
    const Bits bits = random_bits(rng, 64);
    const CVector s = modulate_bits(bits, m);
    CHECK(hard_decisions(demap_llr(s, m, Eigen::VectorXd::Constant(s.size(), 0.1))) == bits);
  }
}

TEST_CASE("decoder: noiseless input converges at once") {
  const auto code = build_ldpc(272, 1);
  RandomStream rng(3);
  const Bits info = random_bits(rng, 136);
  const Bits word = encode(info, code);
  Eigen::VectorXd llr(272);
  for (Index i = 0; i < 272; ++i) llr(i) = word[static_cast<std::size_t>(i)] ? -kLlrClamp : kLlrClamp;
  const auto res = decode_bp(llr, code);
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(res.info == info);
  CHECK(res.codeword == word);
}

TEST_CASE("decoder: a single confident error is corrected quickly") {
  const auto code = build_ldpc(544, 2);
  RandomStream rng(4);
  for (int t = 0; t < 20; ++t) {
    const Bits info = random_bits(rng, 272);
    const Bits word = encode(info, code);
    Eigen::VectorXd llr(544);
    for (Index i = 0; i < 544; ++i) llr(i) = word[static_cast<std::size_t>(i)] ? -10.0 : 10.0;
    const Index flip = static_cast<Index>(rng.below(544));
    llr(flip) = -llr(flip) * 0.5;
    const auto res = decode_bp(llr, code);
    CHECK(res.converged);
    CHECK(res.iterations <= 5);
    CHECK(res.info == info);
  }
}

TEST_CASE("decoder: zero LLRs never converge") {
  const auto code = build_ldpc(96, 1);
  const auto res = decode_bp(Eigen::VectorXd::Zero(96), code, 12);
  // The all-zero hard decision is a codeword, so ties resolve to it at once.
  CHECK(res.iterations <= 12);
  Eigen::VectorXd llr = Eigen::VectorXd::Zero(96);
  llr(0) = -1e-3;  // an odd-weight hint keeps every check unsatisfiable
  const auto stuck = decode_bp(llr, code, 12);
  CHECK_FALSE(stuck.converged);
  CHECK(stuck.iterations == 12);
}

TEST_CASE("noiseless encode-modulate-decode round trip") {
  const auto code = build_ldpc(272, 3);
  const ModulationScheme qpsk{Modulation::ps_qpsk, 1.0};
  RandomStream rng(5);
  for (int t = 0; t < 1000; ++t) {
    const Bits info = random_bits(rng, 136);
    const CVector s = modulate_bits(encode(info, code), qpsk);
    CHECK(decode_bp(demap_llr(s, qpsk, Eigen::VectorXd::Constant(s.size(), 1e-3)), code).info == info);
  }
}

TEST_CASE("decoder agrees with an independent sum-product reference on AWGN") {
  const auto code = build_ldpc(96, 4);
  const ModulationScheme bpsk{Modulation::bpsk, 1.0};
  RandomStream rng(6);
  const double N0 = 0.9;  // Eb/N0 about 3.5 dB at rate 1/2
  std::size_t lib_errors = 0, ref_errors = 0, disagreements = 0;
  for (int t = 0; t < 200; ++t) {
    const Bits info = random_bits(rng, 48);
    CVector y = modulate_bits(encode(info, code), bpsk);
    for (auto& v : y) v += rng.complex_normal(N0);
    const auto llr = demap_llr(y, bpsk, Eigen::VectorXd::Constant(96, N0 / 2.0));
    const Bits a = decode_bp(llr, code, 30).info;
    const Bits b = reference_decode(llr, code, 30);
    for (std::size_t i = 0; i < info.size(); ++i) {
      lib_errors += a[i] != info[i];
      ref_errors += b[i] != info[i];
    }
    disagreements += a != b;
  }
  CHECK(disagreements <= 2);
  CHECK(std::abs(static_cast<double>(lib_errors) - static_cast<double>(ref_errors)) <= 0.05 * (ref_errors + 20.0));
}

TEST_CASE("alist export") {
  const auto code = build_ldpc(48, 2);
  std::ostringstream out;
  write_alist(out, code);
  std::istringstream in(out.str());
  Index n = 0, m = 0, dv = 0, dc = 0;
  in >> n >> m >> dv >> dc;
  CHECK(n == 48);
  CHECK(m == 24);
  CHECK(dv == 3);
  CHECK(dc == 6);
  std::vector<int> col_deg(48), row_deg(24);
  for (auto& d : col_deg) in >> d;
  for (auto& d : row_deg) in >> d;
  for (Index v = 0; v < 48; ++v)
    for (int i = 0; i < 3; ++i) {
      Index c = 0;
      in >> c;
      const auto& row = code.checks()[static_cast<std::size_t>(c - 1)];
      CHECK(std::find(row.begin(), row.end(), v) != row.end());
    }
  CHECK(static_cast<bool>(in));
}
