#include "scdde/ldpc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "scdde/random.hpp"

namespace scdde {

namespace {

constexpr int kConstructionAttempts = 64;
constexpr int kRepairRounds = 400;

using Word = std::uint64_t;

// Edge e joins variable e / 3 to check check_of[e].
class TannerRepair {
 public:
  TannerRepair(Index n, Index m, RandomStream& rng) : n_(n), m_(m), rng_(rng), check_of_(3 * n), members_(m) {
    std::vector<Index> sockets(static_cast<std::size_t>(3 * n));
    for (Index e = 0; e < 3 * n; ++e) sockets[static_cast<std::size_t>(e)] = e / ParityCheckMatrix::kRowWeight;
    rng_.shuffle(sockets.begin(), sockets.end());
    for (Index e = 0; e < 3 * n; ++e) {
      check_of_[static_cast<std::size_t>(e)] = sockets[static_cast<std::size_t>(e)];
      members_[static_cast<std::size_t>(sockets[static_cast<std::size_t>(e)])].push_back(e);
    }
  }

  // Multi-edges plus 4-cycles seen from variable v.
  int conflicts(Index v) const {
    const Index* c = &check_of_[static_cast<std::size_t>(3 * v)];
    int score = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        if (c[a] == c[b]) {
          score += 4;
          continue;
        }
        for (Index e : members_[static_cast<std::size_t>(c[a])]) {
          const Index u = e / 3;
          if (u == v) continue;
          for (Index f : members_[static_cast<std::size_t>(c[b])])
            if (f / 3 == u) ++score;
        }
      }
    return score;
  }

  bool repair() {
    for (int round = 0; round < kRepairRounds; ++round) {
      bool clean = true;
      for (Index v = 0; v < n_; ++v) {
        if (conflicts(v) == 0) continue;
        clean = false;
        const Index e = 3 * v + static_cast<Index>(rng_.below(3));
        const Index f = static_cast<Index>(rng_.below(static_cast<std::uint64_t>(3 * n_)));
        try_swap(e, f);
      }
      if (clean) return true;
    }
    return false;
  }

  std::vector<std::vector<Index>> check_lists() const {
    std::vector<std::vector<Index>> rows(static_cast<std::size_t>(m_));
    for (Index e = 0; e < 3 * n_; ++e) rows[static_cast<std::size_t>(check_of_[static_cast<std::size_t>(e)])].push_back(e / 3);
    for (auto& r : rows) std::sort(r.begin(), r.end());
    return rows;
  }

 private:
  int local_score(Index c1, Index c2, Index v1, Index v2) const {
    std::vector<Index> vars{v1, v2};
    for (Index c : {c1, c2})
      for (Index e : members_[static_cast<std::size_t>(c)]) vars.push_back(e / 3);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    int total = 0;
    for (Index v : vars) total += conflicts(v);
    return total;
  }

  void move_edge(Index e, Index from, Index to) {
    auto& src = members_[static_cast<std::size_t>(from)];
    src.erase(std::find(src.begin(), src.end(), e));
    members_[static_cast<std::size_t>(to)].push_back(e);
    check_of_[static_cast<std::size_t>(e)] = to;
  }

  void swap_checks(Index e, Index f) {
    const Index ce = check_of_[static_cast<std::size_t>(e)];
    const Index cf = check_of_[static_cast<std::size_t>(f)];
    move_edge(e, ce, cf);
    move_edge(f, cf, ce);
  }

  void try_swap(Index e, Index f) {
    const Index ce = check_of_[static_cast<std::size_t>(e)];
    const Index cf = check_of_[static_cast<std::size_t>(f)];
    if (ce == cf || e / 3 == f / 3) return;
    const int before = local_score(ce, cf, e / 3, f / 3);
    swap_checks(e, f);
    const int after = local_score(ce, cf, e / 3, f / 3);
    if (after > before) swap_checks(e, f);
  }

  Index n_;
  Index m_;
  RandomStream& rng_;
  std::vector<Index> check_of_;
  std::vector<std::vector<Index>> members_;
};

std::size_t words_for(Index bits) { return static_cast<std::size_t>((bits + 63) / 64); }

bool test_bit(const std::vector<Word>& row, Index i) { return (row[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1u; }

void set_bit(std::vector<Word>& row, Index i) { row[static_cast<std::size_t>(i / 64)] |= Word(1) << (i % 64); }

}  // namespace

ParityCheckMatrix build_ldpc(Index n, std::uint64_t seed) {
  if (n < 24 || n % 2 != 0) throw std::invalid_argument("build_ldpc: n must be even and >= 24");
  const Index m = n / 2;
  for (int attempt = 0; attempt < kConstructionAttempts; ++attempt) {
    const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(attempt);
    RandomStream rng(trial_seed, {static_cast<std::uint64_t>(n), 0x1d9c});
    TannerRepair graph(n, m, rng);
    if (!graph.repair()) continue;

    ParityCheckMatrix code;
    code.n_ = n;
    code.m_ = m;
    code.seed_ = trial_seed;
    code.check_vars_ = graph.check_lists();
    code.var_checks_.assign(static_cast<std::size_t>(n), {});
    for (Index c = 0; c < m; ++c)
      for (Index v : code.check_vars_[static_cast<std::size_t>(c)]) code.var_checks_[static_cast<std::size_t>(v)].push_back(c);

    // Gauss-Jordan over GF(2); pivot columns become parity positions.
    std::vector<std::vector<Word>> rows(static_cast<std::size_t>(m), std::vector<Word>(words_for(n), 0));
    for (Index c = 0; c < m; ++c)
      for (Index v : code.check_vars_[static_cast<std::size_t>(c)]) set_bit(rows[static_cast<std::size_t>(c)], v);
    std::vector<Index> pivots;
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    Index rank = 0;
    for (Index col = 0; col < n && rank < m; ++col) {
      Index sel = -1;
      for (Index r = rank; r < m; ++r)
        if (test_bit(rows[static_cast<std::size_t>(r)], col)) {
          sel = r;
          break;
        }
      if (sel < 0) continue;
      std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(sel)]);
      const auto& piv = rows[static_cast<std::size_t>(rank)];
      for (Index r = 0; r < m; ++r) {
        if (r == rank || !test_bit(rows[static_cast<std::size_t>(r)], col)) continue;
        auto& target = rows[static_cast<std::size_t>(r)];
        for (std::size_t w = 0; w < target.size(); ++w) target[w] ^= piv[w];
      }
      pivots.push_back(col);
      is_pivot[static_cast<std::size_t>(col)] = true;
      ++rank;
    }
    if (rank < m) continue;  // rank deficient: rate would exceed 1/2

    for (Index col = 0; col < n; ++col)
      if (!is_pivot[static_cast<std::size_t>(col)]) code.info_positions_.push_back(col);
    code.parity_positions_ = pivots;
    const Index k = n - m;
    code.parity_masks_.assign(static_cast<std::size_t>(m), std::vector<Word>(words_for(k), 0));
    for (Index r = 0; r < m; ++r)
      for (Index i = 0; i < k; ++i)
        if (test_bit(rows[static_cast<std::size_t>(r)], code.info_positions_[static_cast<std::size_t>(i)]))
          set_bit(code.parity_masks_[static_cast<std::size_t>(r)], i);
    return code;
  }
  throw std::runtime_error("build_ldpc: no 4-cycle-free full-rank (3,6) matrix found for n = " + std::to_string(n));
}

Bits encode(std::span<const std::uint8_t> info, const ParityCheckMatrix& code) {
  if (static_cast<Index>(info.size()) != code.k()) throw std::invalid_argument("encode: info length != n/2");
  std::vector<Word> packed(words_for(code.k()), 0);
  for (Index i = 0; i < code.k(); ++i)
    if (info[static_cast<std::size_t>(i)] & 1u) set_bit(packed, i);
  Bits word(static_cast<std::size_t>(code.n()), 0);
  for (Index i = 0; i < code.k(); ++i)
    word[static_cast<std::size_t>(code.info_positions_[static_cast<std::size_t>(i)])] = info[static_cast<std::size_t>(i)] & 1u;
  for (Index r = 0; r < code.m(); ++r) {
    const auto& mask = code.parity_masks_[static_cast<std::size_t>(r)];
    int parity = 0;
    for (std::size_t w = 0; w < mask.size(); ++w) parity ^= std::popcount(mask[w] & packed[w]) & 1;
    word[static_cast<std::size_t>(code.parity_positions_[static_cast<std::size_t>(r)])] = static_cast<std::uint8_t>(parity);
  }
  return word;
}

Bits ParityCheckMatrix::syndrome(std::span<const std::uint8_t> word) const {
  if (static_cast<Index>(word.size()) != n_) throw std::invalid_argument("syndrome: word length != n");
  Bits s(static_cast<std::size_t>(m_), 0);
  for (Index c = 0; c < m_; ++c) {
    std::uint8_t acc = 0;
    for (Index v : check_vars_[static_cast<std::size_t>(c)]) acc ^= word[static_cast<std::size_t>(v)] & 1u;
    s[static_cast<std::size_t>(c)] = acc;
  }
  return s;
}

bool ParityCheckMatrix::is_codeword(std::span<const std::uint8_t> word) const {
  const auto s = syndrome(word);
  return std::all_of(s.begin(), s.end(), [](std::uint8_t b) { return b == 0; });
}

int ParityCheckMatrix::girth() const {
  // BFS over the bipartite graph; node ids: variables 0..n-1, checks n..n+m-1.
  int best = std::numeric_limits<int>::max();
  const Index total = n_ + m_;
  std::vector<int> dist(static_cast<std::size_t>(total));
  std::vector<Index> parent(static_cast<std::size_t>(total));
  for (Index root = 0; root < n_; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<Index> q;
    dist[static_cast<std::size_t>(root)] = 0;
    parent[static_cast<std::size_t>(root)] = -1;
    q.push(root);
    while (!q.empty()) {
      const Index node = q.front();
      q.pop();
      if (2 * dist[static_cast<std::size_t>(node)] >= best) break;
      const auto& nbrs = node < n_ ? var_checks_[static_cast<std::size_t>(node)] : check_vars_[static_cast<std::size_t>(node - n_)];
      for (Index raw : nbrs) {
        const Index next = node < n_ ? raw + n_ : raw;
        if (next == parent[static_cast<std::size_t>(node)]) continue;
        if (dist[static_cast<std::size_t>(next)] < 0) {
          dist[static_cast<std::size_t>(next)] = dist[static_cast<std::size_t>(node)] + 1;
          parent[static_cast<std::size_t>(next)] = node;
          q.push(next);
        } else {
          best = std::min(best, dist[static_cast<std::size_t>(node)] + dist[static_cast<std::size_t>(next)] + 1);
        }
      }
    }
  }
  return best == std::numeric_limits<int>::max() ? 0 : best;
}

Eigen::VectorXd demap_llr(const CVector& y, const ModulationScheme& scheme, const Eigen::VectorXd& sigma2) {
  if (sigma2.size() != y.size()) throw std::invalid_argument("demap_llr: variance vector length mismatch");
  if ((sigma2.array() <= 0.0).any()) throw std::invalid_argument("demap_llr: variance must be positive");
  const int bps = scheme.bits_per_symbol();
  Eigen::VectorXd llr(y.size() * bps);
  const double amplitude = bps == 1 ? std::sqrt(scheme.Es) : std::sqrt(scheme.Es / 2.0);
  for (Index n = 0; n < y.size(); ++n) {
    const cplx derotated = y(n) * std::conj(scheme.phase_ramp(n));
    const double scale = 4.0 * amplitude / sigma2(n);
    if (bps == 1) {
      llr(n) = scale * derotated.real();
    } else {
      llr(2 * n) = scale * derotated.real();
      llr(2 * n + 1) = scale * derotated.imag();
    }
  }
  return llr.cwiseMax(-kLlrClamp).cwiseMin(kLlrClamp);
}

Bits hard_decisions(const Eigen::VectorXd& llr) {
  Bits out(static_cast<std::size_t>(llr.size()));
  for (Index i = 0; i < llr.size(); ++i) out[static_cast<std::size_t>(i)] = llr(i) < 0.0 ? 1 : 0;
  return out;
}

DecodeResult decode_bp(const Eigen::VectorXd& llr, const ParityCheckMatrix& code, int max_iters) {
  const Index n = code.n();
  if (llr.size() != n) throw std::invalid_argument("decode_bp: LLR length != n");
  if (!llr.allFinite()) throw std::invalid_argument("decode_bp: non-finite LLR");

  // Edge storage grouped by check; var_edges lists each variable's edges.
  const auto& checks = code.checks();
  std::vector<Index> edge_var;
  std::vector<Index> check_start{0};
  for (const auto& row : checks) {
    for (Index v : row) edge_var.push_back(v);
    check_start.push_back(static_cast<Index>(edge_var.size()));
  }
  std::vector<std::vector<Index>> var_edges(static_cast<std::size_t>(n));
  for (Index e = 0; e < static_cast<Index>(edge_var.size()); ++e) var_edges[static_cast<std::size_t>(edge_var[static_cast<std::size_t>(e)])].push_back(e);

  std::vector<double> v2c(edge_var.size());
  std::vector<double> c2v(edge_var.size(), 0.0);
  for (std::size_t e = 0; e < edge_var.size(); ++e) v2c[e] = llr(edge_var[e]);

  DecodeResult result;
  result.codeword.assign(static_cast<std::size_t>(n), 0);
  std::vector<double> t, prefix, suffix;
  constexpr double kTanhLimit = 1.0 - 1e-15;
  for (int iter = 1; iter <= max_iters; ++iter) {
    for (std::size_t c = 0; c + 1 < check_start.size(); ++c) {
      const auto begin = static_cast<std::size_t>(check_start[c]);
      const auto deg = static_cast<std::size_t>(check_start[c + 1]) - begin;
      t.resize(deg);
      prefix.resize(deg + 1);
      suffix.resize(deg + 1);
      for (std::size_t i = 0; i < deg; ++i) t[i] = std::tanh(0.5 * v2c[begin + i]);
      prefix[0] = 1.0;
      suffix[deg] = 1.0;
      for (std::size_t i = 0; i < deg; ++i) prefix[i + 1] = prefix[i] * t[i];
      for (std::size_t i = deg; i-- > 0;) suffix[i] = suffix[i + 1] * t[i];
      for (std::size_t i = 0; i < deg; ++i) {
        const double p = std::clamp(prefix[i] * suffix[i + 1], -kTanhLimit, kTanhLimit);
        c2v[begin + i] = 2.0 * std::atanh(p);
      }
    }
    for (Index v = 0; v < n; ++v) {
      double total = llr(v);
      for (Index e : var_edges[static_cast<std::size_t>(v)]) total += c2v[static_cast<std::size_t>(e)];
      result.codeword[static_cast<std::size_t>(v)] = total < 0.0 ? 1 : 0;
      for (Index e : var_edges[static_cast<std::size_t>(v)]) v2c[static_cast<std::size_t>(e)] = total - c2v[static_cast<std::size_t>(e)];
    }
    result.iterations = iter;
    if (code.is_codeword(result.codeword)) {
      result.converged = true;
      break;
    }
  }
  result.info.resize(static_cast<std::size_t>(code.k()));
  for (Index i = 0; i < code.k(); ++i)
    result.info[static_cast<std::size_t>(i)] = result.codeword[static_cast<std::size_t>(code.info_positions()[static_cast<std::size_t>(i)])];
  return result;
}

void write_alist(std::ostream& out, const ParityCheckMatrix& code) {
  out << code.n() << ' ' << code.m() << '\n';
  out << ParityCheckMatrix::kColumnWeight << ' ' << ParityCheckMatrix::kRowWeight << '\n';
  for (Index v = 0; v < code.n(); ++v) out << code.variables()[static_cast<std::size_t>(v)].size() << (v + 1 < code.n() ? ' ' : '\n');
  for (Index c = 0; c < code.m(); ++c) out << code.checks()[static_cast<std::size_t>(c)].size() << (c + 1 < code.m() ? ' ' : '\n');
  for (const auto& col : code.variables()) {
    for (std::size_t i = 0; i < col.size(); ++i) out << col[i] + 1 << (i + 1 < col.size() ? ' ' : '\n');
  }
  for (const auto& row : code.checks()) {
    for (std::size_t i = 0; i < row.size(); ++i) out << row[i] + 1 << (i + 1 < row.size() ? ' ' : '\n');
  }
}

}  // namespace scdde
