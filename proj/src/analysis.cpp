#include "posedb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "posedb/errors.hpp"
#include "posedb/rng.hpp"

namespace posedb {

std::string to_string(CheckMode mode) {
  return mode == CheckMode::exhaustive ? "exhaustive" : "sampled";
}

// ---------------------------------------------------------------------------
// Depth-robustness
// ---------------------------------------------------------------------------

std::uint64_t removal_set_count(std::uint64_t n, std::uint64_t mu) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  unsigned __int128 binom = 1;
  for (std::uint64_t k = 0; k < mu && k <= n; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    if (binom > kMax || total > kMax - static_cast<std::uint64_t>(binom)) return kMax;
    total += static_cast<std::uint64_t>(binom);
  }
  return total;
}

namespace {

class RemovalTester {
 public:
  RemovalTester(const Dag& g, std::span<const NodeId> outputs, std::uint64_t mu,
                std::uint64_t gamma, DepthRobustReport& report)
      : g_(g), outputs_(outputs), mu_(mu), gamma_(gamma), report_(report),
        removed_(g.node_count(), false) {}

  void test(const std::vector<NodeId>& set) {
    for (NodeId v : set) removed_[v] = true;
    const auto depth = llp_all(g_, removed_);
    std::uint64_t surviving = 0;
    for (NodeId o : outputs_) {
      if (!removed_[o] && depth[o] >= 0 && static_cast<std::uint64_t>(depth[o]) >= gamma_) {
        ++surviving;
      }
    }
    const std::uint64_t required = mu_ > set.size() ? mu_ - set.size() : 0;
    ++report_.checked;
    if (surviving < required) {
      ++report_.violation_count;
      if (report_.violations.size() < 10) report_.violations.push_back({set, surviving, required});
    }
    for (NodeId v : set) removed_[v] = false;
  }

 private:
  const Dag& g_;
  std::span<const NodeId> outputs_;
  std::uint64_t mu_;
  std::uint64_t gamma_;
  DepthRobustReport& report_;
  std::vector<bool> removed_;
};

}  // namespace

DepthRobustReport depth_robust_check(const Dag& g, std::span<const NodeId> outputs,
                                     std::uint64_t mu, std::uint64_t gamma,
                                     const DepthRobustOptions& options) {
  if (mu < 1) throw ParameterError("mu must be at least 1");
  for (NodeId o : outputs) {
    if (o >= g.node_count()) throw ParameterError("output node out of range");
  }
  DepthRobustReport report;
  report.mu = mu;
  report.gamma = gamma;
  report.mode = options.mode;
  RemovalTester tester(g, outputs, mu, gamma, report);
  const std::uint64_t n = g.node_count();

  if (options.mode == CheckMode::exhaustive) {
    const std::uint64_t total = removal_set_count(n, mu);
    if (total > options.exhaustive_cap) {
      throw InfeasibleError("exhaustive check needs " + std::to_string(total) +
                            " removal sets, above the cap of " +
                            std::to_string(options.exhaustive_cap) + "; use sampled mode");
    }
    std::vector<NodeId> set;
    for (std::uint64_t size = 0; size < mu && size <= n; ++size) {
      set.resize(size);
      for (std::uint64_t i = 0; i < size; ++i) set[i] = static_cast<NodeId>(i);
      while (true) {
        tester.test(set);
        // Next combination in lexicographic order.
        std::int64_t i = static_cast<std::int64_t>(size) - 1;
        while (i >= 0 && set[static_cast<std::size_t>(i)] == n - size + static_cast<std::uint64_t>(i)) --i;
        if (i < 0) break;
        ++set[static_cast<std::size_t>(i)];
        for (auto j = static_cast<std::size_t>(i) + 1; j < size; ++j) set[j] = set[j - 1] + 1;
      }
    }
    return report;
  }

  Rng rng(options.seed);
  std::vector<NodeId> set;
  std::vector<bool> chosen(n, false);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    set.clear();
    if (mu > 1) {
      const std::uint64_t size = std::min<std::uint64_t>(1 + rng.below(mu - 1), n);
      // Floyd's algorithm.
      for (std::uint64_t j = n - size; j < n; ++j) {
        const auto t = static_cast<NodeId>(rng.below(j + 1));
        const NodeId pick = chosen[t] ? static_cast<NodeId>(j) : t;
        chosen[pick] = true;
        set.push_back(pick);
      }
      for (NodeId v : set) chosen[v] = false;
      std::sort(set.begin(), set.end());
    }
    tester.test(set);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Connectors
// ---------------------------------------------------------------------------

std::size_t vertex_disjoint_flow(const Dag& g, std::span<const NodeId> sources,
                                 std::span<const NodeId> sinks) {
  // Node v splits into 2v (in) and 2v+1 (out); S and T are the last two.
  const std::size_t n = g.node_count();
  const std::size_t S = 2 * n, T = 2 * n + 1;
  struct Edge {
    std::size_t to;
    int cap;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> adj(2 * n + 2);
  auto add = [&](std::size_t a, std::size_t b) {
    adj[a].push_back(edges.size());
    edges.push_back({b, 1});
    adj[b].push_back(edges.size());
    edges.push_back({a, 0});
  };
  for (NodeId v = 0; v < n; ++v) {
    add(2 * v, 2 * v + 1);
    for (NodeId p : g.preds(v)) add(2 * p + 1, 2 * v);
  }
  for (NodeId s : sources) add(S, 2 * s);
  for (NodeId t : sinks) add(2 * t + 1, T);

  std::size_t flow = 0;
  std::vector<bool> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) -> bool {
    if (u == T) return true;
    seen[u] = true;
    for (std::size_t e : adj[u]) {
      if (edges[e].cap > 0 && !seen[edges[e].to] && augment(edges[e].to)) {
        --edges[e].cap;
        ++edges[e ^ 1].cap;
        return true;
      }
    }
    return false;
  };
  while (true) {
    seen.assign(2 * n + 2, false);
    if (!augment(S)) break;
    ++flow;
  }
  return flow;
}

namespace {

using PathSet = std::vector<std::uint64_t>;

constexpr std::size_t kMaxPathsPerPair = 1'000'000;

std::vector<PathSet> enumerate_paths(const Dag& g, const std::vector<std::vector<NodeId>>& succ,
                                     NodeId s, NodeId t) {
  const NodeId roots[] = {t};
  const auto reaches_t = ancestor_mask(g, roots);
  std::vector<PathSet> out;
  if (!reaches_t[s]) return out;
  const std::size_t words = (g.node_count() + 63) / 64;
  PathSet cur(words, 0);
  std::function<void(NodeId)> walk = [&](NodeId v) {
    cur[v / 64] |= 1ull << (v % 64);
    if (v == t) {
      if (out.size() >= kMaxPathsPerPair) throw InfeasibleError("too many paths to enumerate");
      out.push_back(cur);
    } else {
      for (NodeId u : succ[v]) {
        if (u <= t && reaches_t[u]) walk(u);
      }
    }
    cur[v / 64] &= ~(1ull << (v % 64));
  };
  walk(s);
  return out;
}

bool disjoint(const PathSet& a, const PathSet& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & b[i]) return false;
  }
  return true;
}

bool route(const std::vector<std::vector<PathSet>>& options, const std::vector<std::size_t>& order,
           std::size_t depth, PathSet& used) {
  if (depth == order.size()) return true;
  for (const PathSet& p : options[order[depth]]) {
    if (!disjoint(p, used)) continue;
    for (std::size_t i = 0; i < used.size(); ++i) used[i] |= p[i];
    const bool ok = route(options, order, depth + 1, used);
    for (std::size_t i = 0; i < used.size(); ++i) used[i] &= ~p[i];
    if (ok) return true;
  }
  return false;
}

bool disjoint_paths_with(const Dag& g, const std::vector<std::vector<NodeId>>& succ,
                         std::span<const NodeId> sources, std::span<const NodeId> sinks) {
  std::vector<std::vector<PathSet>> options;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    options.push_back(enumerate_paths(g, succ, sources[i], sinks[i]));
    if (options.back().empty()) return false;
  }
  std::vector<std::size_t> order(options.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return options[a].size() < options[b].size(); });
  PathSet used((g.node_count() + 63) / 64, 0);
  return route(options, order, 0, used);
}

std::string describe_pairing(std::span<const NodeId> s, std::span<const NodeId> t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i] << "->" << t[i];
  return os.str();
}

}  // namespace

bool disjoint_paths_exist(const Dag& g, std::span<const NodeId> sources,
                          std::span<const NodeId> sinks) {
  if (sources.size() != sinks.size()) throw ParameterError("sources and sinks differ in length");
  return disjoint_paths_with(g, g.successors(), sources, sinks);
}

ConnectorReport connector_check(const Dag& g, CheckMode mode, std::uint64_t samples,
                                std::uint64_t seed) {
  const auto ins = g.inputs();
  const auto& outs = g.outputs();
  if (ins.size() != outs.size()) {
    throw ParameterError("connector check needs as many inputs as outputs");
  }
  ConnectorReport report;
  report.n = ins.size();
  report.mode = mode;
  const auto succ = g.successors();

  auto decide = [&](const std::vector<NodeId>& s, const std::vector<NodeId>& t) {
    ++report.checked;
    bool ok = vertex_disjoint_flow(g, s, t) >= s.size();
    if (!ok) {
      ++report.flow_rejections;
    } else {
      ok = disjoint_paths_with(g, succ, s, t);
    }
    if (!ok) {
      ++report.failures;
      if (report.failure_examples.size() < 10) {
        report.failure_examples.push_back(describe_pairing(s, t));
      }
    }
  };

  const std::size_t n = report.n;
  if (mode == CheckMode::exhaustive) {
    if (n > 4) {
      throw InfeasibleError("exhaustive connector check is limited to n <= 4; use sampled mode");
    }
    // All ordered k-sequences of distinct inputs, then of distinct outputs.
    std::vector<std::vector<std::size_t>> seqs;
    std::vector<std::size_t> cur;
    std::vector<bool> used(n, false);
    std::function<void(std::size_t)> gen = [&](std::size_t k) {
      if (cur.size() == k) {
        seqs.push_back(cur);
        return;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        used[i] = true;
        cur.push_back(i);
        gen(k);
        cur.pop_back();
        used[i] = false;
      }
    };
    for (std::size_t k = 1; k <= n; ++k) {
      seqs.clear();
      gen(k);
      for (const auto& a : seqs) {
        std::vector<NodeId> s;
        for (std::size_t i : a) s.push_back(ins[i]);
        for (const auto& b : seqs) {
          std::vector<NodeId> t;
          for (std::size_t i : b) t.push_back(outs[i]);
          decide(s, t);
        }
      }
    }
    return report;
  }

  Rng rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const std::size_t k = 1 + rng.below(n);
    auto draw = [&](const std::vector<NodeId>& pool) {
      std::vector<NodeId> p = pool;
      for (std::size_t j = 0; j < k; ++j) std::swap(p[j], p[j + rng.below(p.size() - j)]);
      p.resize(k);
      return p;
    };
    decide(draw(ins), draw(outs));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Hamming spheres
// ---------------------------------------------------------------------------

namespace {

BigInt binom(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt out = 1;
  for (unsigned i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

BigInt pow2(unsigned e) { return BigInt(1) << e; }

}  // namespace

BigInt hamming_sphere(unsigned m, unsigned w, int c) {
  if (c > static_cast<int>(m)) throw ParameterError("sphere radius above m");
  BigInt total = 0;
  const BigInt q = pow2(w) - 1;
  BigInt power = 1;
  for (int j = 0; j <= c; ++j) {
    total += binom(m, static_cast<unsigned>(j)) * power;
    power *= q;
  }
  return total;
}

int max_sphere_radius(unsigned m, unsigned w, unsigned y) {
  const BigInt limit = pow2(y);
  int best = -1;
  for (int c = 0; c <= static_cast<int>(m); ++c) {
    if (hamming_sphere(m, w, c) <= limit) best = c;
  }
  return best;
}

SphereLemmaReport verify_sphere_lemmas(unsigned m_max, unsigned w_max) {
  SphereLemmaReport report;
  auto note = [&](const std::string& s) {
    if (report.counterexamples.size() < 20) report.counterexamples.push_back(s);
  };
  for (unsigned m = 1; m <= m_max; ++m) {
    for (unsigned w = 1; w <= w_max; ++w) {
      if (pow2(w) >= m + 3) {
        for (unsigned c = 0; c < m; ++c) {
          const BigInt lhs = BigInt(m) * (m + 1) * binom(m, c) *
                             boost::multiprecision::pow(pow2(w) - 1, c);
          const BigInt rhs = pow2(w) * hamming_sphere(m, w, static_cast<int>(c) - 1);
          ++report.c_ineq_checked;
          if (lhs < rhs) {
            ++report.c_ineq_failures;
            note("c_ineq m=" + std::to_string(m) + " w=" + std::to_string(w) +
                 " c=" + std::to_string(c));
          }
        }
      }
      for (unsigned y = m + w; y <= m * w; ++y) {
        const int c = max_sphere_radius(m, w, y);
        const unsigned num = y - m - w + 1;
        const auto bound = static_cast<int>((num + w - 1) / w);
        ++report.cmax_checked;
        if (c < bound) {
          ++report.cmax_failures;
          note("cmax m=" + std::to_string(m) + " w=" + std::to_string(w) +
               " y=" + std::to_string(y));
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Security bounds
// ---------------------------------------------------------------------------

Probability make_probability(double raw) { return {raw, std::clamp(raw, 0.0, 1.0)}; }

GraphBound bound_graph(const BoundInputs& in) {
  if (in.m < 1) throw ParameterError("m must be at least 1");
  if (in.r < 1) throw ParameterError("r must be at least 1");
  GraphBound b;
  if (in.restricted) {
    b.w0 = in.w;
    b.m_prime = (in.M + in.w - 1) / in.w;
  } else {
    if (in.q < 1) throw InapplicableError("unrestricted bound needs q >= 1");
    b.w0 = in.w - std::log2(static_cast<double>(in.m)) - std::log2(static_cast<double>(in.q));
    if (b.w0 <= 0) {
      throw InapplicableError("w0 = w - log m - log q is not positive");
    }
    b.m_prime = static_cast<std::uint64_t>(std::ceil(static_cast<double>(in.M) / b.w0));
  }
  b.per_round = static_cast<double>(b.m_prime) / static_cast<double>(in.m);
  b.additive = std::exp2(-b.w0);
  b.value = make_probability(std::pow(b.per_round, in.r) + b.additive);
  return b;
}

UnconditionalBound bound_unconditional(std::uint64_t m, unsigned w, std::uint64_t M, unsigned r) {
  if (m < 1) throw ParameterError("m must be at least 1");
  if (r < 1) throw ParameterError("r must be at least 1");
  const std::uint64_t total = m * w;
  if (M > total) throw ParameterError("M exceeds m*w");
  const double md = static_cast<double>(m);
  UnconditionalBound out;
  out.basic = make_probability(std::pow(1.0 - 1.0 / md, r) +
                               std::exp2(static_cast<double>(M) - static_cast<double>(total)));
  if (total >= m + w && M <= total - m - w) {
    const std::uint64_t blocks = (total - m - w - M + 1 + w - 1) / w;
    out.ceiling_blocks = blocks;
    out.improved = make_probability(std::pow(1.0 - static_cast<double>(blocks) / md, r) +
                                    md * (md + 1) * std::exp2(-static_cast<double>(w)));
  }
  return out;
}

unsigned min_rounds(double target, BoundInputs in) {
  if (target >= 1) return 1;
  in.r = 1;
  const GraphBound one = bound_graph(in);
  if (one.additive >= target) {
    throw InfeasibleError("the additive term 2^-w0 alone exceeds the target");
  }
  if (one.per_round >= 1) {
    throw InfeasibleError("per-round factor M'/m is 1; no number of rounds reaches the target");
  }
  auto value = [&](unsigned r) {
    in.r = r;
    return bound_graph(in).value.raw;
  };
  unsigned r = 1;
  if (one.per_round > 0) {
    const double est = std::log(target - one.additive) / std::log(one.per_round);
    r = static_cast<unsigned>(std::max(1.0, std::ceil(est)));
  }
  while (r > 1 && value(r - 1) <= target) --r;
  while (value(r) > target) ++r;
  return r;
}

HashCounts hash_count_comparison(unsigned k) {
  if (k <= 3) throw ParameterError("hash-count comparison needs k > 3");
  HashCounts h;
  h.full = indexed_node_count_closed_form(k);
  h.lightweight = 367ull << (k - 3);
  const std::uint64_t d = std::gcd(h.full, h.lightweight);
  h.ratio_num = h.full / d;
  h.ratio_den = h.lightweight / d;
  return h;
}

}  // namespace posedb
