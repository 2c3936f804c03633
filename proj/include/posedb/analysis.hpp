#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posedb/graph.hpp"

namespace posedb {

// ---------------------------------------------------------------------------
// Depth-robustness
// ---------------------------------------------------------------------------

enum class CheckMode { exhaustive, sampled };

std::string to_string(CheckMode mode);

struct DepthRobustOptions {
  CheckMode mode = CheckMode::exhaustive;
  std::uint64_t samples = 0;                 ///< sampled mode
  std::uint64_t seed = 0;                    ///< sampled mode
  std::uint64_t exhaustive_cap = 10'000'000;  ///< max removal sets enumerated
};

struct RemovalViolation {
  std::vector<NodeId> removed;
  std::uint64_t surviving = 0;  ///< outputs outside R with llp >= gamma
  std::uint64_t required = 0;   ///< mu - |R|
};

struct DepthRobustReport {
  std::uint64_t mu = 0;
  std::uint64_t gamma = 0;
  CheckMode mode = CheckMode::exhaustive;
  std::uint64_t checked = 0;
  std::uint64_t violation_count = 0;
  std::vector<RemovalViolation> violations;  ///< the first few

  bool passed() const { return violation_count == 0; }
};

/// Decides, for every tested R with |R| < mu, whether at least mu - |R|
/// nodes of `outputs` \ R keep an incoming path of length >= gamma in g \ R.
///
/// Exhaustive mode enumerates every R (the empty set included) and throws
/// InfeasibleError when that exceeds the cap. Sampled mode draws |R|
/// uniformly from 1..mu-1, then R uniformly among sets of that size.
DepthRobustReport depth_robust_check(const Dag& g, std::span<const NodeId> outputs,
                                     std::uint64_t mu, std::uint64_t gamma,
                                     const DepthRobustOptions& options = {});

/// Σ_{k<mu} C(n, k), saturating at UINT64_MAX.
std::uint64_t removal_set_count(std::uint64_t n, std::uint64_t mu);

// ---------------------------------------------------------------------------
// Connectors
// ---------------------------------------------------------------------------

struct ConnectorReport {
  std::size_t n = 0;  ///< inputs = outputs
  CheckMode mode = CheckMode::exhaustive;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::uint64_t flow_rejections = 0;  ///< failures already decided by max-flow
  std::vector<std::string> failure_examples;

  bool passed() const { return failures == 0; }
};

/// For k = 1..n and sequences s' of distinct inputs and t' of distinct
/// outputs, decides whether there are k fully vertex-disjoint paths with
/// s'_i -> t'_i. Inputs are the nodes without predecessors, outputs are
/// g.outputs(). Exhaustive for n <= 4 unless `mode` is sampled.
ConnectorReport connector_check(const Dag& g, CheckMode mode = CheckMode::exhaustive,
                                std::uint64_t samples = 0, std::uint64_t seed = 0);

/// Exact decision for one pairing.
bool disjoint_paths_exist(const Dag& g, std::span<const NodeId> sources,
                          std::span<const NodeId> sinks);

/// Max number of vertex-disjoint paths from any source to any sink.
std::size_t vertex_disjoint_flow(const Dag& g, std::span<const NodeId> sources,
                                 std::span<const NodeId> sinks);

// ---------------------------------------------------------------------------
// Hamming spheres
// ---------------------------------------------------------------------------

using BigInt = boost::multiprecision::cpp_int;

/// S_c = Σ_{j<=c} C(m, j)(2^w - 1)^j; S_{-1} = 0.
BigInt hamming_sphere(unsigned m, unsigned w, int c);

/// Largest c in [0, m] with S_c <= 2^y, or -1 if none.
int max_sphere_radius(unsigned m, unsigned w, unsigned y);

struct SphereLemmaReport {
  std::uint64_t c_ineq_checked = 0;
  std::uint64_t c_ineq_failures = 0;
  std::uint64_t cmax_checked = 0;
  std::uint64_t cmax_failures = 0;
  std::vector<std::string> counterexamples;

  bool passed() const { return c_ineq_failures == 0 && cmax_failures == 0; }
};

/// Checks both sphere inequalities exactly for 1 <= m <= m_max,
/// 1 <= w <= w_max. The c inequality is checked where 2^w >= m + 3 and
/// 0 <= c < m; the radius bound for m + w <= y <= m*w.
SphereLemmaReport verify_sphere_lemmas(unsigned m_max, unsigned w_max);

// ---------------------------------------------------------------------------
// Security bounds
// ---------------------------------------------------------------------------

struct BoundInputs {
  std::uint64_t m = 1;
  unsigned w = 256;
  unsigned r = 1;
  std::uint64_t M = 0;  ///< adversary memory in bits
  std::uint64_t q = 0;
  bool restricted = true;
};

struct Probability {
  double raw = 0;
  double clipped = 0;
};

Probability make_probability(double raw);

struct GraphBound {
  double w0 = 0;
  std::uint64_t m_prime = 0;  ///< M'
  double per_round = 0;       ///< M'/m
  double additive = 0;        ///< 2^{-w0}
  Probability value;
};

/// (M'/m)^r + 2^{-w0}. Throws InapplicableError when the unrestricted w0 is
/// not positive (or q = 0).
GraphBound bound_graph(const BoundInputs& in);

struct UnconditionalBound {
  Probability basic;                    ///< (1 - 1/m)^r + 2^{M - mw}
  std::optional<Probability> improved;  ///< only when M <= mw - m - w
  std::optional<std::uint64_t> ceiling_blocks;
};

UnconditionalBound bound_unconditional(std::uint64_t m, unsigned w, std::uint64_t M, unsigned r);

/// Smallest r with bound_graph(r) <= target. Throws InfeasibleError if the
/// additive term alone reaches the target or the per-round factor is 1.
unsigned min_rounds(double target, BoundInputs in);

struct HashCounts {
  std::uint64_t full = 0;         ///< (k^2+k+3) 2^{k+1} - 2
  std::uint64_t lightweight = 0;  ///< 367 * 2^{k-3}
  std::uint64_t ratio_num = 0;    ///< full / lightweight, reduced
  std::uint64_t ratio_den = 1;
  double ratio() const { return static_cast<double>(ratio_num) / static_cast<double>(ratio_den); }
};

/// Requires k > 3.
HashCounts hash_count_comparison(unsigned k);

}  // namespace posedb
