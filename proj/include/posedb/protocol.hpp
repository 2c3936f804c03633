#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "posedb/graph.hpp"
#include "posedb/labeling.hpp"
#include "posedb/oracle.hpp"
#include "posedb/rng.hpp"

namespace posedb {

enum class Variant {
  unconditional,  ///< ψ stored verbatim
  graph,          ///< labels of build_arbitrary(m)
  graph_pow2,     ///< labels of Base(RS(G_{n+1})), m = 2^n
  lightweight,    ///< labels of build_lightweight(m)
};

std::string to_string(Variant v);
/// Accepts "unconditional", "graph", "graph-pow2", "lightweight".
Variant parse_variant(const std::string& name);
bool is_graph_variant(Variant v);

struct ProtocolParams {
  Variant variant = Variant::graph;
  std::uint64_t m = 1;  ///< memory blocks
  unsigned w = 256;     ///< bits per block
  unsigned r = 1;       ///< rounds
  std::uint64_t q = 0;  ///< per-round oracle budget of the local adversary
};

/// Public data ρ and a description of ℐ.
struct SetupOutput {
  std::shared_ptr<const TaggedGraph> graph;  ///< null for the unconditional variant
  std::uint64_t gamma = 0;                   ///< depth parameter; 0 if no graph
  std::string param_space;                   ///< "{0,1}^N" or "H"
};

/// Length in bytes of Υ when it is an oracle seed.
inline constexpr std::size_t kSessionSeedBytes = 32;

/// Verifier side of one session. Holds ψ or the reference labels of every
/// ancestor of O(G), computed once.
class Verifier {
 public:
  bool vrfy(std::uint64_t x, const Label& y) const { return y == expected(x); }
  const Label& expected(std::uint64_t x) const { return expected_.at(x); }

  /// True iff `input` equals ℓ⁻(v) for some node v of the graph.
  bool is_valid_pre_label(std::span<const std::uint8_t> input) const;

  std::uint64_t reference_calls() const { return reference_calls_; }

 private:
  friend class Protocol;

  const Dag* graph_ = nullptr;
  std::vector<Label> node_labels_;
  std::vector<Label> expected_;
  std::uint64_t reference_calls_ = 0;
};

struct PrecmpResult {
  Bytes sigma;
  std::uint64_t oracle_calls = 0;
  std::size_t words_peak = 0;
};

/// The five algorithms of a PoSE-DB instance. Immutable after setup.
///
/// Challenges are indices into O(G) (or block indices for the unconditional
/// variant), 0-based.
class Protocol {
 public:
  /// Validates parameters and builds ρ. For graph variants q must be below
  /// γ; throws ParameterError otherwise.
  static Protocol setup(const ProtocolParams& params);

  const ProtocolParams& params() const { return params_; }
  const SetupOutput& rho() const { return rho_; }
  const Dag* graph() const { return rho_.graph ? &rho_.graph->dag : nullptr; }
  std::size_t word_bytes() const { return params_.w / 8; }
  std::uint64_t sigma_bits() const { return params_.m * params_.w; }

  /// Υ ←$ ℐ.
  Bytes sample_upsilon(Rng& rng) const;

  /// The oracle h selected by Υ, for graph variants.
  HashOracle oracle_for(const Bytes& upsilon, std::optional<std::uint64_t> budget = {}) const;

  /// Honest precomputation; graph variants label in place.
  PrecmpResult precmp(const Bytes& upsilon) const;

  std::uint64_t chal(Rng& rng) const { return rng.below(params_.m); }

  /// Node of O(G) named by challenge x.
  NodeId challenge_node(std::uint64_t x) const;

  /// Lookup of block x in σ. Throws ProtocolError on a malformed σ.
  Label resp(std::span<const std::uint8_t> sigma, std::uint64_t x) const;

  Verifier verifier(const Bytes& upsilon) const;

  /// Copy with a different round count.
  Protocol with_rounds(unsigned r) const;

 private:
  ProtocolParams params_;
  SetupOutput rho_;
};

}  // namespace posedb
