#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "posedb/adversary.hpp"
#include "posedb/analysis.hpp"
#include "posedb/protocol.hpp"

namespace posedb {

struct ExperimentConfig {
  std::uint64_t M = 0;  ///< enforced bound on |σ_i| in bits
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct RoundRecord {
  std::uint64_t x = 0;
  std::optional<NodeId> node;
  Label y;
  bool ok = false;
  std::uint64_t oracle_calls = 0;
  std::uint64_t sigma_bits = 0;
  bool over_memory = false;        ///< |σ_i| > M; A1 was not run
  bool budget_exhausted = false;   ///< BudgetExhausted escaped A1
  std::uint64_t invalid_queries = 0;  ///< of a graph-restricted adversary
};

struct SessionTranscript {
  ProtocolParams params;
  std::string adversary;
  std::uint64_t M = 0;
  std::uint64_t seed = 0;
  std::string upsilon_digest;
  std::vector<RoundRecord> rounds;
  bool verdict = false;

  nlohmann::ordered_json to_json() const;
};

/// One run of the security experiment. Υ and the challenges come from a
/// generator seeded with `seed`. Before round i, A0 gets x_1..x_{i-1}; its
/// state is measured against M; A1 answers with a fresh oracle limited to q
/// queries. Exceeding M or q fails the round. Throws ProtocolError when A1's
/// answer has the wrong width and ContractError when a declared-uniform
/// adversary changes its state.
SessionTranscript run_experiment(const Protocol& protocol, Adversary& adversary, std::uint64_t M,
                                 std::uint64_t seed);

struct EstimateReport {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double p_hat = 0;
  double sigma = 0;  ///< sqrt(p̂(1-p̂)/n)
  double wilson_low = 0;
  double wilson_high = 0;
  std::optional<Probability> bound;
  std::string bound_name;  ///< which formula, or why none applies
};

/// Wilson score interval at z = 1.96.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                          double z = 1.959963984540054);

/// |p̂ - p| <= 3 sqrt(p(1-p)/n).
bool within_three_sigma(std::uint64_t successes, std::uint64_t trials, double p);

/// Theoretical success bound for this protocol and adversary class.
std::pair<std::optional<Probability>, std::string> theoretical_bound(const Protocol& protocol,
                                                                    bool restricted,
                                                                    std::uint64_t M);

/// `config.trials` independent experiments; trial t uses seed
/// derive_seed(config.seed, t) and its own adversary instance.
EstimateReport monte_carlo(const Protocol& protocol, const AdversarySpec& spec,
                           const ExperimentConfig& config);

struct CompositionRow {
  unsigned r = 0;
  EstimateReport estimate;
  double predicted = 0;  ///< p̂(1)^r
  double tolerance = 0;  ///< 3 sigma, combined
  bool within = false;
};

struct CompositionReport {
  EstimateReport single_round;
  std::vector<CompositionRow> rows;
  bool passed() const;
};

/// Checks p̂(r) ≈ p̂(1)^r for each r. Throws ContractError if the adversary
/// does not declare itself uniform.
CompositionReport check_uniform_composition(const Protocol& protocol, const AdversarySpec& spec,
                                            const ExperimentConfig& config,
                                            const std::vector<unsigned>& r_list);

nlohmann::ordered_json to_json(const EstimateReport& report);

}  // namespace posedb
