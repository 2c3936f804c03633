#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "posedb/oracle.hpp"
#include "posedb/protocol.hpp"

namespace posedb {

enum class AdversaryKind { honest, dropper, recomputer, truncator };

std::string to_string(AdversaryKind kind);
AdversaryKind parse_adversary(const std::string& name);

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::honest;
  std::uint64_t M = 0;  ///< bits of state the adversary aims to keep
};

/// A pair (A0, A1).
///
/// A0 is unbounded and sees Υ, ρ and the challenges of earlier rounds. A1
/// sees only ρ, the state handed over by A0, the challenge, and an oracle
/// carrying the round's budget (null for the unconditional variant). A1 is
/// const so that nothing flows between rounds except σ.
class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual AdversaryKind kind() const = 0;
  /// Declares that σ_i is the same in every round.
  virtual bool uniform() const = 0;
  /// Declares that every oracle query is a valid pre-label and that the
  /// adversary never guesses.
  virtual bool graph_restricted() const = 0;

  virtual Bytes precompute(const Protocol& p, const Bytes& upsilon,
                           std::span<const std::uint64_t> history) = 0;
  virtual Label respond(const Protocol& p, std::span<const std::uint8_t> sigma, std::uint64_t x,
                        HashOracle* oracle) const = 0;
};

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec);

}  // namespace posedb
