#include "posedb/adversary.hpp"

#include <algorithm>
#include <vector>

#include "posedb/errors.hpp"

namespace posedb {

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::honest: return "honest";
    case AdversaryKind::dropper: return "dropper";
    case AdversaryKind::recomputer: return "recomputer";
    case AdversaryKind::truncator: return "truncator";
  }
  return "?";
}

AdversaryKind parse_adversary(const std::string& name) {
  for (AdversaryKind k : {AdversaryKind::honest, AdversaryKind::dropper, AdversaryKind::recomputer,
                          AdversaryKind::truncator}) {
    if (to_string(k) == name) return k;
  }
  throw ParameterError("unknown adversary '" + name + "'");
}

namespace {

Label abstain(const Protocol& p) { return Label::zero(p.params().w); }

Label block(const Protocol& p, std::span<const std::uint8_t> sigma, std::uint64_t i) {
  const std::size_t wb = p.word_bytes();
  const auto b = sigma.subspan(i * wb, wb);
  return Label(Bytes(b.begin(), b.end()));
}

/// Caches A0's output per Υ; every adversary here is uniform.
class CachingAdversary : public Adversary {
 public:
  bool uniform() const override { return true; }

  Bytes precompute(const Protocol& p, const Bytes& upsilon,
                   std::span<const std::uint64_t>) override {
    if (!cached_upsilon_ || *cached_upsilon_ != upsilon) {
      cached_state_ = compute_state(p, upsilon);
      cached_upsilon_ = upsilon;
    }
    return cached_state_;
  }

 protected:
  virtual Bytes compute_state(const Protocol& p, const Bytes& upsilon) = 0;

 private:
  std::optional<Bytes> cached_upsilon_;
  Bytes cached_state_;
};

class Honest final : public CachingAdversary {
 public:
  AdversaryKind kind() const override { return AdversaryKind::honest; }
  bool graph_restricted() const override { return true; }

  Label respond(const Protocol& p, std::span<const std::uint8_t> sigma, std::uint64_t x,
                HashOracle*) const override {
    return p.resp(sigma, x);
  }

 protected:
  Bytes compute_state(const Protocol& p, const Bytes& upsilon) override {
    return p.precmp(upsilon).sigma;
  }
};

/// Keeps the labels of the first ⌊M/w⌋ outputs, in output order.
class Dropper : public CachingAdversary {
 public:
  explicit Dropper(std::uint64_t M) : M_(M) {}

  AdversaryKind kind() const override { return AdversaryKind::dropper; }
  bool graph_restricted() const override { return true; }

  Label respond(const Protocol& p, std::span<const std::uint8_t> sigma, std::uint64_t x,
                HashOracle*) const override {
    if (x < kept(p, sigma)) return block(p, sigma, x);
    return abstain(p);
  }

 protected:
  static std::uint64_t kept(const Protocol& p, std::span<const std::uint8_t> sigma) {
    return sigma.size() / p.word_bytes();
  }

  Bytes compute_state(const Protocol& p, const Bytes& upsilon) override {
    if (!p.graph()) throw ParameterError(to_string(kind()) + " needs a graph variant");
    const Dag& g = *p.graph();
    const std::uint64_t k = std::min<std::uint64_t>(M_ / p.params().w, p.params().m);
    Bytes sigma;
    if (k == 0) return sigma;
    auto h = p.oracle_for(upsilon);
    const std::span<const NodeId> targets(g.outputs().data(), k);
    for (const Label& l : label_inplace(h, g, targets).output_labels) {
      sigma.insert(sigma.end(), l.bytes().begin(), l.bytes().end());
    }
    return sigma;
  }

 private:
  std::uint64_t M_;
};

/// Dropper that, on a miss, recomputes the challenged label from the kept
/// ones, one query per missing ancestor, until the budget runs out.
class Recomputer final : public Dropper {
 public:
  using Dropper::Dropper;

  AdversaryKind kind() const override { return AdversaryKind::recomputer; }

  Label respond(const Protocol& p, std::span<const std::uint8_t> sigma, std::uint64_t x,
                HashOracle* oracle) const override {
    const std::uint64_t k = kept(p, sigma);
    if (x < k) return block(p, sigma, x);
    if (!oracle) return abstain(p);
    const Dag& g = *p.graph();

    std::vector<Label> labels(g.node_count());
    std::vector<bool> known(g.node_count(), false);
    for (std::uint64_t i = 0; i < k; ++i) {
      const NodeId o = g.outputs()[i];
      labels[o] = block(p, sigma, i);
      known[o] = true;
    }
    // Missing ancestors of the target, not looking behind known labels.
    const NodeId target = p.challenge_node(x);
    std::vector<bool> needed(g.node_count(), false);
    needed[target] = true;
    for (NodeId v = target + 1; v-- > 0;) {
      if (!needed[v] || known[v]) continue;
      for (NodeId u : g.preds(v)) needed[u] = true;
    }
    try {
      std::vector<const Label*> preds;
      for (NodeId v = 0; v <= target; ++v) {
        if (!needed[v] || known[v]) continue;
        preds.clear();
        for (NodeId u : g.preds(v)) preds.push_back(&labels[u]);
        labels[v] = label_node(*oracle, g, v, preds);
        known[v] = true;
      }
    } catch (const BudgetExhausted&) {
      return abstain(p);
    }
    return labels[target];
  }
};

/// Unconditional variant: keeps the first ⌊M/w⌋ blocks of ψ.
class Truncator final : public CachingAdversary {
 public:
  explicit Truncator(std::uint64_t M) : M_(M) {}

  AdversaryKind kind() const override { return AdversaryKind::truncator; }
  bool graph_restricted() const override { return false; }

  Label respond(const Protocol& p, std::span<const std::uint8_t> sigma, std::uint64_t x,
                HashOracle*) const override {
    if (x < sigma.size() / p.word_bytes()) return block(p, sigma, x);
    return abstain(p);
  }

 protected:
  Bytes compute_state(const Protocol& p, const Bytes& upsilon) override {
    if (p.params().variant != Variant::unconditional) {
      throw ParameterError("truncator needs the unconditional variant");
    }
    const std::uint64_t k = std::min<std::uint64_t>(M_ / p.params().w, p.params().m);
    return Bytes(upsilon.begin(), upsilon.begin() + static_cast<std::ptrdiff_t>(k * p.word_bytes()));
  }

 private:
  std::uint64_t M_;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec) {
  switch (spec.kind) {
    case AdversaryKind::honest: return std::make_unique<Honest>();
    case AdversaryKind::dropper: return std::make_unique<Dropper>(spec.M);
    case AdversaryKind::recomputer: return std::make_unique<Recomputer>(spec.M);
    case AdversaryKind::truncator: return std::make_unique<Truncator>(spec.M);
  }
  throw ParameterError("unknown adversary kind");
}

}  // namespace posedb
