#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "posedb/graph.hpp"
#include "posedb/oracle.hpp"

namespace posedb {

/// Domain tag that prefixes every node encoding inside a pre-label.
inline constexpr std::uint8_t kNodeTag = 0x4e;
/// Bytes of the node encoding: tag + 8-byte big-endian index.
inline constexpr std::size_t kNodeEncodingBytes = 9;

/// ℓ⁻(v) = encode(v) || l(v_1) || ... || l(v_d).
Bytes pre_label(NodeId v, std::span<const Label* const> preds);

/// Node index recovered from a pre-label, if the prefix is well formed.
std::optional<std::uint64_t> decode_node(std::span<const std::uint8_t> pre_label);

/// One oracle call: h(ℓ⁻(v)). `preds` must follow g.preds(v) order.
Label label_node(HashOracle& oracle, const Dag& g, NodeId v, std::span<const Label* const> preds);

/// Labels every node in one topological sweep (|V| oracle calls).
std::vector<Label> label_all_reference(HashOracle& oracle, const Dag& g);

/// Labels only the ancestors of `roots`; other entries stay empty.
std::vector<Label> label_ancestors_reference(HashOracle& oracle, const Dag& g,
                                             std::span<const NodeId> roots);

/// Label memory of a constrained prover. Every read must hit a label that
/// was written and not yet evicted; the peak number of held labels is the
/// measured memory.
class LabelStore {
 public:
  explicit LabelStore(std::size_t node_count) : slots_(node_count) {}

  void put(NodeId v, Label label);
  const Label& get(NodeId v) const;
  void evict(NodeId v);
  bool holds(NodeId v) const { return v < slots_.size() && slots_[v].has_value(); }

  std::size_t words_now() const { return now_; }
  std::size_t words_peak() const { return peak_; }

 private:
  std::vector<std::optional<Label>> slots_;
  std::size_t now_ = 0;
  std::size_t peak_ = 0;
};

struct LabelingResult {
  std::vector<Label> output_labels;  ///< in target order
  std::size_t words_peak = 0;
  std::uint64_t oracle_calls = 0;
};

enum class InplaceTarget { base, base_rs, outputs };

/// Constant extra label words the in-place schedule needs on top of the
/// target set: the two halves of a butterfly pair in flight.
inline constexpr std::size_t kInplaceOverheadWords = 2;

/// In-place labelling of `targets`.
///
/// Sweeps the ancestors of `targets` in node order (which, for graphs from
/// this library, is the in-place schedule), charging each label to a
/// LabelStore and evicting it right after its last consumer unless it is a
/// target. Throws ScheduleError for graphs without an in-place schedule.
LabelingResult label_inplace(HashOracle& oracle, const Dag& g, std::span<const NodeId> targets);

/// Convenience selecting Base(G), Base(RS(G)) or O(G) of a recursive graph.
LabelingResult label_inplace(HashOracle& oracle, const RecursiveGraph& g, InplaceTarget target);

}  // namespace posedb
