#include "posedb/labeling.hpp"

#include <algorithm>

#include "posedb/errors.hpp"

namespace posedb {

Bytes pre_label(NodeId v, std::span<const Label* const> preds) {
  std::size_t size = kNodeEncodingBytes;
  for (const Label* l : preds) size += l->bytes().size();
  Bytes out;
  out.reserve(size);
  out.push_back(kNodeTag);
  const std::uint64_t index = v;
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((index >> shift) & 0xff));
  }
  for (const Label* l : preds) out.insert(out.end(), l->bytes().begin(), l->bytes().end());
  return out;
}

std::optional<std::uint64_t> decode_node(std::span<const std::uint8_t> pre_label) {
  if (pre_label.size() < kNodeEncodingBytes || pre_label[0] != kNodeTag) return std::nullopt;
  std::uint64_t index = 0;
  for (std::size_t i = 1; i < kNodeEncodingBytes; ++i) index = (index << 8) | pre_label[i];
  return index;
}

Label label_node(HashOracle& oracle, const Dag& g, NodeId v, std::span<const Label* const> preds) {
  if (preds.size() != g.preds(v).size()) {
    throw ParameterError("label_node: expected " + std::to_string(g.preds(v).size()) +
                         " predecessor labels for node " + std::to_string(v));
  }
  return oracle.query(pre_label(v, preds));
}

namespace {

std::vector<Label> label_masked(HashOracle& oracle, const Dag& g, const std::vector<bool>* mask) {
  std::vector<Label> labels(g.node_count());
  std::vector<const Label*> preds;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (mask && !(*mask)[v]) continue;
    preds.clear();
    for (NodeId p : g.preds(v)) preds.push_back(&labels[p]);
    labels[v] = label_node(oracle, g, v, preds);
  }
  return labels;
}

}  // namespace

std::vector<Label> label_all_reference(HashOracle& oracle, const Dag& g) {
  return label_masked(oracle, g, nullptr);
}

std::vector<Label> label_ancestors_reference(HashOracle& oracle, const Dag& g,
                                             std::span<const NodeId> roots) {
  const auto mask = ancestor_mask(g, roots);
  return label_masked(oracle, g, &mask);
}

void LabelStore::put(NodeId v, Label label) {
  if (v >= slots_.size()) throw MeterViolation("label store: node out of range");
  if (slots_[v]) throw MeterViolation("label store: node " + std::to_string(v) + " already held");
  slots_[v] = std::move(label);
  peak_ = std::max(peak_, ++now_);
}

const Label& LabelStore::get(NodeId v) const {
  if (!holds(v)) {
    throw MeterViolation("label store: read of node " + std::to_string(v) +
                         " which is not held");
  }
  return *slots_[v];
}

void LabelStore::evict(NodeId v) {
  if (!holds(v)) throw MeterViolation("label store: evicting node that is not held");
  slots_[v].reset();
  --now_;
}

LabelingResult label_inplace(HashOracle& oracle, const Dag& g, std::span<const NodeId> targets) {
  if (!g.has_inplace_schedule()) {
    throw ScheduleError("no in-place schedule for a graph of family '" + to_string(g.family()) +
                        "'");
  }
  const std::size_t n = g.node_count();
  const auto needed = ancestor_mask(g, targets);
  std::vector<bool> is_target(n, false);
  for (NodeId t : targets) is_target[t] = true;

  // Last consumer of each needed label among needed nodes.
  std::vector<NodeId> last_use(n);
  for (NodeId v = 0; v < n; ++v) last_use[v] = v;
  for (NodeId v = 0; v < n; ++v) {
    if (!needed[v]) continue;
    for (NodeId p : g.preds(v)) last_use[p] = std::max(last_use[p], v);
  }

  const std::uint64_t calls_before = oracle.calls_made();
  LabelStore store(n);
  std::vector<const Label*> preds;
  for (NodeId v = 0; v < n; ++v) {
    if (!needed[v]) continue;
    preds.clear();
    for (NodeId p : g.preds(v)) preds.push_back(&store.get(p));
    store.put(v, label_node(oracle, g, v, preds));
    for (NodeId p : g.preds(v)) {
      if (last_use[p] == v && !is_target[p]) store.evict(p);
    }
    if (last_use[v] == v && !is_target[v]) store.evict(v);
  }

  LabelingResult result;
  result.output_labels.reserve(targets.size());
  for (NodeId t : targets) result.output_labels.push_back(store.get(t));
  result.words_peak = store.words_peak();
  result.oracle_calls = oracle.calls_made() - calls_before;
  return result;
}

LabelingResult label_inplace(HashOracle& oracle, const RecursiveGraph& g, InplaceTarget target) {
  switch (target) {
    case InplaceTarget::base:
      return label_inplace(oracle, g.dag, g.dag.base());
    case InplaceTarget::base_rs: {
      const auto rs = base_rs(g.dag, g.map);
      return label_inplace(oracle, g.dag, rs);
    }
    case InplaceTarget::outputs:
      return label_inplace(oracle, g.dag, g.dag.outputs());
  }
  throw ParameterError("unknown in-place target");
}

}  // namespace posedb
