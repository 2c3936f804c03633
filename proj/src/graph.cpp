#include "posedb/graph.hpp"

#include <algorithm>
#include <string>

#include "posedb/errors.hpp"

namespace posedb {

std::string to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::custom: return "custom";
    case GraphFamily::butterfly: return "butterfly";
    case GraphFamily::recursive: return "recursive";
    case GraphFamily::subgraph: return "subgraph";
    case GraphFamily::lightweight: return "lightweight";
    case GraphFamily::arbitrary: return "arbitrary";
    case GraphFamily::disjoint_union: return "disjoint-union";
  }
  return "unknown";
}

namespace {

void check_node_list(const std::vector<NodeId>& nodes, std::size_t node_count, const char* what) {
  std::vector<bool> seen(node_count, false);
  for (NodeId v : nodes) {
    if (v >= node_count) {
      throw StructureError(std::string(what) + " refers to node " + std::to_string(v) +
                           " outside the graph");
    }
    if (seen[v]) {
      throw StructureError(std::string(what) + " lists node " + std::to_string(v) + " twice");
    }
    seen[v] = true;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Dag / DagBuilder
// ---------------------------------------------------------------------------

std::vector<NodeId> Dag::inputs() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < node_count(); ++v) {
    if (preds(v).empty()) out.push_back(v);
  }
  return out;
}

std::vector<std::vector<NodeId>> Dag::successors() const {
  std::vector<std::vector<NodeId>> succ(node_count());
  for (NodeId v = 0; v < node_count(); ++v) {
    for (NodeId p : preds(v)) succ[p].push_back(v);
  }
  return succ;
}

unsigned Dag::max_in_degree() const {
  unsigned best = 0;
  for (NodeId v = 0; v < node_count(); ++v) {
    best = std::max(best, static_cast<unsigned>(preds(v).size()));
  }
  return best;
}

Dag Dag::with_outputs(std::vector<NodeId> outputs, std::optional<GraphFamily> family) const {
  check_node_list(outputs, node_count(), "output list");
  Dag copy = *this;
  copy.outputs_ = std::move(outputs);
  if (family) copy.family_ = *family;
  return copy;
}

NodeId DagBuilder::add_node(std::span<const NodeId> preds) {
  const auto id = static_cast<NodeId>(dag_.node_count());
  for (std::size_t a = 0; a < preds.size(); ++a) {
    if (preds[a] >= id) {
      throw StructureError("predecessor " + std::to_string(preds[a]) + " of node " +
                           std::to_string(id) + " breaks topological numbering");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (preds[a] == preds[b]) {
        throw StructureError("duplicate predecessor " + std::to_string(preds[a]) + " of node " +
                             std::to_string(id));
      }
    }
  }
  dag_.pred_data_.insert(dag_.pred_data_.end(), preds.begin(), preds.end());
  dag_.offsets_.push_back(static_cast<std::uint32_t>(dag_.pred_data_.size()));
  return id;
}

Dag DagBuilder::build(std::vector<NodeId> outputs, std::vector<NodeId> base, GraphFamily family,
                      bool inplace_schedule) && {
  check_node_list(outputs, dag_.node_count(), "output list");
  check_node_list(base, dag_.node_count(), "base list");
  dag_.outputs_ = std::move(outputs);
  dag_.base_ = std::move(base);
  dag_.family_ = family;
  dag_.inplace_ = inplace_schedule;
  return std::move(dag_);
}

std::string path_string(const NodeTag& tag) {
  std::string out;
  for (int i = tag.depth - 1; i >= 0; --i) out.push_back(((tag.path >> i) & 1U) ? 'R' : 'L');
  return out;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace {

class Builder {
 public:
  NodeId add(std::span<const NodeId> preds, NodeTag tag) {
    const NodeId v = builder_.add_node(preds);
    tags_.push_back(tag);
    return v;
  }

  /// Emits a butterfly connector on 2^i rails. Input rail j receives
  /// predecessors first[j] and, when given, second[j]. Layers after the first
  /// are emitted pairwise so that node order is an in-place schedule.
  std::vector<NodeId> butterfly(unsigned i, std::span<const NodeId> first,
                                std::span<const NodeId> second, Role role, std::uint8_t depth,
                                std::uint32_t path) {
    const std::uint32_t rails = 1U << i;
    const std::uint32_t copy = next_copy_++;
    auto tag = [&](std::uint16_t layer, std::uint32_t rail) {
      NodeTag t;
      t.role = role;
      t.depth = depth;
      t.path = path;
      t.copy = copy;
      t.layer = layer;
      t.rail = rail;
      return t;
    };

    std::vector<NodeId> cur(rails);
    for (std::uint32_t x = 0; x < rails; ++x) {
      NodeId preds[2];
      std::size_t d = 0;
      if (!first.empty()) preds[d++] = first[x];
      if (!second.empty()) preds[d++] = second[x];
      cur[x] = add({preds, d}, tag(0, x));
    }

    const unsigned transitions = 2 * i + 1;
    std::vector<NodeId> next(rails);
    for (unsigned t = 1; t <= transitions; ++t) {
      const auto layer = static_cast<std::uint16_t>(t);
      if (t == i + 1) {
        for (std::uint32_t x = 0; x < rails; ++x) {
          const NodeId p[1] = {cur[x]};
          next[x] = add(p, tag(layer, x));
        }
      } else {
        const unsigned bit_index = t <= i ? t - 1 : transitions - t;
        const std::uint32_t bit = 1U << bit_index;
        for (std::uint32_t x = 0; x < rails; ++x) {
          if (x & bit) continue;
          const std::uint32_t y = x | bit;
          const NodeId px[2] = {cur[x], cur[y]};
          const NodeId py[2] = {cur[y], cur[x]};
          next[x] = add(px, tag(layer, x));
          next[y] = add(py, tag(layer, y));
        }
      }
      std::swap(cur, next);
    }
    return cur;
  }

  /// G_k with no external inputs; returns Base(G_k).
  std::vector<NodeId> standalone(unsigned k, std::uint8_t depth, std::uint32_t path) {
    if (k == 0) {
      NodeTag t;
      t.depth = depth;
      t.path = path;
      return {add({}, t)};
    }
    auto left = standalone(k - 1, depth + 1, path << 1);
    const auto out = butterfly(k - 1, left, {}, Role::connector, depth, path);
    const auto right = attached(k - 1, depth + 1, (path << 1) | 1U, out);
    left.insert(left.end(), right.begin(), right.end());
    return left;
  }

  /// G_k receiving x ▷ G_k (|x| = 2^k); returns Base(G_k).
  std::vector<NodeId> attached(unsigned k, std::uint8_t depth, std::uint32_t path,
                               std::span<const NodeId> x) {
    if (k == 0) {
      NodeTag t;
      t.depth = depth;
      t.path = path;
      return {add(x.first(1), t)};
    }
    const std::size_t half = x.size() / 2;
    auto left = attached(k - 1, depth + 1, path << 1, x.first(half));
    const auto gadget_out = butterfly(k - 1, x.subspan(half), {}, Role::gadget, depth, path);
    const auto out = butterfly(k - 1, left, gadget_out, Role::connector, depth, path);
    const auto right = attached(k - 1, depth + 1, (path << 1) | 1U, out);
    left.insert(left.end(), right.begin(), right.end());
    return left;
  }

  DagBuilder& dag_builder() { return builder_; }
  std::vector<NodeTag> take_tags() { return std::move(tags_); }

 private:
  DagBuilder builder_;
  std::vector<NodeTag> tags_;
  std::uint32_t next_copy_ = 0;
};

TaggedGraph recursive_as_tagged(const RecursiveGraph& g) { return {g.dag, g.map}; }

}  // namespace

Dag build_butterfly(unsigned i) {
  if (i > 24) throw ParameterError("butterfly order too large");
  Builder b;
  auto outputs = b.butterfly(i, {}, {}, Role::connector, 0, 0);
  return std::move(b.dag_builder()).build(std::move(outputs), {}, GraphFamily::butterfly, true);
}

RecursiveGraph build_g(unsigned n) {
  if (n > 24) throw ParameterError("recursive graph order too large");
  Builder b;
  auto base = b.standalone(n, 0, 0);
  std::vector<NodeId> outputs =
      n == 0 ? base : std::vector<NodeId>(base.begin() + static_cast<std::ptrdiff_t>(base.size() / 2),
                                          base.end());
  RecursiveGraph g;
  g.order = n;
  g.map.tags = b.take_tags();
  g.dag = std::move(b.dag_builder())
              .build(std::move(outputs), std::move(base), GraphFamily::recursive, true);
  return g;
}

std::vector<NodeId> base_rs(const Dag& g, const ComponentMap& map) {
  if (map.tags.size() != g.node_count()) {
    throw StructureError("component map does not match graph");
  }
  std::vector<NodeId> out;
  bool any_split = false;
  for (NodeId v : g.base()) {
    const NodeTag& t = map.tags[v];
    if (t.role != Role::base) throw StructureError("base list contains a non-base node");
    if (t.depth == 0) continue;
    any_split = true;
    if ((t.path >> (t.depth - 1)) & 1U) out.push_back(v);
  }
  if (!any_split) throw StructureError("Base(RS(G)) is undefined for G_0");
  return out;
}

TaggedGraph build_q(unsigned i, const RecursiveGraph& g) {
  const auto& outs = g.dag.outputs();
  if (i < 1 || i > outs.size()) {
    throw ParameterError("Q_i needs 1 <= i <= " + std::to_string(outs.size()) + ", got " +
                         std::to_string(i));
  }
  const std::span<const NodeId> roots(outs.data(), i);
  const auto keep = ancestor_mask(g.dag, roots);

  std::vector<NodeId> remap(g.dag.node_count(), 0);
  DagBuilder builder;
  TaggedGraph q;
  std::vector<NodeId> preds;
  for (NodeId v = 0; v < g.dag.node_count(); ++v) {
    if (!keep[v]) continue;
    preds.clear();
    for (NodeId p : g.dag.preds(v)) preds.push_back(remap[p]);
    remap[v] = builder.add_node(preds);
    q.map.tags.push_back(g.map.tags[v]);
  }
  std::vector<NodeId> outputs;
  for (NodeId v : roots) outputs.push_back(remap[v]);
  std::vector<NodeId> base;
  for (NodeId v : g.dag.base()) {
    if (keep[v]) base.push_back(remap[v]);
  }
  q.dag = std::move(builder).build(std::move(outputs), std::move(base), GraphFamily::subgraph, true);
  return q;
}

Dag disjoint_union(const Dag& g1, const Dag& g2) {
  DagBuilder builder;
  std::vector<NodeId> preds;
  for (NodeId v = 0; v < g1.node_count(); ++v) builder.add_node(g1.preds(v));
  const auto shift = static_cast<NodeId>(g1.node_count());
  for (NodeId v = 0; v < g2.node_count(); ++v) {
    preds.clear();
    for (NodeId p : g2.preds(v)) preds.push_back(p + shift);
    builder.add_node(preds);
  }
  auto concat = [shift](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out = a;
    for (NodeId v : b) out.push_back(v + shift);
    return out;
  };
  const bool inplace =
      (g1.empty() || g1.has_inplace_schedule()) && (g2.empty() || g2.has_inplace_schedule());
  return std::move(builder).build(concat(g1.outputs(), g2.outputs()), concat(g1.base(), g2.base()),
                                  GraphFamily::disjoint_union, inplace);
}

TaggedGraph disjoint_union(const TaggedGraph& g1, const TaggedGraph& g2) {
  TaggedGraph out;
  out.dag = disjoint_union(g1.dag, g2.dag);
  out.map.tags = g1.map.tags;
  std::uint32_t offset = 0;
  for (const auto& t : g1.map.tags) offset = std::max(offset, t.component + 1);
  for (auto t : g2.map.tags) {
    t.component += offset;
    out.map.tags.push_back(t);
  }
  return out;
}

TaggedGraph build_lightweight(std::uint64_t m) {
  if (m < 1) throw ParameterError("lightweight graph needs m >= 1");
  const std::uint64_t copies = m / kLightweightBlock;
  const auto rest = static_cast<unsigned>(m % kLightweightBlock);
  const RecursiveGraph block = build_g(kLightweightOrder);

  TaggedGraph g;
  if (rest > 0) g = build_q(rest, block);
  for (std::uint64_t c = 0; c < copies; ++c) g = disjoint_union(g, recursive_as_tagged(block));

  // Q_i was laid out first so that it is labelled first; its outputs go last.
  std::vector<NodeId> outputs(g.dag.outputs().begin() + rest, g.dag.outputs().end());
  outputs.insert(outputs.end(), g.dag.outputs().begin(), g.dag.outputs().begin() + rest);
  g.dag = g.dag.with_outputs(std::move(outputs), GraphFamily::lightweight);
  return g;
}

unsigned arbitrary_order(std::uint64_t m) {
  if (m < 1) throw ParameterError("memory size m must be >= 1");
  unsigned n = 0;
  while ((std::uint64_t{1} << (n + 1)) < m) ++n;
  return n;
}

std::uint64_t arbitrary_gamma(std::uint64_t m) { return std::uint64_t{1} << arbitrary_order(m); }

TaggedGraph build_arbitrary(std::uint64_t m) {
  const unsigned n = arbitrary_order(m);
  const RecursiveGraph c = build_g(n + 1);
  const TaggedGraph copy = recursive_as_tagged(c);
  TaggedGraph g = disjoint_union(copy, copy);  // component 0 = C2, component 1 = C1

  const auto shift = static_cast<NodeId>(c.dag.node_count());
  std::vector<NodeId> outputs;
  for (NodeId v : c.dag.outputs()) outputs.push_back(v + shift);
  const std::uint64_t extra = m - (std::uint64_t{1} << n);
  for (std::uint64_t j = 0; j < extra; ++j) outputs.push_back(c.dag.outputs()[j]);
  g.dag = g.dag.with_outputs(std::move(outputs), GraphFamily::arbitrary);
  return g;
}

// ---------------------------------------------------------------------------
// Counts
// ---------------------------------------------------------------------------

std::uint64_t butterfly_node_count(unsigned i) {
  return 2 * (std::uint64_t{i} + 1) * (std::uint64_t{1} << i);
}

std::uint64_t recursive_node_count(unsigned n) {
  // standalone(k) = standalone(k-1) + H(k-1) + attached(k-1)
  // attached(k)   = 2 attached(k-1) + 2 H(k-1)
  std::uint64_t standalone = 1;
  std::uint64_t attached = 1;
  for (unsigned k = 1; k <= n; ++k) {
    const std::uint64_t h = butterfly_node_count(k - 1);
    standalone = standalone + h + attached;
    attached = 2 * attached + 2 * h;
  }
  return standalone;
}

std::uint64_t indexed_node_count_closed_form(unsigned k) {
  const std::uint64_t kk = k;
  return (kk * kk + kk + 3) * (std::uint64_t{1} << (k + 1)) - 2;
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

std::vector<int> llp_all(const Dag& g, const std::vector<bool>& removed) {
  if (removed.size() != g.node_count()) throw ParameterError("removal mask size mismatch");
  std::vector<int> depth(g.node_count(), -1);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (removed[v]) continue;
    int best = 0;
    for (NodeId p : g.preds(v)) {
      if (depth[p] >= 0) best = std::max(best, depth[p] + 1);
    }
    depth[v] = best;
  }
  return depth;
}

int llp(const Dag& g, NodeId v, std::span<const NodeId> removed) {
  if (v >= g.node_count()) throw ParameterError("node out of range");
  std::vector<bool> mask(g.node_count(), false);
  for (NodeId r : removed) {
    if (r >= g.node_count()) throw ParameterError("removed node out of range");
    mask[r] = true;
  }
  if (mask[v]) throw ParameterError("llp queried for a removed node");
  std::vector<int> depth(v + 1, -1);
  for (NodeId u = 0; u <= v; ++u) {
    if (mask[u]) continue;
    int best = 0;
    for (NodeId p : g.preds(u)) {
      if (depth[p] >= 0) best = std::max(best, depth[p] + 1);
    }
    depth[u] = best;
  }
  return depth[v];
}

std::vector<bool> ancestor_mask(const Dag& g, std::span<const NodeId> roots) {
  std::vector<bool> mask(g.node_count(), false);
  for (NodeId r : roots) {
    if (r >= g.node_count()) throw ParameterError("root out of range");
    mask[r] = true;
  }
  for (NodeId v = static_cast<NodeId>(g.node_count()); v-- > 0;) {
    if (!mask[v]) continue;
    for (NodeId p : g.preds(v)) mask[p] = true;
  }
  return mask;
}

}  // namespace posedb
