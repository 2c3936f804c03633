#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace posedb {

/// Dense node index. Every edge (u, v) satisfies u < v.
using NodeId = std::uint32_t;

enum class GraphFamily : std::uint8_t {
  custom,
  butterfly,
  recursive,
  subgraph,
  lightweight,
  arbitrary,
  disjoint_union,
};

std::string to_string(GraphFamily family);

/// Immutable DAG in compressed predecessor form.
///
/// Predecessor lists keep construction order: labels hash their predecessors
/// in exactly this order. `outputs` is O(G); `base` is Base(G) and is empty
/// for graphs without a base.
class Dag {
 public:
  Dag() = default;

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return pred_data_.size(); }
  bool empty() const { return node_count() == 0; }

  std::span<const NodeId> preds(NodeId v) const {
    return {pred_data_.data() + offsets_[v], pred_data_.data() + offsets_[v + 1]};
  }
  const std::vector<NodeId>& outputs() const { return outputs_; }
  const std::vector<NodeId>& base() const { return base_; }

  /// Nodes without predecessors, ascending.
  std::vector<NodeId> inputs() const;
  std::vector<std::vector<NodeId>> successors() const;
  unsigned max_in_degree() const;

  GraphFamily family() const { return family_; }

  /// True when node order is a valid in-place labelling schedule, i.e. the
  /// graph came from one of this library's constructors.
  bool has_inplace_schedule() const { return inplace_; }

  /// Same graph with a different (validated) output list, optionally
  /// re-tagged with another family.
  Dag with_outputs(std::vector<NodeId> outputs,
                   std::optional<GraphFamily> family = std::nullopt) const;

 private:
  friend class DagBuilder;

  std::vector<std::uint32_t> offsets_{0};
  std::vector<NodeId> pred_data_;
  std::vector<NodeId> outputs_;
  std::vector<NodeId> base_;
  GraphFamily family_ = GraphFamily::custom;
  bool inplace_ = false;
};

/// Appends nodes in topological order and validates every invariant on build.
class DagBuilder {
 public:
  DagBuilder() = default;

  /// Throws StructureError if a predecessor is not an earlier node or repeats.
  NodeId add_node(std::span<const NodeId> preds);
  NodeId add_node(std::initializer_list<NodeId> preds) {
    return add_node(std::span<const NodeId>(preds.begin(), preds.size()));
  }

  std::size_t size() const { return dag_.node_count(); }

  Dag build(std::vector<NodeId> outputs, std::vector<NodeId> base = {},
            GraphFamily family = GraphFamily::custom, bool inplace_schedule = false) &&;

 private:
  Dag dag_;
};

// ---------------------------------------------------------------------------
// Structural tags
// ---------------------------------------------------------------------------

enum class Role : std::uint8_t {
  base,       ///< a G_0 node; member of Base(G_n)
  connector,  ///< node of a CS(.) butterfly
  gadget,     ///< node of a butterfly added by the ▷ operator
};

/// Which component of the recursive construction a node belongs to.
///
/// `path` holds `depth` LS/RS choices, most significant first (0 = LS,
/// 1 = RS), naming the sub-graph G_k that owns the node. Base nodes carry
/// their full address (depth = n).
struct NodeTag {
  Role role = Role::base;
  std::uint8_t depth = 0;
  std::uint32_t path = 0;
  std::uint32_t copy = 0;       ///< butterfly copy id (connector and gadget nodes)
  std::uint16_t layer = 0;      ///< butterfly layer
  std::uint32_t rail = 0;       ///< butterfly rail
  std::uint32_t component = 0;  ///< which operand of a disjoint union
};

/// "LRL"-style rendering of a tag's path; empty for the root.
std::string path_string(const NodeTag& tag);

struct ComponentMap {
  std::vector<NodeTag> tags;  ///< one per node
};

struct TaggedGraph {
  Dag dag;
  ComponentMap map;
};

/// G_n together with its order n.
struct RecursiveGraph {
  Dag dag;
  ComponentMap map;
  unsigned order = 0;
};

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// The 2^i-connector H_i: a butterfly on 2^i rails, a straight layer, and a
/// reversed butterfly (2(i+1) layers). Inputs have no predecessors; outputs
/// are the last layer in rail order.
Dag build_butterfly(unsigned i);

/// G_n of the recursive depth-robust family. O(G_n) is Base(RS(G_n)) for
/// n >= 1 and Base(G_0) for n = 0. Node order is the in-place schedule.
RecursiveGraph build_g(unsigned n);

/// Base(RS(G_n)) in base order. Throws StructureError for n = 0.
std::vector<NodeId> base_rs(const Dag& g, const ComponentMap& map);

/// Ancestor-closed subgraph of `g` spanning the first i outputs of g
/// (Q_i when g is the 16-output member). Requires 1 <= i <= |O(g)|.
TaggedGraph build_q(unsigned i, const RecursiveGraph& g);

/// G'_m: for m = 16k + i, Q_i followed by k copies of the 16-output recursive
/// graph. O lists the copies' outputs in copy order, then O(Q_i).
TaggedGraph build_lightweight(std::uint64_t m);

/// Two copies C2, C1 of G_{n+1} for the smallest n with 2^{n+1} >= m, labelled
/// C2 first. O = O(C1) followed by the first m - 2^n outputs of C2.
TaggedGraph build_arbitrary(std::uint64_t m);

/// Node indices of g2 are shifted by |V(g1)|; outputs and base concatenate.
Dag disjoint_union(const Dag& g1, const Dag& g2);
TaggedGraph disjoint_union(const TaggedGraph& g1, const TaggedGraph& g2);

// ---------------------------------------------------------------------------
// Family constants and closed forms
// ---------------------------------------------------------------------------

/// Order of the recursive graph used by the lightweight family (16 outputs).
inline constexpr unsigned kLightweightOrder = 5;
/// Outputs per lightweight block and its depth-robustness parameter.
inline constexpr unsigned kLightweightBlock = 16;

/// Smallest n with 2^{n+1} >= m.
unsigned arbitrary_order(std::uint64_t m);

/// Depth parameter γ of build_arbitrary(m): 2^n.
std::uint64_t arbitrary_gamma(std::uint64_t m);

/// 2(i+1)2^i.
std::uint64_t butterfly_node_count(unsigned i);

/// |build_g(n)| from the construction recurrence, without building.
std::uint64_t recursive_node_count(unsigned n);
/// Closed form (k^2+k+3)2^{k+1} - 2 for the graph with 2^k outputs,
/// which is build_g(k + 1); equals recursive_node_count(k + 1).
/// G_k has 2^k outputs; equals recursive_node_count(k + 1).
std::uint64_t indexed_node_count_closed_form(unsigned k);

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

/// Length (in edges) of the longest path ending in each node of g \ removed;
/// -1 for removed nodes. One sweep in index order.
std::vector<int> llp_all(const Dag& g, const std::vector<bool>& removed);

/// Longest path ending in v within g \ removed. Throws ParameterError if v is
/// removed.
int llp(const Dag& g, NodeId v, std::span<const NodeId> removed = {});

/// Ancestors of `roots` (roots included) as a membership mask.
std::vector<bool> ancestor_mask(const Dag& g, std::span<const NodeId> roots);

}  // namespace posedb
