#include "posedb/protocol.hpp"

#include <algorithm>

#include "posedb/errors.hpp"

namespace posedb {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::unconditional: return "unconditional";
    case Variant::graph: return "graph";
    case Variant::graph_pow2: return "graph-pow2";
    case Variant::lightweight: return "lightweight";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::unconditional, Variant::graph, Variant::graph_pow2,
                    Variant::lightweight}) {
    if (to_string(v) == name) return v;
  }
  throw ParameterError("unknown protocol variant '" + name + "'");
}

bool is_graph_variant(Variant v) { return v != Variant::unconditional; }

namespace {

unsigned exact_log2(std::uint64_t m) {
  if (m == 0 || (m & (m - 1)) != 0) {
    throw ParameterError("graph-pow2 needs m to be a power of two, got " + std::to_string(m));
  }
  unsigned n = 0;
  while ((1ull << n) < m) ++n;
  return n;
}

}  // namespace

Protocol Protocol::setup(const ProtocolParams& params) {
  if (params.m < 1) throw ParameterError("m must be at least 1");
  if (params.r < 1) throw ParameterError("r must be at least 1");
  OracleKey{{}, params.w}.validate();

  Protocol p;
  p.params_ = params;
  switch (params.variant) {
    case Variant::unconditional:
      p.rho_.param_space = "{0,1}^" + std::to_string(params.m * params.w);
      return p;
    case Variant::graph:
      p.rho_.graph = std::make_shared<const TaggedGraph>(build_arbitrary(params.m));
      p.rho_.gamma = arbitrary_gamma(params.m);
      break;
    case Variant::graph_pow2: {
      auto g = build_g(exact_log2(params.m) + 1);
      p.rho_.graph =
          std::make_shared<const TaggedGraph>(TaggedGraph{std::move(g.dag), std::move(g.map)});
      p.rho_.gamma = params.m;
      break;
    }
    case Variant::lightweight:
      p.rho_.graph = std::make_shared<const TaggedGraph>(build_lightweight(params.m));
      p.rho_.gamma = kLightweightBlock;
      break;
  }
  p.rho_.param_space = "H";
  if (params.q >= p.rho_.gamma) {
    throw ParameterError("oracle budget q = " + std::to_string(params.q) +
                         " must be below gamma = " + std::to_string(p.rho_.gamma));
  }
  return p;
}

Bytes Protocol::sample_upsilon(Rng& rng) const {
  if (params_.variant == Variant::unconditional) return rng.bytes(params_.m * word_bytes());
  return rng.bytes(kSessionSeedBytes);
}

HashOracle Protocol::oracle_for(const Bytes& upsilon, std::optional<std::uint64_t> budget) const {
  return HashOracle(upsilon, params_.w, budget);
}

PrecmpResult Protocol::precmp(const Bytes& upsilon) const {
  PrecmpResult out;
  if (params_.variant == Variant::unconditional) {
    if (upsilon.size() != params_.m * word_bytes()) throw ProtocolError("psi has the wrong length");
    out.sigma = upsilon;
    return out;
  }
  auto h = oracle_for(upsilon);
  const Dag& g = rho_.graph->dag;
  auto labelled = label_inplace(h, g, g.outputs());
  out.sigma.reserve(params_.m * word_bytes());
  for (const Label& l : labelled.output_labels) {
    out.sigma.insert(out.sigma.end(), l.bytes().begin(), l.bytes().end());
  }
  out.oracle_calls = labelled.oracle_calls;
  out.words_peak = labelled.words_peak;
  return out;
}

NodeId Protocol::challenge_node(std::uint64_t x) const {
  if (!rho_.graph) throw ProtocolError("the unconditional variant has no graph");
  return rho_.graph->dag.outputs().at(x);
}

Label Protocol::resp(std::span<const std::uint8_t> sigma, std::uint64_t x) const {
  const std::size_t wb = word_bytes();
  if (sigma.size() != params_.m * wb) {
    throw ProtocolError("sigma holds " + std::to_string(sigma.size()) + " bytes, expected " +
                        std::to_string(params_.m * wb));
  }
  if (x >= params_.m) throw ProtocolError("challenge out of range");
  const auto block = sigma.subspan(x * wb, wb);
  return Label(Bytes(block.begin(), block.end()));
}

Verifier Protocol::verifier(const Bytes& upsilon) const {
  Verifier v;
  const std::size_t wb = word_bytes();
  if (params_.variant == Variant::unconditional) {
    if (upsilon.size() != params_.m * wb) throw ProtocolError("psi has the wrong length");
    for (std::uint64_t i = 0; i < params_.m; ++i) {
      v.expected_.emplace_back(Bytes(upsilon.begin() + static_cast<std::ptrdiff_t>(i * wb),
                                     upsilon.begin() + static_cast<std::ptrdiff_t>((i + 1) * wb)));
    }
    return v;
  }
  const Dag& g = rho_.graph->dag;
  auto h = oracle_for(upsilon);
  v.graph_ = &g;
  v.node_labels_ = label_all_reference(h, g);
  v.reference_calls_ = h.calls_made();
  for (NodeId o : g.outputs()) v.expected_.push_back(v.node_labels_[o]);
  return v;
}

bool Verifier::is_valid_pre_label(std::span<const std::uint8_t> input) const {
  if (!graph_) return false;
  const auto v = decode_node(input);
  if (!v || *v >= graph_->node_count()) return false;
  const auto node = static_cast<NodeId>(*v);
  std::vector<const Label*> preds;
  for (NodeId p : graph_->preds(node)) preds.push_back(&node_labels_[p]);
  const Bytes expected = pre_label(node, preds);
  return std::equal(input.begin(), input.end(), expected.begin(), expected.end());
}

Protocol Protocol::with_rounds(unsigned r) const {
  if (r < 1) throw ParameterError("r must be at least 1");
  Protocol p = *this;
  p.params_.r = r;
  return p;
}

}  // namespace posedb
