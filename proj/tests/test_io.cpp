#include <catch_amalgamated.hpp>

#include <algorithm>

#include "posedb/errors.hpp"
#include "posedb/io.hpp"
#include "posedb/labeling.hpp"

using namespace posedb;

namespace {

bool same_structure(const Dag& a, const Dag& b) {
  if (a.node_count() != b.node_count() || a.outputs() != b.outputs() || a.base() != b.base()) {
    return false;
  }
  for (NodeId v = 0; v < a.node_count(); ++v) {
    if (!std::equal(a.preds(v).begin(), a.preds(v).end(), b.preds(v).begin(), b.preds(v).end())) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("binary dump round-trips") {
  for (unsigned n = 0; n <= 5; ++n) {
    const auto g = build_g(n);
    const Bytes blob = dump_binary(g.dag);
    const Dag back = load_binary(blob);
    CHECK(same_structure(g.dag, back));
    CHECK(dump_binary(back) == blob);
    CHECK_FALSE(back.has_inplace_schedule());
  }
  const auto l = build_lightweight(20);
  CHECK(same_structure(l.dag, load_binary(dump_binary(l.dag))));
}

TEST_CASE("binary dump layout") {
  DagBuilder b;
  b.add_node({});
  b.add_node({0});
  const Dag d = std::move(b).build({1});
  const Bytes expected{'P', 'D', 'A', 'G', 1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 1, 0,
                       0,   0,   0,   0,   0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0};
  CHECK(dump_binary(d) == expected);
}

TEST_CASE("loaded graphs have no in-place schedule") {
  const Dag d = load_binary(dump_binary(build_g(2).dag));
  HashOracle h(Bytes{1}, 64);
  CHECK_THROWS_AS(label_inplace(h, d, d.outputs()), ScheduleError);
}

TEST_CASE("malformed dumps are rejected") {
  Bytes blob = dump_binary(build_g(2).dag);
  CHECK_THROWS_AS(load_binary(Bytes{'X', 'D', 'A', 'G'}), StructureError);
  Bytes truncated(blob.begin(), blob.end() - 3);
  CHECK_THROWS_AS(load_binary(truncated), StructureError);
  blob.push_back(0);
  CHECK_THROWS_AS(load_binary(blob), StructureError);
}

TEST_CASE("dot export") {
  const auto g = build_g(1);
  const std::string dot = to_dot(g.dag, &g.map);
  CHECK(dot.rfind("digraph G {\n", 0) == 0);
  CHECK(std::count(dot.begin(), dot.end(), '\n') ==
        static_cast<long>(3 + g.dag.node_count() + g.dag.edge_count()));
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("steelblue") != std::string::npos);
}
