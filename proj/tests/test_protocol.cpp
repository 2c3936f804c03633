#include <catch_amalgamated.hpp>

#include "posedb/errors.hpp"
#include "posedb/protocol.hpp"

using namespace posedb;

TEST_CASE("setup per variant") {
  const auto u = Protocol::setup({Variant::unconditional, 4, 8, 1, 0});
  CHECK(u.rho().param_space == "{0,1}^32");
  CHECK(u.graph() == nullptr);

  const auto g = Protocol::setup({Variant::graph, 16, 256, 1, 0});
  CHECK(g.graph()->outputs().size() == 16);
  CHECK(g.rho().gamma == 8);

  const auto l = Protocol::setup({Variant::lightweight, 20, 256, 1, 0});
  CHECK(l.graph()->node_count() == build_lightweight(20).dag.node_count());
  CHECK(l.rho().gamma == 16);

  const auto p = Protocol::setup({Variant::graph_pow2, 8, 256, 1, 7});
  CHECK(p.graph()->node_count() == build_g(4).dag.node_count());

  CHECK_THROWS_AS(Protocol::setup({Variant::graph, 16, 256, 1, 8}), ParameterError);
  CHECK_THROWS_AS(Protocol::setup({Variant::graph_pow2, 6, 256, 1, 0}), ParameterError);
  CHECK_THROWS_AS(Protocol::setup({Variant::graph, 0, 256, 1, 0}), ParameterError);
  CHECK_THROWS_AS(Protocol::setup({Variant::graph, 4, 256, 0, 0}), ParameterError);
  CHECK_THROWS_AS(Protocol::setup({Variant::graph, 4, 12, 1, 0}), ParameterError);
  CHECK(parse_variant("graph-pow2") == Variant::graph_pow2);
  CHECK_THROWS_AS(parse_variant("nope"), ParameterError);
}

TEST_CASE("challenges are uniform") {
  const auto p = Protocol::setup({Variant::graph, 16, 256, 1, 0});
  Rng rng(42);
  std::vector<std::uint64_t> counts(16, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto x = p.chal(rng);
    REQUIRE(x < 16);
    ++counts[x];
  }
  double chi2 = 0;
  const double expected = draws / 16.0;
  for (auto c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Upper 0.001 quantile of chi-square with 15 degrees of freedom.
  CHECK(chi2 < 37.697);

  const auto one = Protocol::setup({Variant::graph, 1, 256, 1, 0});
  for (int i = 0; i < 10; ++i) CHECK(one.chal(rng) == 0);
}

TEST_CASE("honest precmp, resp and vrfy") {
  for (Variant v : {Variant::unconditional, Variant::graph, Variant::graph_pow2,
                    Variant::lightweight}) {
    const auto p = Protocol::setup({v, 16, 256, 1, 0});
    Rng rng(3);
    const Bytes ups = p.sample_upsilon(rng);
    const auto pre = p.precmp(ups);
    CHECK(pre.sigma.size() * 8 == p.sigma_bits());
    const auto ver = p.verifier(ups);
    Bytes rebuilt;
    for (std::uint64_t x = 0; x < 16; ++x) {
      const Label y = p.resp(pre.sigma, x);
      CHECK(ver.vrfy(x, y));
      Bytes flipped(y.bytes().begin(), y.bytes().end());
      flipped[0] ^= 1;
      CHECK_FALSE(ver.vrfy(x, Label(flipped)));
      rebuilt.insert(rebuilt.end(), y.bytes().begin(), y.bytes().end());
    }
    CHECK(rebuilt == pre.sigma);
    if (v == Variant::unconditional) {
      CHECK(pre.sigma == ups);
      CHECK(pre.oracle_calls == 0);
    }
  }
}

TEST_CASE("graph sigma equals reference labels") {
  const auto p = Protocol::setup({Variant::graph, 16, 256, 1, 0});
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const Bytes ups = p.sample_upsilon(rng);
    const auto x = p.chal(rng);
    auto h = p.oracle_for(ups);
    const NodeId roots[] = {p.challenge_node(x)};
    const auto ref = label_ancestors_reference(h, *p.graph(), roots);
    CHECK(p.verifier(ups).expected(x) == ref[roots[0]]);
    if (i < 5) CHECK(p.resp(p.precmp(ups).sigma, x) == ref[roots[0]]);
  }
}

TEST_CASE("resp rejects malformed state") {
  const auto p = Protocol::setup({Variant::unconditional, 4, 8, 1, 0});
  CHECK_THROWS_AS(p.resp(Bytes{1, 2, 3}, 0), ProtocolError);
  CHECK_THROWS_AS(p.resp(Bytes{1, 2, 3, 4}, 4), ProtocolError);
  CHECK(p.resp(Bytes{1, 2, 3, 4}, 1) == Label(Bytes{2}));
}

TEST_CASE("verifier recognises pre-labels") {
  const auto p = Protocol::setup({Variant::graph, 3, 64, 1, 0});
  Rng rng(1);
  const Bytes ups = p.sample_upsilon(rng);
  const auto ver = p.verifier(ups);
  auto h = p.oracle_for(ups);
  const auto all = label_all_reference(h, *p.graph());
  const NodeId v = p.challenge_node(0);
  std::vector<const Label*> preds;
  for (NodeId u : p.graph()->preds(v)) preds.push_back(&all[u]);
  Bytes pre = pre_label(v, preds);
  CHECK(ver.is_valid_pre_label(pre));
  pre.back() ^= 1;
  CHECK_FALSE(ver.is_valid_pre_label(pre));
}
