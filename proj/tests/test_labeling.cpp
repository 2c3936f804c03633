#include <catch_amalgamated.hpp>

#include <string>

#include "posedb/errors.hpp"
#include "posedb/labeling.hpp"

using namespace posedb;

namespace {

HashOracle oracle_for(int seed, unsigned w = 256) {
  const std::string s = "label-" + std::to_string(seed);
  return HashOracle(Bytes(s.begin(), s.end()), w);
}

std::vector<Label> pick(const std::vector<Label>& all, const std::vector<NodeId>& nodes) {
  std::vector<Label> out;
  for (NodeId v : nodes) out.push_back(all[v]);
  return out;
}

}  // namespace

TEST_CASE("pre-label encoding") {
  const Label a(Bytes{0xaa, 0xbb});
  const Label* preds[] = {&a};
  const Bytes pre = pre_label(0x0102, preds);
  const Bytes expected{kNodeTag, 0, 0, 0, 0, 0, 0, 0x01, 0x02, 0xaa, 0xbb};
  CHECK(pre == expected);
  CHECK(decode_node(pre) == 0x0102u);
  CHECK_FALSE(decode_node(Bytes{1, 2}).has_value());
}

TEST_CASE("input node label is h(encode(v))") {
  DagBuilder b;
  b.add_node({});
  b.add_node({0});
  b.add_node({1});
  const Dag chain = std::move(b).build({2});
  auto h = oracle_for(1);
  const auto labels = label_all_reference(h, chain);
  CHECK(h.calls_made() == 3);

  auto h2 = oracle_for(1);
  CHECK(labels[0] == h2.query(pre_label(0, {})));
  const Label* p[] = {&labels[0]};
  CHECK(labels[1] == h2.query(pre_label(1, p)));
}

TEST_CASE("label store enforces honest reads") {
  LabelStore s(4);
  s.put(0, Label(Bytes{1}));
  s.put(1, Label(Bytes{2}));
  CHECK(s.words_now() == 2);
  s.evict(0);
  CHECK_THROWS_AS(s.get(0), MeterViolation);
  CHECK_THROWS_AS(s.evict(0), MeterViolation);
  CHECK_THROWS_AS(s.put(1, Label(Bytes{3})), MeterViolation);
  CHECK(s.words_peak() == 2);
  CHECK(s.words_now() == 1);
}

TEST_CASE("in-place labelling of G_1 w.r.t. its base") {
  const auto g = build_g(1);
  auto h = oracle_for(3);
  const auto r = label_inplace(h, g, InplaceTarget::base);
  CHECK(r.words_peak <= 2 + kInplaceOverheadWords);
  auto ref = oracle_for(3);
  CHECK(r.output_labels == pick(label_all_reference(ref, g.dag), g.dag.base()));
}

TEST_CASE("in-place peak overhead is constant for the recursive family") {
  for (unsigned n = 3; n <= 9; ++n) {
    const auto g = build_g(n);
    auto h = oracle_for(static_cast<int>(n));
    const auto r = label_inplace(h, g, InplaceTarget::base_rs);
    CHECK(r.words_peak == (1u << (n - 1)) + kInplaceOverheadWords);
    CHECK(r.oracle_calls == g.dag.node_count());
  }
}

TEST_CASE("in-place equals reference on the recursive family") {
  for (unsigned n = 1; n <= 6; ++n) {
    const auto g = build_g(n);
    for (int seed = 0; seed < 3; ++seed) {
      auto h = oracle_for(seed);
      auto ref = oracle_for(seed);
      const auto all = label_all_reference(ref, g.dag);
      CHECK(label_inplace(h, g, InplaceTarget::base_rs).output_labels ==
            pick(all, base_rs(g.dag, g.map)));
      CHECK(label_inplace(h, g, InplaceTarget::base).output_labels == pick(all, g.dag.base()));
    }
  }
}

TEST_CASE("in-place on composite families") {
  for (std::uint64_t m : {3u, 5u, 20u, 16u, 48u}) {
    for (const bool lightweight : {false, true}) {
      const auto g = lightweight ? build_lightweight(m) : build_arbitrary(m);
      auto h = oracle_for(static_cast<int>(m));
      auto ref = oracle_for(static_cast<int>(m));
      const auto r = label_inplace(h, g.dag, g.dag.outputs());
      CHECK(r.output_labels ==
            pick(label_ancestors_reference(ref, g.dag, g.dag.outputs()), g.dag.outputs()));
      if (!lightweight || m % kLightweightBlock == 0) {
        CHECK(r.words_peak == m + kInplaceOverheadWords);
      }
    }
  }
}

TEST_CASE("in-place refuses graphs without a schedule") {
  DagBuilder b;
  b.add_node({});
  const Dag d = std::move(b).build({0});
  auto h = oracle_for(0);
  const NodeId t[] = {0};
  CHECK_THROWS_AS(label_inplace(h, d, t), ScheduleError);
}

TEST_CASE("lightweight hash counts") {
  for (unsigned k = 4; k <= 8; ++k) {
    const auto g = build_lightweight(1ull << k);
    auto h = oracle_for(0, 64);
    label_all_reference(h, g.dag);
    CHECK(h.calls_made() == 367ull << (k - 3));
  }
}
