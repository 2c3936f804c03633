#include <catch_amalgamated.hpp>

#include <cmath>

#include "posedb/errors.hpp"
#include "posedb/experiment.hpp"

using namespace posedb;

TEST_CASE("honest sessions always pass with no responder queries") {
  for (Variant v : {Variant::unconditional, Variant::graph, Variant::lightweight}) {
    const auto p = Protocol::setup({v, 20, 256, 4, 0});
    auto adv = make_adversary({AdversaryKind::honest, p.sigma_bits()});
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto t = run_experiment(p, *adv, p.sigma_bits(), s);
      CHECK(t.verdict);
      for (const auto& r : t.rounds) {
        CHECK(r.oracle_calls == 0);
        CHECK(r.sigma_bits <= t.M);
      }
    }
  }
}

TEST_CASE("transcripts are reproducible") {
  const auto p = Protocol::setup({Variant::graph, 16, 256, 8, 7});
  auto a = make_adversary({AdversaryKind::recomputer, 12 * 256});
  auto b = make_adversary({AdversaryKind::recomputer, 12 * 256});
  const auto t1 = run_experiment(p, *a, 12 * 256, 77).to_json().dump();
  const auto t2 = run_experiment(p, *b, 12 * 256, 77).to_json().dump();
  CHECK(t1 == t2);
  CHECK(t1 != run_experiment(p, *a, 12 * 256, 78).to_json().dump());
}

TEST_CASE("state above M fails the round") {
  const auto p = Protocol::setup({Variant::graph, 4, 256, 2, 0});
  auto adv = make_adversary({AdversaryKind::honest, 0});
  const auto t = run_experiment(p, *adv, 4 * 256 - 1, 1);
  CHECK_FALSE(t.verdict);
  for (const auto& r : t.rounds) CHECK(r.over_memory);
}

TEST_CASE("empty-state adversaries lose") {
  const auto u = Protocol::setup({Variant::unconditional, 16, 32, 1, 0});
  const auto rep = monte_carlo(u, {AdversaryKind::truncator, 0}, {0, 2000, 1, 1});
  CHECK(rep.successes == 0);

  const auto g = Protocol::setup({Variant::graph, 16, 256, 1, 0});
  auto d = make_adversary({AdversaryKind::dropper, 0});
  CHECK(d->precompute(g, Bytes(32, 1), {}).empty());
  CHECK(monte_carlo(g, {AdversaryKind::dropper, 0}, {0, 300, 1, 1}).successes == 0);
}

TEST_CASE("dropper with full memory is honest") {
  const auto g = Protocol::setup({Variant::graph, 16, 256, 1, 0});
  auto d = make_adversary({AdversaryKind::dropper, 16 * 256});
  const Bytes ups(32, 5);
  CHECK(d->precompute(g, ups, {}) == g.precmp(ups).sigma);
}

TEST_CASE("dropper matches the stored fraction") {
  const auto p = Protocol::setup({Variant::graph, 16, 256, 1, 0});
  const auto rep = monte_carlo(p, {AdversaryKind::dropper, 15 * 256}, {15 * 256, 3000, 2, 1});
  CHECK(within_three_sigma(rep.successes, rep.trials, 15.0 / 16));
  REQUIRE(rep.bound.has_value());
  CHECK(rep.p_hat <= rep.bound->clipped + 3 * std::sqrt(rep.bound->clipped * (1 - rep.bound->clipped) / rep.trials) + 1e-9);
  CHECK(rep.wilson_low <= rep.p_hat);
  CHECK(rep.p_hat <= rep.wilson_high);
}

TEST_CASE("truncator matches the stored fraction") {
  const auto p = Protocol::setup({Variant::unconditional, 16, 32, 1, 0});
  const auto rep = monte_carlo(p, {AdversaryKind::truncator, 12 * 32}, {12 * 32, 3000, 3, 1});
  CHECK(within_three_sigma(rep.successes, rep.trials, 12.0 / 16));
  REQUIRE(rep.bound.has_value());
  CHECK(rep.bound_name == "unconditional-improved");
  CHECK(rep.bound->raw == Catch::Approx(13.0 / 16).margin(1e-6));
}

TEST_CASE("recomputer success is predicted by llp") {
  // G_3 with O = Base(RS): 4 outputs, gamma 4. Keep the first output.
  const auto p = Protocol::setup({Variant::graph_pow2, 4, 64, 1, 3});
  const Dag& g = *p.graph();
  auto rec = make_adversary({AdversaryKind::recomputer, 64});
  Rng rng(4);
  const Bytes ups = p.sample_upsilon(rng);
  const Bytes sigma = rec->precompute(p, ups, {});
  const auto ver = p.verifier(ups);
  for (std::uint64_t x = 1; x < 4; ++x) {
    const NodeId kept[] = {g.outputs()[0]};
    const int path = llp(g, p.challenge_node(x), kept);
    for (std::uint64_t q : {std::uint64_t{1}, std::uint64_t(path), std::uint64_t{200}}) {
      auto h = p.oracle_for(ups, q);
      const bool ok = ver.vrfy(x, rec->respond(p, sigma, x, &h));
      if (q < static_cast<std::uint64_t>(path)) CHECK_FALSE(ok);
      if (q >= 200) CHECK(ok);
    }
  }
}

TEST_CASE("recomputer under q < gamma does not beat the dropper") {
  const auto p = Protocol::setup({Variant::graph, 16, 256, 1, 7});
  const ExperimentConfig c{15 * 256, 2000, 8, 1};
  const auto rec = monte_carlo(p, {AdversaryKind::recomputer, 15 * 256}, c);
  CHECK(rec.p_hat <= 15.0 / 16 + 3 * std::sqrt(15.0 / 16 / 16 / 2000));
}

TEST_CASE("graph-restricted queries are audited") {
  const auto p = Protocol::setup({Variant::graph, 16, 64, 4, 7});
  auto rec = make_adversary({AdversaryKind::recomputer, 8 * 64});
  for (std::uint64_t s = 0; s < 10; ++s) {
    for (const auto& r : run_experiment(p, *rec, 8 * 64, s).rounds) {
      CHECK(r.invalid_queries == 0);
      CHECK(r.oracle_calls <= 7);
    }
  }
}

TEST_CASE("uniform composition") {
  const auto p = Protocol::setup({Variant::graph, 16, 64, 1, 0});
  const auto rep =
      check_uniform_composition(p, {AdversaryKind::dropper, 15 * 64}, {15 * 64, 2000, 5, 1}, {2, 4});
  CHECK(rep.passed());
  const auto honest =
      check_uniform_composition(p, {AdversaryKind::honest, 16 * 64}, {16 * 64, 100, 5, 1}, {2, 8});
  for (const auto& row : honest.rows) CHECK(row.estimate.p_hat == 1.0);
}

TEST_CASE("wilson interval") {
  const auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo == Catch::Approx(0.4038).margin(1e-3));
  CHECK(hi == Catch::Approx(0.5962).margin(1e-3));
  const auto [l0, h0] = wilson_interval(0, 10);
  CHECK(l0 == 0);
  CHECK(h0 > 0);
}

TEST_CASE("threads do not change the estimate") {
  const auto p = Protocol::setup({Variant::graph, 8, 64, 2, 0});
  const AdversarySpec spec{AdversaryKind::dropper, 6 * 64};
  const auto a = monte_carlo(p, spec, {6 * 64, 200, 11, 1});
  const auto b = monte_carlo(p, spec, {6 * 64, 200, 11, 3});
  CHECK(a.successes == b.successes);
}
