// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "posedb/adversary.hpp"
#include "posedb/analysis.hpp"
#include "posedb/experiment.hpp"
#include "posedb/graph.hpp"
#include "posedb/io.hpp"
#include "posedb/labeling.hpp"
#include "posedb/protocol.hpp"

using namespace posedb;

namespace {

constexpr double kSigmas = 3.0;
constexpr std::uint64_t kHonestSessions = 1000;
constexpr unsigned kHonestRounds = 4;
constexpr std::uint64_t kMonteCarloTrials = 10000;
constexpr std::uint64_t kDepthSamples = 100000;
constexpr unsigned kInplaceSeeds = 10;
constexpr double kRoundTarget = 1e-3;
constexpr unsigned kExpectedRounds = 112;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double sigma_at(double p, std::uint64_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

// --------------------------------------------------------------------------

Outcome completeness() {
  struct Case {
    Variant v;
    std::uint64_t m;
  };
  const Case cases[] = {{Variant::unconditional, 16}, {Variant::graph, 3},
                        {Variant::graph, 16},         {Variant::graph, 20},
                        {Variant::lightweight, 16},   {Variant::lightweight, 20},
                        {Variant::lightweight, 48}};
  std::uint64_t sessions = 0, failed = 0, responder_calls = 0;
  for (const auto& c : cases) {
    const auto p = Protocol::setup({c.v, c.m, 256, kHonestRounds, 0});
    auto honest = make_adversary({AdversaryKind::honest, p.sigma_bits()});
    for (std::uint64_t s = 0; s < kHonestSessions; ++s) {
      const auto t = run_experiment(p, *honest, p.sigma_bits(), derive_seed(c.m, s));
      ++sessions;
      if (!t.verdict) ++failed;
      for (const auto& r : t.rounds) responder_calls += r.oracle_calls;
    }
  }
  std::ostringstream os;
  os << sessions << " honest sessions over 7 configurations, " << failed
     << " rejected, responder oracle calls " << responder_calls;
  return {failed == 0 && responder_calls == 0, os.str()};
}

Outcome node_counts() {
  const std::uint64_t expected_nodes[] = {18, 70, 238, 734};
  bool ok = true;
  std::ostringstream os;
  os << "G_k with 2^k outputs = build_g(k+1):";
  for (unsigned k = 1; k <= 4; ++k) {
    const std::uint64_t shifted = build_g(k + 1).dag.node_count();
    os << " G_" << k << "=" << shifted << " (build_g(" << k << ")=" << build_g(k).dag.node_count()
       << ")";
    ok = ok && shifted == expected_nodes[k - 1] && shifted == indexed_node_count_closed_form(k);
  }
  const std::uint64_t g4 = build_g(kLightweightOrder).dag.node_count();
  ok = ok && g4 == 734;
  for (unsigned i = 0; i <= 6; ++i) {
    ok = ok && build_butterfly(i).node_count() == 2ull * (i + 1) * (1ull << i);
  }
  os << "; 16-output G_4 has " << g4 << " nodes; |H_i| = 2(i+1)2^i for i <= 6: "
     << (ok ? "yes" : "no");
  return {ok, os.str()};
}

std::vector<std::pair<std::string, std::vector<TaggedGraph>>> inplace_families() {
  std::vector<std::pair<std::string, std::vector<TaggedGraph>>> out;
  std::vector<TaggedGraph> rec;
  for (unsigned n = 3; n <= 9; ++n) {
    auto g = build_g(n);
    rec.push_back({std::move(g.dag), std::move(g.map)});
  }
  out.emplace_back("G_3..G_9", std::move(rec));
  out.emplace_back("lightweight 16/32/48", std::vector<TaggedGraph>{build_lightweight(16),
                                                                     build_lightweight(32),
                                                                     build_lightweight(48)});
  out.emplace_back("arbitrary 3/5/20", std::vector<TaggedGraph>{build_arbitrary(3),
                                                                 build_arbitrary(5),
                                                                 build_arbitrary(20)});
  return out;
}

Outcome inplace_tightness() {
  bool ok = true;
  std::ostringstream os;
  for (const auto& [name, graphs] : inplace_families()) {
    std::vector<long long> overheads;
    for (const auto& g : graphs) {
      HashOracle h(Bytes{7}, 256);
      const auto r = label_inplace(h, g.dag, g.dag.outputs());
      overheads.push_back(static_cast<long long>(r.words_peak) -
                          static_cast<long long>(g.dag.outputs().size()));
    }
    bool constant = true;
    for (auto o : overheads) constant = constant && o == overheads.front();
    ok = ok && constant;
    os << name << ": peak - |O| = " << overheads.front() << (constant ? " for all" : " NOT constant")
       << "; ";
  }
  return {ok, os.str()};
}

Outcome inplace_correctness() {
  std::uint64_t comparisons = 0, mismatches = 0;
  for (const auto& [name, graphs] : inplace_families()) {
    for (const auto& g : graphs) {
      for (unsigned s = 0; s < kInplaceSeeds; ++s) {
        const Bytes seed{static_cast<std::uint8_t>(s), 0xac};
        HashOracle h(seed, 256);
        const auto r = label_inplace(h, g.dag, g.dag.outputs());
        HashOracle ref(seed, 256);
        const auto all = label_all_reference(ref, g.dag);
        for (std::size_t i = 0; i < g.dag.outputs().size(); ++i) {
          ++comparisons;
          if (!(r.output_labels[i] == all[g.dag.outputs()[i]])) ++mismatches;
        }
      }
    }
  }
  std::ostringstream os;
  os << comparisons << " output labels over 13 graphs x " << kInplaceSeeds << " seeds, "
     << mismatches << " mismatches";
  return {mismatches == 0, os.str()};
}

Outcome depth_exhaustive() {
  const auto g2 = build_g(2);
  const auto a = depth_robust_check(g2.dag, base_rs(g2.dag, g2.map), 2, 2);
  const auto a3 = build_arbitrary(3);
  const auto b = depth_robust_check(a3.dag, a3.dag.outputs(), 3, 2);
  const auto q2 = build_q(2, build_g(kLightweightOrder));
  const auto c = depth_robust_check(q2.dag, q2.dag.outputs(), 2, 16);
  std::ostringstream os;
  os << "G_2 (2,2): " << a.checked << " sets/" << a.violation_count << " violations; arbitrary(3) (3,2): "
     << b.checked << "/" << b.violation_count << "; Q_2 (2,16): " << c.checked << "/"
     << c.violation_count;
  return {a.passed() && b.passed() && c.passed(), os.str()};
}

Outcome depth_sampled() {
  const DepthRobustOptions opt{CheckMode::sampled, kDepthSamples, 2024};
  const auto g3 = build_g(3);
  const auto a = depth_robust_check(g3.dag, base_rs(g3.dag, g3.map), 4, 4, opt);
  const auto l = build_lightweight(17);
  const auto b = depth_robust_check(l.dag, l.dag.outputs(), 17, 16, opt);
  std::ostringstream os;
  os << "G_3 (4,4): " << a.checked << " samples/" << a.violation_count
     << " violations; lightweight(17) (17,16): " << b.checked << "/" << b.violation_count;
  return {a.passed() && b.passed(), os.str()};
}

Outcome connectors() {
  const auto h1 = connector_check(build_butterfly(1));
  const auto h2 = connector_check(build_butterfly(2));
  std::ostringstream os;
  os << "H_1: " << h1.checked << " pairings/" << h1.failures << " failures; H_2: " << h2.checked
     << "/" << h2.failures;
  return {h1.passed() && h2.passed() && h1.checked == 8 && h2.checked == 1312, os.str()};
}

Outcome bound_reproduction() {
  const BoundInputs six_kb{3200, 256, 1, 94ull << 13, 0, true};
  const BoundInputs stated{3200, 256, 1, 95ull << 13, 0, true};
  const unsigned r = min_rounds(kRoundTarget, six_kb);
  const unsigned r_stated = min_rounds(kRoundTarget, stated);
  std::ostringstream os;
  os << "M' = " << bound_graph(six_kb).m_prime << ", min_rounds(1e-3) = " << r
     << "; stated M = 95*2^13 would give " << r_stated << " (inconsistent with 112)";
  return {r == kExpectedRounds, os.str()};
}

Outcome monte_carlo_vs_theory() {
  bool ok = true;
  std::ostringstream os;
  const std::uint64_t n = kMonteCarloTrials;
  const std::uint64_t M = 15 * 256;

  auto bound_ok = [&](const EstimateReport& e) {
    if (!e.bound) return false;
    const double b = e.bound->clipped;
    return e.p_hat <= b + kSigmas * sigma_at(b, n) + 1e-12;
  };

  const auto graph = Protocol::setup({Variant::graph, 16, 256, 1, 0});
  EstimateReport drop1;
  for (unsigned r : {1u, 2u, 4u, 8u}) {
    const auto e = monte_carlo(graph.with_rounds(r), {AdversaryKind::dropper, M}, {M, n, 100 + r, 1});
    const double expected = std::pow(15.0 / 16, r);
    const bool in = within_three_sigma(e.successes, n, expected);
    ok = ok && in && bound_ok(e);
    os << "dropper r=" << r << ": " << e.p_hat << " vs " << expected << (in ? "" : " OUT") << "; ";
    if (r == 1) drop1 = e;
  }

  const auto graph_q = Protocol::setup({Variant::graph, 16, 256, 1, 7});
  const auto rec = monte_carlo(graph_q, {AdversaryKind::recomputer, M}, {M, n, 101, 1});
  const double gain = rec.p_hat - drop1.p_hat;
  const bool no_gain = gain <= kSigmas * std::sqrt(2.0) * sigma_at(15.0 / 16, n);
  ok = ok && no_gain && bound_ok(rec);
  os << "recomputer q=7<gamma=8: " << rec.p_hat << " (gain " << gain << "); ";

  const auto uncond = Protocol::setup({Variant::unconditional, 16, 32, 1, 0});
  const auto tr = monte_carlo(uncond, {AdversaryKind::truncator, 12 * 32}, {12 * 32, n, 7, 1});
  const bool tr_in = within_three_sigma(tr.successes, n, 12.0 / 16);
  ok = ok && tr_in && bound_ok(tr);
  os << "truncator 12/16: " << tr.p_hat << " (bound " << (tr.bound ? tr.bound->clipped : -1) << ")";
  return {ok, os.str()};
}

Outcome hash_counts() {
  bool ok = true;
  std::ostringstream os;
  for (unsigned k = 4; k <= 8; ++k) {
    const auto hc = hash_count_comparison(k);
    const auto full = build_g(k + 1);
    HashOracle hf(Bytes{1}, 256);
    label_all_reference(hf, full.dag);
    const auto light = build_lightweight(1ull << k);
    HashOracle hl(Bytes{1}, 256);
    label_all_reference(hl, light.dag);
    ok = ok && hf.calls_made() == hc.full && hl.calls_made() == hc.lightweight;
    os << "k=" << k << ": " << hf.calls_made() << "/" << hl.calls_made() << " ";
  }
  os << "(full/lightweight, all equal to the closed forms: " << (ok ? "yes" : "no") << ")";
  return {ok, os.str()};
}

Outcome sphere_lemmas() {
  const auto r = verify_sphere_lemmas(12, 10);
  std::ostringstream os;
  os << r.c_ineq_checked << " (m,w,c) and " << r.cmax_checked << " (m,w,y) cases, "
     << r.c_ineq_failures + r.cmax_failures << " counterexamples";
  return {r.passed(), os.str()};
}

Outcome reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(POSEDB_WORK_DIR) / "acceptance_repro";
  fs::create_directories(dir);
  const std::string cli = POSEDB_CLI;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"session.json", "session --protocol graph --memory-kb 1 --rounds 8 --seed 1"},
      {"session_u.csv", "session --protocol unconditional --memory-kb 1 --rounds 4 --seed 3 --format csv"},
      {"attack.json", "attack --protocol graph --blocks 16 --adversary recomputer --adversary-blocks 15 --budget 7 --trials 300 --seed 5"},
      {"bounds.csv", "bounds --blocks 3200 --adversary-memory-kb 6 --format csv"},
      {"graph.dot", "graph --family g --size 3 --format dot"},
      {"verify.json", "verify --target depth-robust --samples 2000 --seed 9"},
      {"bench.json", "bench --k-max 6"},
  };
  std::uint64_t identical = 0;
  std::ostringstream os;
  for (const auto& [file, args] : commands) {
    Bytes runs[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path out = dir / (std::to_string(i) + "_" + file);
      fs::remove(out);
      const std::string cmd = "\"" + cli + "\" " + args + " --out \"" + out.string() + "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc != 0 || !fs::exists(out)) {
        os << file << ": command failed; ";
        break;
      }
      runs[i] = read_file(out);
    }
    if (!runs[0].empty() && runs[0] == runs[1]) ++identical;
  }
  os << identical << "/" << commands.size() << " CLI outputs byte-identical across two runs";
  return {identical == commands.size(), os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"completeness", completeness},
      {"node counts", node_counts},
      {"in-place tightness", inplace_tightness},
      {"in-place correctness", inplace_correctness},
      {"depth-robustness, exhaustive", depth_exhaustive},
      {"depth-robustness, sampled", depth_sampled},
      {"connector property", connectors},
      {"bound reproduction", bound_reproduction},
      {"Monte Carlo vs theory", monte_carlo_vs_theory},
      {"hash-count formulas", hash_counts},
      {"sphere lemmas", sphere_lemmas},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << " ("
              << secs << " s): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
