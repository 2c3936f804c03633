#include "posedb/experiment.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "posedb/errors.hpp"
#include "posedb/rng.hpp"

namespace posedb {

nlohmann::ordered_json SessionTranscript::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["variant"] = to_string(params.variant);
  j["m"] = params.m;
  j["w"] = params.w;
  j["r"] = params.r;
  j["q"] = params.q;
  j["seed"] = seed;
  j["adversary"] = adversary;
  j["M"] = M;
  j["upsilon_digest"] = upsilon_digest;
  auto& rs = j["rounds"] = nlohmann::ordered_json::array();
  for (const auto& r : rounds) {
    nlohmann::ordered_json row;
    row["x"] = r.x;
    if (r.node) row["node"] = *r.node;
    row["y"] = r.y.hex();
    row["ok"] = r.ok;
    row["oracle_calls"] = r.oracle_calls;
    row["sigma_bits"] = r.sigma_bits;
    if (r.over_memory) row["over_memory"] = true;
    if (r.budget_exhausted) row["budget_exhausted"] = true;
    if (r.invalid_queries) row["invalid_queries"] = r.invalid_queries;
    rs.push_back(std::move(row));
  }
  j["verdict"] = verdict;
  return j;
}

SessionTranscript run_experiment(const Protocol& protocol, Adversary& adversary, std::uint64_t M,
                                 std::uint64_t seed) {
  const auto& params = protocol.params();
  SessionTranscript t;
  t.params = params;
  t.adversary = to_string(adversary.kind());
  t.M = M;
  t.seed = seed;

  Rng rng(seed);
  const Bytes upsilon = protocol.sample_upsilon(rng);
  t.upsilon_digest = digest_hex(upsilon);
  const Verifier verifier = protocol.verifier(upsilon);
  const bool graph = is_graph_variant(params.variant);

  std::vector<std::uint64_t> history;
  std::optional<Bytes> first_state;
  t.verdict = true;
  for (unsigned i = 0; i < params.r; ++i) {
    const Bytes sigma = adversary.precompute(protocol, upsilon, history);
    if (adversary.uniform()) {
      if (!first_state) {
        first_state = sigma;
      } else if (*first_state != sigma) {
        throw ContractError("adversary declared uniform but changed its state in round " +
                            std::to_string(i + 1));
      }
    }
    const std::uint64_t x = protocol.chal(rng);
    history.push_back(x);

    RoundRecord rec;
    rec.x = x;
    if (graph) rec.node = protocol.challenge_node(x);
    rec.sigma_bits = sigma.size() * 8;
    if (rec.sigma_bits > M) {
      rec.over_memory = true;
      rec.y = Label::zero(params.w);
    } else {
      std::optional<HashOracle> oracle;
      if (graph) {
        oracle.emplace(protocol.oracle_for(upsilon, params.q));
        if (adversary.graph_restricted()) {
          oracle->set_observer([&](std::span<const std::uint8_t> in) {
            if (!verifier.is_valid_pre_label(in)) ++rec.invalid_queries;
          });
        }
      }
      try {
        rec.y = adversary.respond(protocol, sigma, x, oracle ? &*oracle : nullptr);
      } catch (const BudgetExhausted&) {
        rec.budget_exhausted = true;
        rec.y = Label::zero(params.w);
      }
      if (oracle) rec.oracle_calls = oracle->calls_made();
      if (rec.y.size_bits() != params.w) {
        throw ProtocolError("adversary answered with " + std::to_string(rec.y.size_bits()) +
                            " bits instead of " + std::to_string(params.w));
      }
    }
    rec.ok = !rec.over_memory && !rec.budget_exhausted && rec.invalid_queries == 0 &&
             verifier.vrfy(x, rec.y);
    t.verdict = t.verdict && rec.ok;
    t.rounds.push_back(std::move(rec));
  }
  return t;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                          double z) {
  if (trials == 0) return {0, 1};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

bool within_three_sigma(std::uint64_t successes, std::uint64_t trials, double p) {
  const double n = static_cast<double>(trials);
  const double p_hat = static_cast<double>(successes) / n;
  return std::abs(p_hat - p) <= 3 * std::sqrt(p * (1 - p) / n) + 1e-12;
}

std::pair<std::optional<Probability>, std::string> theoretical_bound(const Protocol& protocol,
                                                                    bool restricted,
                                                                    std::uint64_t M) {
  const auto& p = protocol.params();
  if (p.variant == Variant::unconditional) {
    const std::uint64_t capped = std::min<std::uint64_t>(M, p.m * p.w);
    const auto b = bound_unconditional(p.m, p.w, capped, p.r);
    if (b.improved && b.improved->raw < b.basic.raw) return {b.improved, "unconditional-improved"};
    return {b.basic, "unconditional"};
  }
  try {
    BoundInputs in{p.m, p.w, p.r, M, p.q, restricted};
    return {bound_graph(in).value, restricted ? "graph-restricted" : "graph"};
  } catch (const InapplicableError& e) {
    return {std::nullopt, std::string("inapplicable: ") + e.what()};
  }
}

namespace {

EstimateReport summarise(std::uint64_t successes, std::uint64_t trials) {
  EstimateReport r;
  r.trials = trials;
  r.successes = successes;
  r.p_hat = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0;
  r.sigma = trials ? std::sqrt(r.p_hat * (1 - r.p_hat) / static_cast<double>(trials)) : 0;
  std::tie(r.wilson_low, r.wilson_high) = wilson_interval(successes, trials);
  return r;
}

}  // namespace

EstimateReport monte_carlo(const Protocol& protocol, const AdversarySpec& spec,
                           const ExperimentConfig& config) {
  if (config.trials < 1) throw ParameterError("trials must be at least 1");
  const unsigned threads =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
  std::vector<std::uint64_t> wins(threads, 0);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&](unsigned id) {
    try {
      auto adversary = make_adversary(spec);
      for (std::uint64_t t = id; t < config.trials; t += threads) {
        if (run_experiment(protocol, *adversary, config.M, derive_seed(config.seed, t)).verdict) {
          ++wins[id];
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker, i);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::uint64_t successes = 0;
  for (auto w : wins) successes += w;
  EstimateReport report = summarise(successes, config.trials);
  const bool restricted = make_adversary(spec)->graph_restricted();
  std::tie(report.bound, report.bound_name) = theoretical_bound(protocol, restricted, config.M);
  return report;
}

bool CompositionReport::passed() const {
  for (const auto& row : rows) {
    if (!row.within) return false;
  }
  return true;
}

CompositionReport check_uniform_composition(const Protocol& protocol, const AdversarySpec& spec,
                                            const ExperimentConfig& config,
                                            const std::vector<unsigned>& r_list) {
  if (!make_adversary(spec)->uniform()) {
    throw ContractError("composition check needs a uniform adversary");
  }
  CompositionReport report;
  report.single_round = monte_carlo(protocol.with_rounds(1), spec, config);
  const double p1 = report.single_round.p_hat;
  const double s1 = report.single_round.sigma;
  for (unsigned r : r_list) {
    CompositionRow row;
    row.r = r;
    ExperimentConfig c = config;
    c.seed = derive_seed(config.seed, 0x5eed0000ull + r);
    row.estimate = monte_carlo(protocol.with_rounds(r), spec, c);
    row.predicted = std::pow(p1, r);
    const double s_pred = r * std::pow(p1, r - 1.0) * s1;
    row.tolerance = 3 * std::sqrt(row.estimate.sigma * row.estimate.sigma + s_pred * s_pred);
    row.within = std::abs(row.estimate.p_hat - row.predicted) <= row.tolerance + 1e-12;
    report.rows.push_back(row);
  }
  return report;
}

nlohmann::ordered_json to_json(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["trials"] = r.trials;
  j["successes"] = r.successes;
  j["p_hat"] = r.p_hat;
  j["sigma"] = r.sigma;
  j["wilson95"] = {r.wilson_low, r.wilson_high};
  if (r.bound) {
    j["bound"] = r.bound->clipped;
    j["bound_raw"] = r.bound->raw;
  } else {
    j["bound"] = nullptr;
  }
  j["bound_formula"] = r.bound_name;
  return j;
}

}  // namespace posedb
