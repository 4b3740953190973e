#include <benchmark/benchmark.h>

#include <chainminer/bif.hpp>
#include <chainminer/brute_force.hpp>
#include <chainminer/chain_graph.hpp>
#include <chainminer/error.hpp>
#include <chainminer/ga.hpp>
#include <chainminer/inference.hpp>
#include <chainminer/network.hpp>
#include <chainminer/random.hpp>
#include <chainminer/rule.hpp>

using namespace chainminer;

namespace {

Query sample_query(const BayesianNetwork& net, RandomStream& rng) {
  Query q;
  q.target = static_cast<int>(rng.index(net.num_variables()));
  q.target_state =
      static_cast<int>(rng.index(net.variable(q.target).states.size()));
  q.evidence = net.make_assignment();
  for (int v = 0; v < net.num_variables(); ++v) {
    if (v == q.target || !rng.coin(0.5)) continue;
    q.evidence.set(v,
                   static_cast<int>(rng.index(net.variable(v).states.size())));
  }
  return q;
}

void BM_EliminationQuery(benchmark::State& state, const char* name) {
  BayesianNetwork net = load_bundled(name);
  RandomStream rng(42);
  std::vector<Query> queries;
  for (int i = 0; i < 64; ++i) queries.push_back(sample_query(net, rng));
  std::size_t i = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(query(net, queries[i++ % queries.size()]));
    } catch (const ZeroEvidenceError&) {
    }
  }
}
BENCHMARK_CAPTURE(BM_EliminationQuery, asia, "asia");
BENCHMARK_CAPTURE(BM_EliminationQuery, sachs, "sachs");

void BM_EnumerationQuery(benchmark::State& state, const char* name) {
  BayesianNetwork net = load_bundled(name);
  RandomStream rng(42);
  std::vector<Query> queries;
  for (int i = 0; i < 64; ++i) queries.push_back(sample_query(net, rng));
  std::size_t i = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(
          enumerate_query(net, queries[i++ % queries.size()]));
    } catch (const ZeroEvidenceError&) {
    }
  }
}
BENCHMARK_CAPTURE(BM_EnumerationQuery, asia, "asia");
BENCHMARK_CAPTURE(BM_EnumerationQuery, sachs, "sachs");

void BM_CachedPosterior(benchmark::State& state) {
  BayesianNetwork net = load_bundled("asia");
  PosteriorCache cache(net);
  RandomStream rng(42);
  std::vector<Query> queries;
  for (int i = 0; i < 64; ++i) queries.push_back(sample_query(net, rng));
  std::size_t i = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(cache.query(queries[i++ % queries.size()]));
    } catch (const ZeroEvidenceError&) {
    }
  }
}
BENCHMARK(BM_CachedPosterior);

void BM_AncestralSample(benchmark::State& state) {
  BayesianNetwork net = load_bundled("sachs");
  RandomStream rng(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ancestral_sample(net, rng));
  }
}
BENCHMARK(BM_AncestralSample);

void BM_BruteForce(benchmark::State& state, const char* name,
                   const char* target) {
  BayesianNetwork net = load_bundled(name);
  int t = *net.find_variable(target);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_all_rules(net, t, 0.7));
  }
}
BENCHMARK_CAPTURE(BM_BruteForce, cancer, "cancer", "Cancer");
BENCHMARK_CAPTURE(BM_BruteForce, asia, "asia", "dysp");

void BM_ChromosomeFitness(benchmark::State& state) {
  BayesianNetwork net = load_bundled("asia");
  int dysp = *net.find_variable("dysp");
  FitnessParams params;
  params.target = dysp;
  FitnessEvaluator eval(net, params);
  RandomStream rng(7);
  Chromosome c;
  for (int i = 0; i < 10; ++i) c.rules.push_back(new_rule(net, dysp, rng, 0.5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.chromosome_fitness(c));
  }
}
BENCHMARK(BM_ChromosomeFitness);

void BM_GaRun(benchmark::State& state) {
  BayesianNetwork net = load_bundled("cancer");
  int target = *net.find_variable("Cancer");
  GaConfig cfg;
  cfg.pop_size = 20;
  cfg.gen_max = 10;
  cfg.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(net, target, cfg));
  }
}
BENCHMARK(BM_GaRun)->Unit(benchmark::kMillisecond);

void BM_ChainGraph(benchmark::State& state) {
  BayesianNetwork net = load_bundled("asia");
  int dysp = *net.find_variable("dysp");
  RandomStream rng(11);
  std::vector<Rule> rules;
  for (int i = 0; i < 10; ++i) rules.push_back(new_rule(net, dysp, rng, 0.5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(to_dot(build_chain_graph(rules, net, dysp), net));
  }
}
BENCHMARK(BM_ChainGraph);

}  // namespace

BENCHMARK_MAIN();
