#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <chainminer/bif.hpp>
#include <chainminer/error.hpp>
#include <chainminer/ga.hpp>
#include <chainminer/random.hpp>
#include <chainminer/rule.hpp>

#include "fixtures.hpp"

using namespace chainminer;

namespace {

std::vector<Rule> sorted_pool(const Chromosome& a, const Chromosome& b) {
  std::vector<Rule> pool = a.rules;
  pool.insert(pool.end(), b.rules.begin(), b.rules.end());
  std::sort(pool.begin(), pool.end(), rule_less);
  return pool;
}

}  // namespace

TEST_SUITE("ga") {

TEST_CASE("config domains are enforced") {
  BayesianNetwork net = fixtures::two_var();
  auto expect_throw = [&](auto mutate) {
    GaConfig cfg;
    mutate(cfg);
    CHECK_THROWS_AS(run(net, 1, cfg), ArgumentError);
  };
  expect_throw([](GaConfig& c) { c.pop_size = 1; });
  expect_throw([](GaConfig& c) { c.gen_max = 0; });
  expect_throw([](GaConfig& c) { c.tournament_size = 1; });
  expect_throw([](GaConfig& c) { c.tournament_size = c.pop_size + 1; });
  expect_throw([](GaConfig& c) { c.alpha = 0.0; });
  expect_throw([](GaConfig& c) { c.alpha = 1.1; });
  expect_throw([](GaConfig& c) { c.gen_max_local = 0; });
  expect_throw([](GaConfig& c) { c.mask_prob = -0.1; });
  expect_throw([](GaConfig& c) { c.mask_prob = 1.1; });
  expect_throw([](GaConfig& c) { c.max_rules = 0; });
  expect_throw([](GaConfig& c) { c.init_rules_min = 0; });
  expect_throw([](GaConfig& c) { c.init_rules_min = 20; });  // above init max
  expect_throw([](GaConfig& c) { c.init_rules_max = c.max_rules + 1; });
  expect_throw([](GaConfig& c) { c.pairs_per_generation = 0; });
  expect_throw([](GaConfig& c) { c.fitness.beta = 1.5; });
  expect_throw([](GaConfig& c) { c.fitness.gamma = -1.0; });
  CHECK_THROWS_AS(run(net, 9, GaConfig{}), ArgumentError);
}

TEST_CASE("new_rule masks antecedent genes with the given probability") {
  BayesianNetwork net = load_bundled("asia");
  RandomStream rng(1);
  Rule all_masked = new_rule(net, 7, rng, 1.0);
  CHECK(specificity(all_masked) == 0);
  CHECK(all_masked.genes[7] == Rule::kNeutralGene);
  CHECK(all_masked.target_state >= 0);

  Rule none_masked = new_rule(net, 7, rng, 0.0);
  CHECK(specificity(none_masked) == 7);
  CHECK(none_masked.genes[7] == Rule::kNeutralGene);
}

TEST_CASE("initial population respects the size bounds") {
  BayesianNetwork net = load_bundled("asia");
  GaConfig cfg;
  cfg.init_rules_min = 3;
  cfg.init_rules_max = 6;
  RandomStream rng(2);
  std::vector<Chromosome> pop = initialize_population(net, cfg, rng);
  REQUIRE(pop.size() == static_cast<std::size_t>(cfg.pop_size));
  for (const Chromosome& c : pop) {
    CHECK(c.rules.size() >= 3);
    CHECK(c.rules.size() <= 6);
  }
}

TEST_CASE("tournament of the whole population is argmax") {
  std::vector<double> fitness{0.2, 0.9, 0.4, 0.9};
  RandomStream rng(3);
  for (int i = 0; i < 50; ++i) {
    CHECK(tournament_select(fitness, 4, rng) == 1);  // tie breaks low
  }
}

TEST_CASE("tournament of one is uniform") {
  std::vector<double> fitness{0.1, 0.2, 0.3, 0.4};
  RandomStream rng(4);
  int counts[4] = {0, 0, 0, 0};
  const int n = 4000;
  for (int i = 0; i < n; ++i) ++counts[tournament_select(fitness, 1, rng)];
  // Mean 1000 per bucket, three sigma is about 82 for this fixed seed.
  for (int c : counts) CHECK(std::abs(c - 1000) < 85);
}

TEST_CASE("crossover conserves the parents' rule multiset") {
  BayesianNetwork net = load_bundled("asia");
  RandomStream rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Chromosome a, b;
    int na = 1 + static_cast<int>(rng.index(5));
    int nb = 1 + static_cast<int>(rng.index(5));
    for (int i = 0; i < na; ++i) a.rules.push_back(new_rule(net, 7, rng, 0.5));
    for (int i = 0; i < nb; ++i) b.rules.push_back(new_rule(net, 7, rng, 0.5));
    auto [c1, c2] = structural_crossover(a, b, rng);
    std::size_t total = a.rules.size() + b.rules.size();
    CHECK(c1.rules.size() == (total + 1) / 2);
    CHECK(c2.rules.size() == total / 2);
    CHECK(sorted_pool(c1, c2) == sorted_pool(a, b));
  }
}

TEST_CASE("mutation keeps sizes inside [1, max_rules]") {
  BayesianNetwork net = load_bundled("asia");
  GaConfig cfg;
  cfg.max_rules = 4;
  RandomStream rng(6);
  Chromosome c;
  c.rules.push_back(new_rule(net, 7, rng, 0.5));
  for (int trial = 0; trial < 300; ++trial) {
    c = structural_mutation(c, net, 7, cfg, rng);
    CHECK(c.rules.size() >= 1);
    CHECK(c.rules.size() <= 4);
  }
}

TEST_CASE("mutation inserts and deletes at equal rates") {
  BayesianNetwork net = load_bundled("asia");
  GaConfig cfg;  // max_rules 30 leaves room both ways from size 15
  RandomStream rng(7);
  Chromosome c;
  for (int i = 0; i < 15; ++i) c.rules.push_back(new_rule(net, 7, rng, 0.5));
  int grew = 0, shrank = 0;
  const int n = 4000;
  for (int trial = 0; trial < n; ++trial) {
    Chromosome m = structural_mutation(c, net, 7, cfg, rng);
    grew += m.rules.size() > c.rules.size();
    shrank += m.rules.size() < c.rules.size();
  }
  CHECK(grew + shrank == n);  // every call changes the size
  // Fair coin: |grew - 2000| stays within three sigma (about 95).
  CHECK(std::abs(grew - 2000) < 100);
}

TEST_CASE("local search never worsens and keeps fitness in sync") {
  BayesianNetwork net = load_bundled("asia");
  GaConfig cfg;
  FitnessParams p = cfg.fitness;
  p.target = 7;
  FitnessEvaluator eval(net, p);
  RandomStream rng(8);
  std::vector<Chromosome> chroms;
  std::vector<double> fits;
  for (int i = 0; i < 6; ++i) {
    Chromosome c;
    for (int k = 0; k < 4; ++k) c.rules.push_back(new_rule(net, 7, rng, 0.5));
    fits.push_back(eval.chromosome_fitness(c));
    chroms.push_back(std::move(c));
  }
  std::vector<double> before = fits;
  local_search(chroms, fits, chroms.size(), eval, cfg, rng);
  for (std::size_t i = 0; i < chroms.size(); ++i) {
    CHECK(fits[i] >= before[i]);
    CHECK(fits[i] == eval.chromosome_fitness(chroms[i]));
  }
}

TEST_CASE("identical seeds give identical runs") {
  BayesianNetwork net = load_bundled("cancer");
  GaConfig cfg;
  cfg.pop_size = 10;
  cfg.gen_max = 12;
  cfg.pairs_per_generation = 3;
  cfg.seed = 42;
  GaResult a = run(net, *net.find_variable("Cancer"), cfg);
  GaResult b = run(net, *net.find_variable("Cancer"), cfg);
  CHECK(a.best_fitness == b.best_fitness);
  CHECK(a.best.rules.size() == b.best.rules.size());
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    CHECK(a.trace.records[i].best_fitness == b.trace.records[i].best_fitness);
    CHECK(a.trace.records[i].mean_fitness == b.trace.records[i].mean_fitness);
  }
}

TEST_CASE("runs record one trace row per generation and never regress") {
  BayesianNetwork net = load_bundled("earthquake");
  GaConfig cfg;
  cfg.pop_size = 12;
  cfg.gen_max = 15;
  cfg.seed = 11;
  int observed = 0;
  GaResult result =
      run(net, *net.find_variable("Alarm"), cfg,
          [&](int gen, const std::vector<Chromosome>& pop,
              const std::vector<double>& fits) {
            CHECK(gen == observed);
            CHECK(pop.size() == fits.size());
            ++observed;
          });
  CHECK(observed == cfg.gen_max + 1);
  REQUIRE(result.trace.records.size() ==
          static_cast<std::size_t>(cfg.gen_max + 1));
  for (std::size_t i = 1; i < result.trace.records.size(); ++i) {
    CHECK(result.trace.records[i].best_fitness >=
          result.trace.records[i - 1].best_fitness);
  }
  // The reported best is the final generation's best.
  CHECK(result.trace.records.back().best_fitness == result.best_fitness);

  FitnessParams p = cfg.fitness;
  p.target = *net.find_variable("Alarm");
  CHECK(chromosome_fitness(result.best, net, p) == result.best_fitness);
}

}  // TEST_SUITE
