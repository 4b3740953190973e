#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "chainminer/network.hpp"
#include "chainminer/random.hpp"
#include "chainminer/rule.hpp"

namespace chainminer {

struct GaConfig {
  int pop_size = 50;
  int gen_max = 200;
  int tournament_size = 2;
  double alpha = 0.1;  // fraction of survivors refined each generation
  int gen_max_local = 5;
  double mask_prob = 0.5;
  int max_rules = 30;
  int init_rules_min = 5;
  int init_rules_max = 15;
  int pairs_per_generation = 1;  // parent pairs bred per generation
  std::uint64_t seed = 0;
  FitnessParams fitness;  // fitness.target is set by run()

  // ArgumentError when any field is outside its domain.
  void validate() const;
};

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  int best_size = 0;  // rule count of the best chromosome
};

// Per-generation statistics; best_fitness never decreases because survivor
// selection keeps the incumbent and refinement replaces only on strict
// improvement.
struct GaTrace {
  std::vector<GenerationRecord> records;
};

struct GaResult {
  Chromosome best;
  double best_fitness = 0.0;
  GaTrace trace;
};

// A rule built from one ancestral sample: the consequent takes the sampled
// target state, every other gene keeps its sampled state or is neutralized
// with probability mask_prob.
Rule new_rule(const BayesianNetwork& net, int target, RandomStream& rng,
              double mask_prob);

// pop_size chromosomes with rule counts uniform on
// [init_rules_min, init_rules_max].
std::vector<Chromosome> initialize_population(const BayesianNetwork& net,
                                              const GaConfig& cfg,
                                              RandomStream& rng);

// Samples k distinct indices uniformly and returns the one with maximal
// fitness; ties break toward the lowest index.
int tournament_select(const std::vector<double>& fitness, int k,
                      RandomStream& rng);

// Pools both parents' rules, shuffles, and deals the first ceil(n/2) to one
// child and the rest to the other. Rule multiset is conserved.
std::pair<Chromosome, Chromosome> structural_crossover(const Chromosome& a,
                                                       const Chromosome& b,
                                                       RandomStream& rng);

// Inserts or deletes (fair coin) max(1, round(|N(0,1)|)) rules, clamped so
// the result keeps between 1 and cfg.max_rules rules.
Chromosome structural_mutation(const Chromosome& c,
                               const BayesianNetwork& net, int target,
                               const GaConfig& cfg, RandomStream& rng);

// Hill-climbs chroms[0..count) in place for cfg.gen_max_local rounds. Each
// step crosses one random rule pair at a random cut point, re-samples a few
// random genes, and keeps the candidate only when strictly fitter. fits is
// kept in sync.
void local_search(std::vector<Chromosome>& chroms, std::vector<double>& fits,
                  std::size_t count, FitnessEvaluator& eval,
                  const GaConfig& cfg, RandomStream& rng);

// Called once per recorded generation with the population and its fitness.
using GenerationObserver = std::function<void(
    int generation, const std::vector<Chromosome>&, const std::vector<double>&)>;

// Full optimization: initialize, then per generation breed
// pairs_per_generation tournament-selected pairs, crossover, mutate, add the
// children, keep the best pop_size, and refine the top ceil(alpha*pop_size)
// survivors. Identical seeds give identical results.
GaResult run(const BayesianNetwork& net, int target, GaConfig cfg,
             const GenerationObserver& observer = {});

}  // namespace chainminer
