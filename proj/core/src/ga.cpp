#include "chainminer/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chainminer/error.hpp"
#include "chainminer/inference.hpp"

namespace chainminer {

namespace {

int mutation_count(RandomStream& rng) {
  return std::max(1, static_cast<int>(std::lround(std::fabs(rng.normal()))));
}

// CDF walk matching ancestral_sample's state draw.
int sample_distribution(const std::vector<double>& dist, RandomStream& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  int last_positive = 0;
  for (std::size_t s = 0; s < dist.size(); ++s) {
    if (dist[s] > 0.0) last_positive = static_cast<int>(s);
    cum += dist[s];
    if (u < cum) return static_cast<int>(s);
  }
  return last_positive;
}

GenerationRecord make_record(int generation,
                             const std::vector<Chromosome>& pop,
                             const std::vector<double>& fits) {
  GenerationRecord rec;
  rec.generation = generation;
  std::size_t best = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    sum += fits[i];
    if (fits[i] > fits[best]) best = i;
  }
  rec.best_fitness = fits[best];
  rec.mean_fitness = sum / static_cast<double>(fits.size());
  rec.best_size = static_cast<int>(pop[best].rules.size());
  return rec;
}

}  // namespace

void GaConfig::validate() const {
  if (pop_size < 2) throw ArgumentError("pop_size must be at least 2");
  if (gen_max < 1) throw ArgumentError("gen_max must be positive");
  if (tournament_size < 2 || tournament_size > pop_size) {
    throw ArgumentError("tournament_size must lie in [2, pop_size]");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ArgumentError("alpha must lie in (0, 1]");
  }
  if (gen_max_local < 1) {
    throw ArgumentError("gen_max_local must be positive");
  }
  if (!(mask_prob >= 0.0 && mask_prob <= 1.0)) {
    throw ArgumentError("mask_prob must lie in [0, 1]");
  }
  if (max_rules < 1) throw ArgumentError("max_rules must be positive");
  if (init_rules_min < 1 || init_rules_min > init_rules_max ||
      init_rules_max > max_rules) {
    throw ArgumentError(
        "init rule counts must satisfy 1 <= min <= max <= max_rules");
  }
  if (pairs_per_generation < 1) {
    throw ArgumentError("pairs_per_generation must be positive");
  }
  if (!(fitness.beta >= 0.0 && fitness.beta <= 1.0)) {
    throw ArgumentError("beta must lie in [0, 1]");
  }
  if (!(fitness.gamma >= 0.0)) throw ArgumentError("gamma must be >= 0");
}

Rule new_rule(const BayesianNetwork& net, int target, RandomStream& rng,
              double mask_prob) {
  const Assignment sample = ancestral_sample(net, rng);
  Rule r;
  r.genes.assign(static_cast<std::size_t>(net.num_variables()),
                 Rule::kNeutralGene);
  for (int v = 0; v < net.num_variables(); ++v) {
    if (v == target) continue;
    if (!rng.coin(mask_prob)) {
      r.genes[static_cast<std::size_t>(v)] =
          static_cast<std::int8_t>(sample[v]);
    }
  }
  r.target_state = static_cast<std::int8_t>(sample[target]);
  return r;
}

std::vector<Chromosome> initialize_population(const BayesianNetwork& net,
                                              const GaConfig& cfg,
                                              RandomStream& rng) {
  std::vector<Chromosome> pop;
  pop.reserve(static_cast<std::size_t>(cfg.pop_size));
  const auto span =
      static_cast<std::uint64_t>(cfg.init_rules_max - cfg.init_rules_min + 1);
  for (int i = 0; i < cfg.pop_size; ++i) {
    const int count =
        cfg.init_rules_min + static_cast<int>(rng.uniform_int(span));
    Chromosome c;
    c.rules.reserve(static_cast<std::size_t>(count));
    for (int r = 0; r < count; ++r) {
      c.rules.push_back(
          new_rule(net, cfg.fitness.target, rng, cfg.mask_prob));
    }
    pop.push_back(std::move(c));
  }
  return pop;
}

int tournament_select(const std::vector<double>& fitness, int k,
                      RandomStream& rng) {
  const auto n = fitness.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw ArgumentError("tournament size must lie in [1, population size]");
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  int best = -1;
  for (int j = 0; j < k; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    std::swap(idx[ju], idx[ju + rng.index(n - ju)]);
    const int c = idx[ju];
    if (best < 0 || fitness[static_cast<std::size_t>(c)] >
                        fitness[static_cast<std::size_t>(best)] ||
        (fitness[static_cast<std::size_t>(c)] ==
             fitness[static_cast<std::size_t>(best)] &&
         c < best)) {
      best = c;
    }
  }
  return best;
}

std::pair<Chromosome, Chromosome> structural_crossover(const Chromosome& a,
                                                       const Chromosome& b,
                                                       RandomStream& rng) {
  std::vector<Rule> pool = a.rules;
  pool.insert(pool.end(), b.rules.begin(), b.rules.end());
  rng.shuffle(pool);
  const std::size_t first = (pool.size() + 1) / 2;
  Chromosome c1;
  Chromosome c2;
  c1.rules.assign(pool.begin(),
                  pool.begin() + static_cast<std::ptrdiff_t>(first));
  c2.rules.assign(pool.begin() + static_cast<std::ptrdiff_t>(first),
                  pool.end());
  return {std::move(c1), std::move(c2)};
}

Chromosome structural_mutation(const Chromosome& c,
                               const BayesianNetwork& net, int target,
                               const GaConfig& cfg, RandomStream& rng) {
  Chromosome out = c;
  const bool insert = rng.coin(0.5);
  const int count = mutation_count(rng);
  if (insert) {
    for (int i = 0; i < count; ++i) {
      if (static_cast<int>(out.rules.size()) >= cfg.max_rules) break;
      out.rules.push_back(new_rule(net, target, rng, cfg.mask_prob));
    }
  } else {
    for (int i = 0; i < count; ++i) {
      if (out.rules.size() <= 1) break;
      out.rules.erase(out.rules.begin() +
                      static_cast<std::ptrdiff_t>(rng.index(out.rules.size())));
    }
  }
  return out;
}

void local_search(std::vector<Chromosome>& chroms, std::vector<double>& fits,
                  std::size_t count, FitnessEvaluator& eval,
                  const GaConfig& cfg, RandomStream& rng) {
  const BayesianNetwork& net = eval.network();
  const int target = eval.params().target;
  const int num_vars = net.num_variables();
  const Assignment no_evidence = net.make_assignment();

  for (std::size_t i = 0; i < count && i < chroms.size(); ++i) {
    for (int round = 0; round < cfg.gen_max_local; ++round) {
      Chromosome cand = chroms[i];
      const std::size_t n = cand.rules.size();
      if (n >= 2 && num_vars >= 2) {
        // One-point crossover of two distinct member rules; each keeps its
        // own consequent.
        const std::size_t r1 = rng.index(n);
        std::size_t r2 = rng.index(n - 1);
        if (r2 >= r1) ++r2;
        const std::size_t cut =
            1 + rng.index(static_cast<std::size_t>(num_vars - 1));
        for (std::size_t g = cut; g < static_cast<std::size_t>(num_vars);
             ++g) {
          std::swap(cand.rules[r1].genes[g], cand.rules[r2].genes[g]);
        }
      }
      const int edits = mutation_count(rng);
      for (int e = 0; e < edits; ++e) {
        Rule& r = cand.rules[rng.index(cand.rules.size())];
        const auto slot = rng.index(static_cast<std::size_t>(num_vars - 1));
        const int v = static_cast<int>(slot) < target
                          ? static_cast<int>(slot)
                          : static_cast<int>(slot) + 1;
        if (rng.coin(cfg.mask_prob)) {
          r.genes[static_cast<std::size_t>(v)] = Rule::kNeutralGene;
        } else {
          const auto& marginal = eval.cache().fetch(v, no_evidence);
          r.genes[static_cast<std::size_t>(v)] =
              static_cast<std::int8_t>(sample_distribution(marginal, rng));
        }
      }
      const double f = eval.chromosome_fitness(cand);
      if (f > fits[i]) {
        chroms[i] = std::move(cand);
        fits[i] = f;
      }
    }
  }
}

GaResult run(const BayesianNetwork& net, int target, GaConfig cfg,
             const GenerationObserver& observer) {
  if (target < 0 || target >= net.num_variables()) {
    throw ArgumentError("target id " + std::to_string(target) +
                        " out of range");
  }
  cfg.fitness.target = target;
  cfg.validate();

  RandomStream rng(cfg.seed);
  FitnessEvaluator eval(net, cfg.fitness);

  std::vector<Chromosome> pop = initialize_population(net, cfg, rng);
  std::vector<double> fits;
  fits.reserve(pop.size());
  for (const Chromosome& c : pop) {
    fits.push_back(eval.chromosome_fitness(c));
  }

  GaResult result;
  result.trace.records.push_back(make_record(0, pop, fits));
  if (observer) observer(0, pop, fits);

  const auto refine_count = std::min(
      static_cast<std::size_t>(
          std::ceil(cfg.alpha * static_cast<double>(cfg.pop_size))),
      static_cast<std::size_t>(cfg.pop_size));

  for (int gen = 1; gen <= cfg.gen_max; ++gen) {
    for (int pair = 0; pair < cfg.pairs_per_generation; ++pair) {
      const int p1 = tournament_select(fits, cfg.tournament_size, rng);
      const int p2 = tournament_select(fits, cfg.tournament_size, rng);
      auto children = structural_crossover(pop[static_cast<std::size_t>(p1)],
                                           pop[static_cast<std::size_t>(p2)],
                                           rng);
      Chromosome m1 =
          structural_mutation(children.first, net, target, cfg, rng);
      Chromosome m2 =
          structural_mutation(children.second, net, target, cfg, rng);
      fits.push_back(eval.chromosome_fitness(m1));
      pop.push_back(std::move(m1));
      fits.push_back(eval.chromosome_fitness(m2));
      pop.push_back(std::move(m2));
    }

    // Keep the best pop_size; equal fitness favors the earlier entry, so the
    // incumbent outlives an equally fit child.
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&fits](std::size_t a, std::size_t b) {
                if (fits[a] != fits[b]) return fits[a] > fits[b];
                return a < b;
              });
    std::vector<Chromosome> next_pop;
    std::vector<double> next_fits;
    next_pop.reserve(static_cast<std::size_t>(cfg.pop_size));
    next_fits.reserve(static_cast<std::size_t>(cfg.pop_size));
    for (int i = 0; i < cfg.pop_size; ++i) {
      next_pop.push_back(std::move(pop[order[static_cast<std::size_t>(i)]]));
      next_fits.push_back(fits[order[static_cast<std::size_t>(i)]]);
    }
    pop = std::move(next_pop);
    fits = std::move(next_fits);

    local_search(pop, fits, refine_count, eval, cfg, rng);

    result.trace.records.push_back(make_record(gen, pop, fits));
    if (observer) observer(gen, pop, fits);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < fits.size(); ++i) {
    if (fits[i] > fits[best]) best = i;
  }
  result.best = pop[best];
  result.best_fitness = fits[best];
  return result;
}

}  // namespace chainminer
