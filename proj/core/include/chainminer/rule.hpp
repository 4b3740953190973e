#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chainminer/inference.hpp"
#include "chainminer/network.hpp"

namespace chainminer {

// One antecedent/consequent pattern over a network's variables. genes holds
// a slot per variable; kNeutralGene marks variables absent from the
// antecedent. The slot of the target variable stays neutral; the consequent
// state lives in target_state.
struct Rule {
  static constexpr std::int8_t kNeutralGene = -1;

  std::vector<std::int8_t> genes;
  std::int8_t target_state = 0;

  friend bool operator==(const Rule&, const Rule&) = default;
};

// Lexicographic on (genes, target_state). Fixes summation and output order
// wherever a rule set must not depend on discovery order.
bool rule_less(const Rule& a, const Rule& b);

// Count of non-neutral genes (antecedent size).
int specificity(const Rule& r);

// The antecedent as evidence.
Assignment rule_evidence(const Rule& r, const BayesianNetwork& net);

// Human-readable form, e.g. "asia=no and either=yes => dysp=yes". An empty
// antecedent renders as "true".
std::string rule_text(const Rule& r, const BayesianNetwork& net, int target);

struct Chromosome {
  std::vector<Rule> rules;
};

struct FitnessParams {
  double beta = 1.0;
  double gamma = 1.0;
  int target = -1;
};

// A rule with its conditional probability attached.
struct ScoredRule {
  Rule rule;
  double probability = 0.0;
};

// (T + beta)^-gamma * P(consequent | antecedent), T = specificity.
// Zero-probability antecedents score 0. T = 0 with beta = 0 scores 0 and
// sets *degenerate when provided.
double rule_fit(const Rule& r, const BayesianNetwork& net,
                const FitnessParams& p, bool* degenerate = nullptr);

// Sum over distinct rules of sqrt((N - N_c) / N) * rule_fit, where N counts
// distinct rules and N_c those sharing the rule's consequent state.
// Duplicates are dropped before scoring, and the sum runs in canonical rule
// order, so the value is invariant under permutation and duplication.
double chromosome_fitness(const Chromosome& c, const BayesianNetwork& net,
                          const FitnessParams& p);

// Binds network + params and memoizes inference across evaluations. Results
// are identical to the free functions.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const BayesianNetwork& net, const FitnessParams& p)
      : params_(p), cache_(net) {}

  // P(consequent | antecedent); 0 when the antecedent has probability zero.
  double probability(const Rule& r);
  double rule_fit(const Rule& r, bool* degenerate = nullptr);
  double chromosome_fitness(const Chromosome& c);

  const BayesianNetwork& network() const { return cache_.network(); }
  const FitnessParams& params() const { return params_; }
  PosteriorCache& cache() { return cache_; }

 private:
  FitnessParams params_;
  PosteriorCache cache_;
};

}  // namespace chainminer
