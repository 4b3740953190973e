#pragma once

#include <cstdint>
#include <vector>

#include "chainminer/network.hpp"
#include "chainminer/rule.hpp"

namespace chainminer {

struct BruteForceReport {
  int target = -1;
  double threshold = 0.0;
  // Antecedent/consequent pairs visited: (prod_i (s_i + 1) - 1) * target
  // states, over non-target variables.
  std::uint64_t candidates = 0;
  // Candidates whose antecedent has probability zero; never retained.
  std::uint64_t zero_evidence_skipped = 0;
  // probability >= threshold, in canonical rule order.
  std::vector<ScoredRule> rules;

  bool empty() const { return rules.empty(); }
  // EmptySetError when no rule qualified.
  double average_probability() const;
};

// Scores every rule with a non-empty antecedent over the non-target
// variables against every target state, retaining those whose conditional
// probability reaches the threshold (inclusive). threshold must lie in
// [0, 1].
BruteForceReport enumerate_all_rules(const BayesianNetwork& net, int target,
                                     double threshold);

// Arithmetic mean; EmptySetError on an empty list.
double average_probability(const std::vector<ScoredRule>& rules);

}  // namespace chainminer
