#pragma once

#include <string>
#include <vector>

#include "chainminer/ga.hpp"
#include "chainminer/network.hpp"
#include "chainminer/rule.hpp"
#include "chainminer/text.hpp"

namespace chainminer {

// Rule tables travel as CSV: one column per non-target variable holding a
// state name or "*", then the target state, then the rule's conditional
// probability. Column order follows variable ids.
std::string rules_to_csv(const std::vector<ScoredRule>& rules,
                         const BayesianNetwork& net, int target);

// Inverse of rules_to_csv. ParseError carries the offending line number.
std::vector<ScoredRule> rules_from_csv(const std::string& text,
                                       const BayesianNetwork& net, int target);

// generation,best_fitness,mean_fitness,best_size
std::string trace_to_csv(const GaTrace& trace);

}  // namespace chainminer
