#include "chainminer/brute_force.hpp"

#include <algorithm>

#include "chainminer/error.hpp"
#include "chainminer/inference.hpp"

namespace chainminer {

BruteForceReport enumerate_all_rules(const BayesianNetwork& net, int target,
                                     double threshold) {
  if (target < 0 || target >= net.num_variables()) {
    throw ArgumentError("target id " + std::to_string(target) +
                        " out of range");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ArgumentError("threshold must lie in [0, 1]");
  }

  BruteForceReport report;
  report.target = target;
  report.threshold = threshold;

  std::vector<int> vars;
  for (int v = 0; v < net.num_variables(); ++v) {
    if (v != target) vars.push_back(v);
  }
  const auto t_card =
      static_cast<std::uint64_t>(net.variable(target).num_states());

  // Digit d over {0 = absent, 1..card = state d-1}, last variable fastest.
  std::vector<int> digit(vars.size(), 0);
  Assignment evidence = net.make_assignment();
  for (;;) {
    int k = static_cast<int>(vars.size()) - 1;
    while (k >= 0) {
      const auto ku = static_cast<std::size_t>(k);
      if (++digit[ku] <=
          net.variable(vars[ku]).num_states()) {
        evidence.set(vars[ku], digit[ku] - 1);
        break;
      }
      digit[ku] = 0;
      evidence.unset(vars[ku]);
      --k;
    }
    if (k < 0) break;  // rolled over: every combination visited

    report.candidates += t_card;
    std::vector<double> dist;
    try {
      dist = posterior(net, target, evidence);
    } catch (const ZeroEvidenceError&) {
      report.zero_evidence_skipped += t_card;
      continue;
    }
    for (std::uint64_t s = 0; s < t_card; ++s) {
      if (dist[s] >= threshold) {
        ScoredRule sr;
        sr.rule.genes.assign(static_cast<std::size_t>(net.num_variables()),
                             Rule::kNeutralGene);
        for (std::size_t j = 0; j < vars.size(); ++j) {
          if (digit[j] > 0) {
            sr.rule.genes[static_cast<std::size_t>(vars[j])] =
                static_cast<std::int8_t>(digit[j] - 1);
          }
        }
        sr.rule.target_state = static_cast<std::int8_t>(s);
        sr.probability = dist[s];
        report.rules.push_back(std::move(sr));
      }
    }
  }

  std::sort(report.rules.begin(), report.rules.end(),
            [](const ScoredRule& a, const ScoredRule& b) {
              return rule_less(a.rule, b.rule);
            });
  return report;
}

double average_probability(const std::vector<ScoredRule>& rules) {
  if (rules.empty()) {
    throw EmptySetError("no rules to average");
  }
  double sum = 0.0;
  for (const ScoredRule& r : rules) sum += r.probability;
  return sum / static_cast<double>(rules.size());
}

double BruteForceReport::average_probability() const {
  return chainminer::average_probability(rules);
}

}  // namespace chainminer
