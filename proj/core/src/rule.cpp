#include "chainminer/rule.hpp"

#include <algorithm>
#include <cmath>

#include "chainminer/error.hpp"

namespace chainminer {

namespace {

void validate_rule(const BayesianNetwork& net, const Rule& r, int target) {
  if (target < 0 || target >= net.num_variables()) {
    throw ArgumentError("target id " + std::to_string(target) +
                        " out of range");
  }
  if (static_cast<int>(r.genes.size()) != net.num_variables()) {
    throw ArgumentError("rule has " + std::to_string(r.genes.size()) +
                        " genes, network has " +
                        std::to_string(net.num_variables()) + " variables");
  }
  for (int v = 0; v < net.num_variables(); ++v) {
    const std::int8_t g = r.genes[static_cast<std::size_t>(v)];
    if (g < Rule::kNeutralGene || g >= net.variable(v).num_states()) {
      throw ArgumentError("gene " + std::to_string(g) +
                          " out of range for variable '" +
                          net.variable(v).name + "'");
    }
  }
  if (r.genes[static_cast<std::size_t>(target)] != Rule::kNeutralGene) {
    throw ArgumentError("target slot of a rule must stay neutral");
  }
  if (r.target_state < 0 ||
      r.target_state >= net.variable(target).num_states()) {
    throw ArgumentError("consequent state " + std::to_string(r.target_state) +
                        " out of range for variable '" +
                        net.variable(target).name + "'");
  }
}

double probability_impl(PosteriorCache& cache, const Rule& r, int target) {
  validate_rule(cache.network(), r, target);
  const auto& dist = cache.fetch(target, rule_evidence(r, cache.network()));
  if (dist.empty()) return 0.0;
  return dist[static_cast<std::size_t>(r.target_state)];
}

double rule_fit_impl(PosteriorCache& cache, const Rule& r,
                     const FitnessParams& p, bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (!(p.beta >= 0.0 && p.beta <= 1.0)) {
    throw ArgumentError("beta must lie in [0, 1]");
  }
  if (!(p.gamma >= 0.0)) throw ArgumentError("gamma must be >= 0");
  const double prob = probability_impl(cache, r, p.target);
  const int t = specificity(r);
  if (t == 0 && p.beta == 0.0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return std::pow(t + p.beta, -p.gamma) * prob;
}

double chromosome_fitness_impl(PosteriorCache& cache, const Chromosome& c,
                               const FitnessParams& p) {
  std::vector<Rule> distinct = c.rules;
  std::sort(distinct.begin(), distinct.end(), rule_less);
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  const auto n = static_cast<double>(distinct.size());
  double total = 0.0;
  for (const Rule& r : distinct) {
    double same_consequent = 0.0;
    for (const Rule& other : distinct) {
      if (other.target_state == r.target_state) same_consequent += 1.0;
    }
    const double balance = std::sqrt((n - same_consequent) / n);
    total += balance * rule_fit_impl(cache, r, p, nullptr);
  }
  return total;
}

}  // namespace

bool rule_less(const Rule& a, const Rule& b) {
  if (a.genes != b.genes) {
    return std::lexicographical_compare(a.genes.begin(), a.genes.end(),
                                        b.genes.begin(), b.genes.end());
  }
  return a.target_state < b.target_state;
}

int specificity(const Rule& r) {
  int t = 0;
  for (std::int8_t g : r.genes) {
    if (g != Rule::kNeutralGene) ++t;
  }
  return t;
}

Assignment rule_evidence(const Rule& r, const BayesianNetwork& net) {
  Assignment e = net.make_assignment();
  for (int v = 0; v < net.num_variables(); ++v) {
    const std::int8_t g = r.genes[static_cast<std::size_t>(v)];
    if (g != Rule::kNeutralGene) e.set(v, g);
  }
  return e;
}

std::string rule_text(const Rule& r, const BayesianNetwork& net, int target) {
  std::string out;
  for (int v = 0; v < net.num_variables(); ++v) {
    const std::int8_t g = r.genes[static_cast<std::size_t>(v)];
    if (g == Rule::kNeutralGene) continue;
    if (!out.empty()) out += " and ";
    out += net.variable(v).name + "=" +
           net.variable(v).states[static_cast<std::size_t>(g)];
  }
  if (out.empty()) out = "true";
  const Variable& t = net.variable(target);
  out += " => " + t.name + "=" +
         t.states[static_cast<std::size_t>(r.target_state)];
  return out;
}

double rule_fit(const Rule& r, const BayesianNetwork& net,
                const FitnessParams& p, bool* degenerate) {
  PosteriorCache cache(net);
  return rule_fit_impl(cache, r, p, degenerate);
}

double chromosome_fitness(const Chromosome& c, const BayesianNetwork& net,
                          const FitnessParams& p) {
  PosteriorCache cache(net);
  return chromosome_fitness_impl(cache, c, p);
}

double FitnessEvaluator::probability(const Rule& r) {
  return probability_impl(cache_, r, params_.target);
}

double FitnessEvaluator::rule_fit(const Rule& r, bool* degenerate) {
  return rule_fit_impl(cache_, r, params_, degenerate);
}

double FitnessEvaluator::chromosome_fitness(const Chromosome& c) {
  return chromosome_fitness_impl(cache_, c, params_);
}

}  // namespace chainminer
