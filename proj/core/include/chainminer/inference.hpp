#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "chainminer/network.hpp"
#include "chainminer/random.hpp"

namespace chainminer {

struct Query {
  int target = -1;
  int target_state = -1;
  Assignment evidence;
};

// ArgumentError unless ids and states are in range and the target is not
// part of the evidence.
void validate_query(const BayesianNetwork& net, const Query& q);

// P(X1..Xn) for a full assignment: one CPT entry per variable, multiplied in
// id order.
double joint_probability(const BayesianNetwork& net, const Assignment& full);

// Posterior distribution of `target` given `evidence`, computed by variable
// elimination (min-degree ordering on the moralized evidence-reduced graph,
// ties by ascending id). Throws ZeroEvidenceError when the evidence itself
// has probability zero.
std::vector<double> posterior(const BayesianNetwork& net, int target,
                              const Assignment& evidence);

// P(target = state | evidence) via posterior().
double query(const BayesianNetwork& net, const Query& q);

// The same conditional by direct summation over the full joint. Exponential
// in network size; kept as an independent check on query().
double enumerate_query(const BayesianNetwork& net, const Query& q);

// One full assignment drawn from the joint, sampling each variable in
// topological order given its parents.
Assignment ancestral_sample(const BayesianNetwork& net, RandomStream& rng);

// Memo for posterior() keyed on (target, evidence). Hits return the exact
// vector the original miss computed, so caching never changes a result.
// Zero-probability evidence is remembered as an empty vector. Insertions
// stop at max_entries; lookups past that point just recompute.
class PosteriorCache {
 public:
  static constexpr std::size_t kDefaultMaxEntries = std::size_t{1} << 20;

  explicit PosteriorCache(const BayesianNetwork& net,
                          std::size_t max_entries = kDefaultMaxEntries)
      : net_(&net), max_entries_(max_entries) {}

  // Empty result means the evidence has probability zero.
  const std::vector<double>& fetch(int target, const Assignment& evidence);

  // Throws ZeroEvidenceError, matching query().
  double query(const Query& q);

  const BayesianNetwork& network() const { return *net_; }
  std::size_t size() const { return map_.size(); }

 private:
  const BayesianNetwork* net_;
  std::size_t max_entries_;
  std::unordered_map<std::string, std::vector<double>> map_;
  std::vector<double> overflow_;  // result slot once the map is full
};

}  // namespace chainminer
