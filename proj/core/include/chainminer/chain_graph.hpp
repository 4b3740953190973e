#pragma once

#include <string>
#include <vector>

#include "chainminer/network.hpp"
#include "chainminer/rule.hpp"

namespace chainminer {

enum class ChainMode {
  kPathToTarget,  // keep only children that can reach the target
  kAllChildren,
};

struct ChainEdge {
  int from = -1;
  int to = -1;
  int state = 0;  // state of `from`, the edge label

  friend bool operator==(const ChainEdge&, const ChainEdge&) = default;
};

struct ChainGraph {
  int target = -1;
  std::vector<ChainEdge> edges;
};

// Walks the rules in order; the first time a (variable, state) pair appears
// it contributes one edge per child of that variable, labeled with the
// state. Later occurrences of the same pair add nothing, so duplicate rules
// leave the graph unchanged. Every edge follows an arc of the network.
ChainGraph build_chain_graph(const std::vector<Rule>& rules,
                             const BayesianNetwork& net, int target,
                             ChainMode mode = ChainMode::kPathToTarget);

// Deterministic Graphviz text: nodes in id order, edges sorted by
// (from, to, state), the target drawn with a double periphery.
std::string to_dot(const ChainGraph& g, const BayesianNetwork& net);

}  // namespace chainminer
