#include "chainminer/chain_graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "chainminer/error.hpp"

namespace chainminer {

ChainGraph build_chain_graph(const std::vector<Rule>& rules,
                             const BayesianNetwork& net, int target,
                             ChainMode mode) {
  if (target < 0 || target >= net.num_variables()) {
    throw ArgumentError("target id " + std::to_string(target) +
                        " out of range");
  }
  ChainGraph g;
  g.target = target;
  std::set<std::pair<int, int>> seen;  // (variable, state)
  for (const Rule& r : rules) {
    if (static_cast<int>(r.genes.size()) != net.num_variables()) {
      throw ArgumentError("rule gene count does not match the network");
    }
    for (int v = 0; v < net.num_variables(); ++v) {
      const std::int8_t s = r.genes[static_cast<std::size_t>(v)];
      if (s == Rule::kNeutralGene) continue;
      if (!seen.insert({v, s}).second) continue;
      for (int child : net.children(v)) {
        if (mode == ChainMode::kPathToTarget &&
            !net.has_directed_path(child, target)) {
          continue;
        }
        g.edges.push_back(ChainEdge{v, child, s});
      }
    }
  }
  return g;
}

std::string to_dot(const ChainGraph& g, const BayesianNetwork& net) {
  std::vector<ChainEdge> edges = g.edges;
  std::sort(edges.begin(), edges.end(),
            [](const ChainEdge& a, const ChainEdge& b) {
              if (a.from != b.from) return a.from < b.from;
              if (a.to != b.to) return a.to < b.to;
              return a.state < b.state;
            });

  std::set<int> nodes;
  nodes.insert(g.target);
  for (const ChainEdge& e : edges) {
    nodes.insert(e.from);
    nodes.insert(e.to);
  }

  std::ostringstream out;
  out << "digraph chain {\n  rankdir=LR;\n";
  for (int v : nodes) {
    out << "  \"" << net.variable(v).name << "\"";
    if (v == g.target) out << " [peripheries=2]";
    out << ";\n";
  }
  for (const ChainEdge& e : edges) {
    out << "  \"" << net.variable(e.from).name << "\" -> \""
        << net.variable(e.to).name << "\" [label=\""
        << net.variable(e.from).states[static_cast<std::size_t>(e.state)]
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace chainminer
