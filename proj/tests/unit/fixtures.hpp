#pragma once

#include <string>
#include <vector>

#include <chainminer/network.hpp>

namespace fixtures {

// X -> T, both binary. P(x0) = 0.5; P(t0 | x0) = 0.2, P(t0 | x1) = 0.6.
// Small enough that every conditional is checkable by hand.
inline chainminer::BayesianNetwork two_var() {
  std::vector<chainminer::Variable> vars{
      {0, "X", {"x0", "x1"}},
      {1, "T", {"t0", "t1"}},
  };
  std::vector<chainminer::Cpt> cpts(2);
  cpts[0].child = 0;
  cpts[0].table = {0.5, 0.5};
  cpts[1].child = 1;
  cpts[1].parents = {0};
  cpts[1].table = {0.2, 0.8, 0.6, 0.4};
  return chainminer::BayesianNetwork("twovar", std::move(vars),
                                     std::move(cpts));
}

// A -> B where state a1 has probability zero, so conditioning on A = a1 is
// conditioning on an impossible event.
inline chainminer::BayesianNetwork zero_net() {
  std::vector<chainminer::Variable> vars{
      {0, "A", {"a0", "a1"}},
      {1, "B", {"b0", "b1"}},
  };
  std::vector<chainminer::Cpt> cpts(2);
  cpts[0].child = 0;
  cpts[0].table = {1.0, 0.0};
  cpts[1].child = 1;
  cpts[1].parents = {0};
  cpts[1].table = {0.3, 0.7, 0.5, 0.5};
  return chainminer::BayesianNetwork("zeronet", std::move(vars),
                                     std::move(cpts));
}

}  // namespace fixtures
